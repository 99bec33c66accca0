# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Canonical point-normal frames and the rotation angle about their x axis.

A frame maps its point to the origin and its normal onto +x. The remaining roll
about x is fixed by the shortest rotation taking n to x (Rodrigues about n × x),
or a half turn about z when n points along -x.
"""

import numpy as np
from typeguard import typechecked

from ppf_pose.geometry import RigidTransform

# Below this |(y, z)| a transformed point sits on the x axis and has no angle.
_AXIS_EPS = 1e-12


def intermediate_frames(
    points: np.ndarray, normals: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Batched frames: rotations (N,3,3) and translations (N,3)."""
    p = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    n = np.asarray(normals, dtype=np.float64).reshape(-1, 3)
    n = n / np.linalg.norm(n, axis=1, keepdims=True)
    nx, ny, nz = n[:, 0], n[:, 1], n[:, 2]

    # v = n × x = (0, nz, -ny); R = I + [v]x + [v]x² / (1 + nx)
    yz2 = ny * ny + nz * nz
    flipped = yz2 <= 0.0
    safe = np.where(flipped, 1.0, yz2)
    factor = np.where(nx >= 0, 1.0 / (1.0 + np.maximum(nx, 0.0)), (1.0 - nx) / safe)

    r = np.zeros((len(n), 3, 3))
    r[:, 0, 0] = 1.0 - factor * yz2
    r[:, 0, 1] = ny
    r[:, 0, 2] = nz
    r[:, 1, 0] = -ny
    r[:, 1, 1] = 1.0 - factor * ny * ny
    r[:, 1, 2] = -factor * ny * nz
    r[:, 2, 0] = -nz
    r[:, 2, 1] = -factor * ny * nz
    r[:, 2, 2] = 1.0 - factor * nz * nz
    r[flipped & (nx < 0)] = np.diag([-1.0, -1.0, 1.0])

    t = -np.einsum("nij,nj->ni", r, p)
    return r, t


@typechecked
def intermediate_frame(p: np.ndarray, n: np.ndarray) -> RigidTransform:
    r, t = intermediate_frames(np.reshape(p, (1, 3)), np.reshape(n, (1, 3)))
    return RigidTransform(r[0], t[0])


def alpha_angles(
    rotations: np.ndarray, translations: np.ndarray, others: np.ndarray
) -> np.ndarray:
    """atan2(z', y') of each frame-mapped point, in (-pi, pi]; 0 on the x axis."""
    mapped = np.einsum("nij,nj->ni", rotations, others) + translations
    y, z = mapped[:, 1], mapped[:, 2]
    alpha = np.arctan2(z, y)
    alpha[alpha <= -np.pi] = np.pi
    alpha[np.hypot(y, z) <= _AXIS_EPS] = 0.0
    return alpha


@typechecked
def alpha_angle(frame: RigidTransform, p_other: np.ndarray) -> float:
    alpha = alpha_angles(
        frame.rotation[None], frame.translation[None], np.reshape(p_other, (1, 3))
    )
    return float(alpha[0])


@typechecked
def pose_from_correspondence(
    t_s: RigidTransform, t_m: RigidTransform, alpha_m: float, alpha_s: float
) -> RigidTransform:
    """Model-to-scene pose T_s⁻¹ · Rot_x(alpha_s - alpha_m) · T_m.

    Rot_x is the right-handed rotation; the scene pair's angle is the model pair's
    angle advanced by the roll between the two frames.
    """
    return t_s.inverse() @ RigidTransform.rot_x(alpha_s - alpha_m) @ t_m
