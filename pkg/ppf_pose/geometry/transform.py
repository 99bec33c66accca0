# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Rigid transforms on millimetre geometry."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

_ORTHONORMAL_TOL = 1e-6


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def orthonormalize(rotation: np.ndarray) -> np.ndarray:
    """Project a near-rotation matrix onto SO(3) (closest in Frobenius norm)."""
    u, _, vt = np.linalg.svd(np.asarray(rotation, dtype=np.float64))
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] *= -1
        r = u @ vt
    return r


@dataclass(frozen=True, eq=False)
class RigidTransform:
    """x' = rotation @ x + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self) -> None:
        r = np.array(self.rotation, dtype=np.float64).reshape(3, 3)
        t = np.array(self.translation, dtype=np.float64).reshape(3)
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(t))):
            raise ValueError("transform must be finite")
        if (
            np.abs(r @ r.T - np.eye(3)).max() > _ORTHONORMAL_TOL
            or abs(np.linalg.det(r) - 1.0) > _ORTHONORMAL_TOL
        ):
            raise ValueError("rotation must be orthonormal with determinant +1")
        object.__setattr__(self, "rotation", _frozen(r))
        object.__setattr__(self, "translation", _frozen(t))

    # --------------------------------------------------------------------------------------------------
    # Construction
    # --------------------------------------------------------------------------------------------------

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "RigidTransform":
        m = np.asarray(matrix, dtype=np.float64)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        return cls(m[:3, :3], m[:3, 3])

    @classmethod
    def from_rotvec(
        cls, rotvec: np.ndarray, translation: np.ndarray | None = None
    ) -> "RigidTransform":
        t = np.zeros(3) if translation is None else translation
        return cls(Rotation.from_rotvec(np.asarray(rotvec, float)).as_matrix(), t)

    @classmethod
    def rot_x(cls, angle: float) -> "RigidTransform":
        c, s = np.cos(angle), np.sin(angle)
        r = np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
        return cls(r, np.zeros(3))

    # --------------------------------------------------------------------------------------------------
    # Algebra
    # --------------------------------------------------------------------------------------------------

    def as_matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        """self ∘ other: apply `other` first."""
        return RigidTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def __matmul__(self, other: "RigidTransform") -> "RigidTransform":
        return self.compose(other)

    def inverse(self) -> "RigidTransform":
        rt = self.rotation.T
        return RigidTransform(rt, -rt @ self.translation)

    def transform_points(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=np.float64) @ self.rotation.T + self.translation

    def transform_normals(self, normals: np.ndarray) -> np.ndarray:
        return np.asarray(normals, dtype=np.float64) @ self.rotation.T

    def as_quaternion(self) -> np.ndarray:
        """Scalar-last (x, y, z, w)."""
        return Rotation.from_matrix(self.rotation).as_quat()

    # --------------------------------------------------------------------------------------------------
    # Distances
    # --------------------------------------------------------------------------------------------------

    def rotation_angle(self, other: "RigidTransform") -> float:
        """Geodesic angle (radians) between the two rotations."""
        relative = self.rotation @ other.rotation.T
        cos = np.clip((np.trace(relative) - 1.0) / 2.0, -1.0, 1.0)
        return float(np.arccos(cos))

    def translation_distance(self, other: "RigidTransform") -> float:
        return float(np.linalg.norm(self.translation - other.translation))

    def allclose(
        self, other: "RigidTransform", rot_tol: float = 1e-9, trans_tol: float = 1e-6
    ) -> bool:
        return bool(
            np.abs(self.rotation - other.rotation).max() <= rot_tol
            and np.abs(self.translation - other.translation).max() <= trans_tol
        )

    def __repr__(self) -> str:
        angle = np.degrees(self.rotation_angle(RigidTransform.identity()))
        t = ", ".join(f"{v:.3f}" for v in self.translation)
        return f"RigidTransform(angle={angle:.3f}deg, t=({t}))"


def random_rigid_transform(
    rng: np.random.Generator,
    max_translation: float = 100.0,
    max_angle: float | None = None,
) -> RigidTransform:
    """Uniform random rotation (or bounded angle about a random axis) plus a box translation."""
    if max_angle is None:
        rotation = Rotation.random(None, rng).as_matrix()
    else:
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        rotation = Rotation.from_rotvec(axis * rng.uniform(0.0, max_angle)).as_matrix()
    translation = rng.uniform(-max_translation, max_translation, size=3)
    return RigidTransform(rotation, translation)
