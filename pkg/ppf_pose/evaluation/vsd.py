# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Visible Surface Discrepancy on camera-z depth with a step matching cost."""

from dataclasses import dataclass

import numpy as np
from typeguard import typechecked

from ppf_pose.geometry import RigidTransform
from ppf_pose.verification import CameraIntrinsics, DepthImage, RenderModel, render_depth


@dataclass(frozen=True)
class VSDParams:
    delta: float = 15.0
    tau: float = 20.0
    t: float = 0.35

    def __post_init__(self) -> None:
        if not (self.delta > 0 and self.tau > 0):
            raise ValueError("delta and tau must be > 0")
        if not 0 < self.t < 1:
            raise ValueError("t must be in (0, 1)")


def visibility_mask(
    rendered: DepthImage, mask: np.ndarray, scene: DepthImage, delta: float
) -> np.ndarray:
    """Measured render pixels where the scene is not in front by more than delta."""
    return mask & scene.valid & (rendered.depth <= scene.depth + delta)


def discrepancy(
    depth_gt: np.ndarray,
    visible_gt: np.ndarray,
    depth_est: np.ndarray,
    visible_est: np.ndarray,
    tau: float,
) -> float:
    union = visible_gt | visible_est
    total = int(union.sum())
    if total == 0:
        return 1.0
    both = visible_gt & visible_est
    far = np.abs(depth_gt[both] - depth_est[both]) >= tau
    return float(total - both.sum() + far.sum()) / total


@typechecked
def vsd_error(
    pose_est: RigidTransform,
    pose_gt: RigidTransform,
    model: RenderModel,
    scene_depth: DepthImage,
    cam: CameraIntrinsics,
    p: VSDParams = VSDParams(),
) -> float:
    """Share of the union of both visible surfaces where they are missing or disagree by tau."""
    gt = render_depth(model, pose_gt, cam)
    est = render_depth(model, pose_est, cam)
    return discrepancy(
        gt.depth.depth,
        visibility_mask(gt.depth, gt.mask, scene_depth, p.delta),
        est.depth.depth,
        visibility_mask(est.depth, est.mask, scene_depth, p.delta),
        p.tau,
    )


def is_correct(e: float, p: VSDParams = VSDParams()) -> bool:
    return bool(e < p.t)


def pose_errors(est: RigidTransform, gt: RigidTransform) -> tuple[float, float]:
    """(rotation error in degrees, translation error in mm); for debug printouts."""
    return float(np.degrees(est.rotation_angle(gt))), est.translation_distance(gt)
