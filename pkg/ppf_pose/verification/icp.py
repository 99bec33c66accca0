# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Projective ICP: model points find their partner at the pixel they project to."""

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from typeguard import typechecked

from ppf_pose.geometry import OrientedPointCloud, RigidTransform, orthonormalize
from ppf_pose.matching import PoseHypothesis, Status

from .camera import CameraIntrinsics, DepthImage
from .observation import Observation
from .params import VerifyParams
from .render import NEAR, RenderModel

logger = logging.getLogger(__name__)

MIN_CORRESPONDENCES = 6


@dataclass(frozen=True)
class ICPResult:
    """Final pose plus one (rms before, rms after) pair per accepted step."""

    pose: RigidTransform
    rms_history: list[tuple[float, float]] = field(default_factory=list)
    iterations: int = 0
    low_support: bool = False


@dataclass(frozen=True, eq=False)
class Correspondences:
    model: np.ndarray
    scene: np.ndarray
    scene_normals: np.ndarray

    def __len__(self) -> int:
        return len(self.model)


def projective_correspondences(
    cloud: OrientedPointCloud, pose: RigidTransform, obs: Observation, p: VerifyParams
) -> Correspondences:
    """Pair each posed model point with the scene point measured at its pixel.

    Pairs further apart than `icp_reject_dist`, or whose normals differ by more
    than `icp_reject_angle`, are dropped; so are scene pixels without a normal.
    """
    pts = pose.transform_points(cloud.points)
    normals = pose.transform_normals(cloud.normals)
    front = pts[:, 2] > NEAR
    pts, normals = pts[front], normals[front]
    u, v = obs.cam.project(pts)
    u, v = np.rint(u).astype(np.int64), np.rint(v).astype(np.int64)
    inside = (u >= 0) & (u < obs.cam.width) & (v >= 0) & (v < obs.cam.height)
    pts, normals, u, v = pts[inside], normals[inside], u[inside], v[inside]

    scene = obs.points[v, u]
    scene_normals = obs.normals[v, u]
    ok = (scene[:, 2] > 0) & np.any(scene_normals != 0, axis=1)
    ok &= np.linalg.norm(pts - scene, axis=1) <= p.icp_reject_dist
    ok &= np.einsum("ij,ij->i", normals, scene_normals) >= math.cos(p.icp_reject_angle)
    return Correspondences(pts[ok], scene[ok], scene_normals[ok])


def plane_rms(model: np.ndarray, c: Correspondences) -> float:
    residual = np.einsum("ij,ij->i", model - c.scene, c.scene_normals)
    return float(np.sqrt(np.mean(residual**2)))


def point_to_plane_step(c: Correspondences) -> RigidTransform:
    """Small-angle least squares for the increment minimising the plane residuals."""
    n = c.scene_normals
    a = np.c_[np.cross(c.model, n), n]
    b = -np.einsum("ij,ij->i", c.model - c.scene, n)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    return RigidTransform.from_rotvec(x[:3], x[3:])


def point_to_point_step(c: Correspondences) -> RigidTransform:
    """Kabsch alignment of the matched points."""
    mu_m = c.model.mean(axis=0)
    mu_s = c.scene.mean(axis=0)
    h = (c.model - mu_m).T @ (c.scene - mu_s)
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    r = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    return RigidTransform(r, mu_s - r @ mu_m)


def point_rms(model: np.ndarray, c: Correspondences) -> float:
    return float(np.sqrt(np.mean(np.sum((model - c.scene) ** 2, axis=1))))


_VARIANTS = {
    "point_to_plane": (point_to_plane_step, plane_rms),
    "point_to_point": (point_to_point_step, point_rms),
}


def refine_pose(
    cloud: OrientedPointCloud,
    pose: RigidTransform,
    obs: Observation,
    p: VerifyParams,
    variant: str = "point_to_plane",
) -> ICPResult:
    """Iterate projective ICP from `pose`.

    A step is kept only when the error over the current correspondences does
    not grow; otherwise the loop ends at the previous pose.
    """
    if variant not in _VARIANTS:
        raise ValueError(f"unknown ICP variant {variant!r}; expected one of {sorted(_VARIANTS)}")
    p.require_resolved()
    solve, error = _VARIANTS[variant]

    history: list[tuple[float, float]] = []
    iterations = 0
    for _ in range(p.icp_iters):
        c = projective_correspondences(cloud, pose, obs, p)
        if len(c) < MIN_CORRESPONDENCES:
            logger.debug("ICP stopped with %d correspondences", len(c))
            return ICPResult(pose, history, iterations, low_support=True)
        iterations += 1
        step = solve(c)
        before = error(c.model, c)
        after = error(step.transform_points(c.model), c)
        if after > before:
            break
        composed = step @ pose
        pose = RigidTransform(orthonormalize(composed.rotation), composed.translation)
        history.append((before, after))
        angle = step.rotation_angle(RigidTransform.identity())
        if angle < p.icp_min_angle_step and np.linalg.norm(step.translation) < p.icp_min_trans_step:
            break
    return ICPResult(pose, history, iterations)


@typechecked
def projective_icp(
    h: PoseHypothesis,
    scene_depth: DepthImage,
    cam: CameraIntrinsics,
    model: RenderModel,
    p: VerifyParams,
) -> PoseHypothesis:
    """Point-to-plane refinement of `h`; the result is marked refined."""
    return refine_hypothesis(h, Observation(scene_depth, cam), model, p)


def refine_hypothesis(
    h: PoseHypothesis, obs: Observation, model: RenderModel, p: VerifyParams
) -> PoseHypothesis:
    result = refine_pose(model.cloud, h.pose, obs, p)
    return replace(h, pose=result.pose, status=Status.REFINED, low_support=result.low_support)
