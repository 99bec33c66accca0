# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Z-buffered depth rendering of meshes and splatted clouds."""

from dataclasses import dataclass
from functools import cache

import numpy as np
from typeguard import typechecked

from ppf_pose.geometry import ObjectModel, OrientedPointCloud, RigidTransform

from .camera import CameraIntrinsics, DepthImage

# Geometry at or in front of this depth (mm) is not drawn.
NEAR = 1e-3

_MAX_SPLAT_RADIUS = 64
_EDGE_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class RenderModel:
    """What verification draws: a mesh when one is known, otherwise the cloud as splats.

    `cloud` is the subsampled model (ICP samples it); `leaf` sizes the splats.
    """

    cloud: OrientedPointCloud
    leaf: float
    mesh: ObjectModel | None = None

    def __post_init__(self) -> None:
        if not self.leaf > 0:
            raise ValueError(f"leaf must be > 0, got {self.leaf}")
        if self.mesh is not None and not self.mesh.has_faces:
            raise ValueError("mesh must have faces")

    @property
    def diameter(self) -> float:
        return float(self.cloud.diameter)


@dataclass(frozen=True, eq=False)
class Rendering:
    depth: DepthImage
    mask: np.ndarray

    @property
    def empty(self) -> bool:
        return not self.mask.any()


def _finish(zbuf: np.ndarray) -> Rendering:
    mask = np.isfinite(zbuf)
    return Rendering(DepthImage(np.where(mask, zbuf, 0.0)), mask)


def rasterize_mesh(
    vertices: np.ndarray, faces: np.ndarray, cam: CameraIntrinsics
) -> Rendering:
    """Camera-frame triangles into a depth buffer, depth interpolated as 1/z."""
    zbuf = np.full(cam.shape, np.inf)
    tri = vertices[faces]
    z = tri[:, :, 2]
    tri = tri[(z > NEAR).all(axis=1)]
    if len(tri) == 0:
        return _finish(zbuf)

    u = cam.fx * tri[:, :, 0] / tri[:, :, 2] + cam.cx
    v = cam.fy * tri[:, :, 1] / tri[:, :, 2] + cam.cy
    inv_z = 1.0 / tri[:, :, 2]

    u0 = np.maximum(np.ceil(u.min(axis=1)), 0).astype(np.int64)
    u1 = np.minimum(np.floor(u.max(axis=1)), cam.width - 1).astype(np.int64)
    v0 = np.maximum(np.ceil(v.min(axis=1)), 0).astype(np.int64)
    v1 = np.minimum(np.floor(v.max(axis=1)), cam.height - 1).astype(np.int64)
    # Twice the signed screen area.
    area = (u[:, 1] - u[:, 0]) * (v[:, 2] - v[:, 0])
    area -= (u[:, 2] - u[:, 0]) * (v[:, 1] - v[:, 0])
    keep = (u1 >= u0) & (v1 >= v0) & (np.abs(area) > 1e-12)
    if not keep.any():
        return _finish(zbuf)
    u, v, inv_z, area = u[keep], v[keep], inv_z[keep], area[keep]
    u0, v0 = u0[keep], v0[keep]
    widths, heights = (u1 - u0 + 1)[keep], (v1 - v0 + 1)[keep]

    # Every pixel centre inside each triangle's bounding box.
    counts = widths * heights
    t = np.repeat(np.arange(len(counts)), counts)
    local = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    px = u0[t] + local % widths[t]
    py = v0[t] + local // widths[t]

    def edge(a: int, b: int) -> np.ndarray:
        return (u[t, b] - u[t, a]) * (py - v[t, a]) - (v[t, b] - v[t, a]) * (px - u[t, a])

    w0 = edge(1, 2) / area[t]
    w1 = edge(2, 0) / area[t]
    w2 = edge(0, 1) / area[t]
    inside = (w0 >= -_EDGE_EPS) & (w1 >= -_EDGE_EPS) & (w2 >= -_EDGE_EPS)
    t, px, py = t[inside], px[inside], py[inside]
    inv_depth = w0[inside] * inv_z[t, 0] + w1[inside] * inv_z[t, 1] + w2[inside] * inv_z[t, 2]
    depth = 1.0 / inv_depth
    np.minimum.at(zbuf, (py, px), depth)
    return _finish(zbuf)


@cache
def _disk(radius: int) -> tuple[np.ndarray, np.ndarray]:
    dy, dx = np.mgrid[-radius : radius + 1, -radius : radius + 1]
    inside = dx * dx + dy * dy <= radius * radius
    return dy[inside], dx[inside]


def splat_points(points: np.ndarray, leaf: float, cam: CameraIntrinsics) -> Rendering:
    """Camera-frame points as flat discs of radius ceil(fx·leaf/z) pixels."""
    zbuf = np.full(cam.shape, np.inf)
    pts = points[points[:, 2] > NEAR]
    if len(pts) == 0:
        return _finish(zbuf)
    u, v = cam.project(pts)
    cu, cv = np.rint(u).astype(np.int64), np.rint(v).astype(np.int64)
    radius = np.minimum(np.ceil(cam.fx * leaf / pts[:, 2]), _MAX_SPLAT_RADIUS).astype(np.int64)
    for r in np.unique(radius).tolist():
        sel = radius == r
        dy, dx = _disk(r)
        py = (cv[sel][:, None] + dy[None, :]).ravel()
        px = (cu[sel][:, None] + dx[None, :]).ravel()
        z = np.repeat(pts[sel, 2], len(dy))
        ok = (px >= 0) & (px < cam.width) & (py >= 0) & (py < cam.height)
        np.minimum.at(zbuf, (py[ok], px[ok]), z[ok])
    return _finish(zbuf)


@typechecked
def render_depth(model: RenderModel, pose: RigidTransform, cam: CameraIntrinsics) -> Rendering:
    """Depth of the posed model as the camera sees it; zeros and an empty mask off-screen."""
    if model.mesh is not None:
        vertices = pose.transform_points(model.mesh.cloud.points)
        return rasterize_mesh(vertices, model.mesh.faces, cam)
    return splat_points(pose.transform_points(model.cloud.points), model.leaf, cam)
