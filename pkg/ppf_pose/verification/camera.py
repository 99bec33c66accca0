# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Pinhole camera and depth image types."""

from dataclasses import dataclass

import numpy as np
from typeguard import typechecked


@dataclass(frozen=True)
class CameraIntrinsics:
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("fx and fy must be > 0")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image size must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ValueError("principal point must lie inside the image")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def project(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Continuous pixel coordinates (u, v) of camera-frame points; z must be > 0."""
        p = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return self.fx * p[:, 0] / p[:, 2] + self.cx, self.fy * p[:, 1] / p[:, 2] + self.cy


@dataclass(frozen=True, eq=False)
class DepthImage:
    """Row-major depth in mm; 0 means no measurement."""

    depth: np.ndarray

    def __post_init__(self) -> None:
        depth = np.array(self.depth, dtype=np.float64)
        if depth.ndim != 2:
            raise ValueError(f"depth must be 2-D, got shape {depth.shape}")
        if not np.all(np.isfinite(depth)) or (depth < 0).any():
            raise ValueError("depth values must be finite and non-negative")
        depth.setflags(write=False)
        object.__setattr__(self, "depth", depth)

    @classmethod
    def empty(cls, cam: CameraIntrinsics) -> "DepthImage":
        return cls(np.zeros(cam.shape))

    @property
    def width(self) -> int:
        return self.depth.shape[1]

    @property
    def height(self) -> int:
        return self.depth.shape[0]

    @property
    def valid(self) -> np.ndarray:
        return self.depth > 0

    def matches(self, cam: CameraIntrinsics) -> bool:
        return self.depth.shape == cam.shape


def pixel_rays(cam: CameraIntrinsics) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel (x/z, y/z) ratios on the pixel-centre grid."""
    v, u = np.mgrid[0 : cam.height, 0 : cam.width].astype(np.float64)
    return (u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy


@typechecked
def backproject(
    depth: DepthImage, cam: CameraIntrinsics
) -> tuple[np.ndarray, np.ndarray]:
    """Camera-frame points (N,3) of measured pixels and their flat pixel indices."""
    if not depth.matches(cam):
        raise ValueError("depth image and intrinsics disagree on size")
    rx, ry = pixel_rays(cam)
    flat = np.flatnonzero(depth.depth.ravel() > 0)
    z = depth.depth.ravel()[flat]
    points = np.c_[rx.ravel()[flat] * z, ry.ravel()[flat] * z, z]
    return points, flat


def point_map(depth: DepthImage, cam: CameraIntrinsics) -> np.ndarray:
    """(H, W, 3) camera-frame points; zeros where depth is missing."""
    rx, ry = pixel_rays(cam)
    z = depth.depth
    return np.stack([rx * z, ry * z, z], axis=-1)


@typechecked
def scene_normal_map(depth: DepthImage, cam: CameraIntrinsics) -> np.ndarray:
    """(H, W, 3) unit normals from central differences, facing the camera.

    Pixels without a full measured 4-neighbourhood, or straddling a depth jump
    above 10% of their depth plus 1 mm, get a zero normal.
    """
    pts = point_map(depth, cam)
    valid = depth.valid
    normals = np.zeros_like(pts)
    du = pts[1:-1, 2:] - pts[1:-1, :-2]
    dv = pts[2:, 1:-1] - pts[:-2, 1:-1]
    inner = (
        valid[1:-1, 1:-1]
        & valid[1:-1, 2:]
        & valid[1:-1, :-2]
        & valid[2:, 1:-1]
        & valid[:-2, 1:-1]
    )
    z = depth.depth[1:-1, 1:-1]
    max_jump = 0.1 * z + 1.0
    inner &= (np.abs(du[..., 2]) < max_jump) & (np.abs(dv[..., 2]) < max_jump)
    n = np.cross(du, dv)
    length = np.linalg.norm(n, axis=-1)
    inner &= length > 0
    n[inner] /= length[inner, None]
    facing = (n * pts[1:-1, 1:-1]).sum(-1) > 0
    n[facing] *= -1.0
    n[~inner] = 0.0
    normals[1:-1, 1:-1] = n
    return normals
