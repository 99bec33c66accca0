# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Oriented point clouds, object models and their kernels."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist
from typeguard import typechecked

from .transform import RigidTransform

logger = logging.getLogger(__name__)

_UNIT_TOL = 1e-6

# Above this many hull vertices the pairwise scan is chunked.
_PDIST_CHUNK = 4096


def _max_pairwise(points: np.ndarray) -> float:
    n = len(points)
    if n < 2:
        return 0.0
    if n <= _PDIST_CHUNK:
        return float(pdist(points).max())
    best = 0.0
    for start in range(0, n, 256):
        block = points[start : start + 256]
        d2 = ((block[:, None, :] - points[None, :, :]) ** 2).sum(-1)
        best = max(best, float(np.sqrt(d2.max())))
    return best


def compute_diameter(points: np.ndarray) -> float:
    """Exact maximum pairwise distance; the extremes always lie on the convex hull."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(pts) <= 8:
        return _max_pairwise(pts)
    try:
        return _max_pairwise(pts[ConvexHull(pts).vertices])
    except QhullError:
        pass
    # Flat or collinear input: hull in the principal plane.
    centered = pts - pts.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    try:
        return _max_pairwise(pts[ConvexHull(centered @ vt[:2].T).vertices])
    except QhullError:
        along = centered @ vt[0]
        return float(along.max() - along.min())


@dataclass(frozen=True, eq=False)
class OrientedPointCloud:
    """Points (N,3) in mm with unit normals (N,3)."""

    points: np.ndarray
    normals: np.ndarray
    diameter: float | None = None

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=np.float64).reshape(-1, 3)
        normals = np.array(self.normals, dtype=np.float64).reshape(-1, 3)
        if len(points) != len(normals):
            raise ValueError(
                f"points and normals differ in length ({len(points)} != {len(normals)})"
            )
        if not np.all(np.isfinite(points)):
            raise ValueError("points must be finite")
        if len(normals) and np.abs(np.linalg.norm(normals, axis=1) - 1.0).max() > _UNIT_TOL:
            raise ValueError("normals must be unit length")
        points.setflags(write=False)
        normals.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "normals", normals)
        if self.diameter is None:
            object.__setattr__(self, "diameter", compute_diameter(points))
        else:
            object.__setattr__(self, "diameter", float(self.diameter))

    def __len__(self) -> int:
        return len(self.points)

    def subset(self, indices: np.ndarray) -> "OrientedPointCloud":
        return OrientedPointCloud(self.points[indices], self.normals[indices])

    def as_float32(self) -> "OrientedPointCloud":
        """Round to single precision (the PPFM storage precision), renormalising normals."""
        points = self.points.astype(np.float32).astype(np.float64)
        normals = self.normals.astype(np.float32).astype(np.float64)
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        normals = normals.astype(np.float32).astype(np.float64)
        return OrientedPointCloud(points, normals)


@dataclass(frozen=True, eq=False)
class ObjectModel:
    """A model cloud plus optional triangle faces indexing into the cloud points."""

    cloud: OrientedPointCloud
    faces: np.ndarray | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.faces is not None:
            faces = np.array(self.faces, dtype=np.int64).reshape(-1, 3)
            if len(faces) and (faces.min() < 0 or faces.max() >= len(self.cloud)):
                raise ValueError("face index out of range")
            faces.setflags(write=False)
            object.__setattr__(self, "faces", faces)

    @property
    def has_faces(self) -> bool:
        return self.faces is not None and len(self.faces) > 0


@typechecked
def apply_transform(t: RigidTransform, c: OrientedPointCloud) -> OrientedPointCloud:
    """Map points by R·p + T and normals by R·n; the diameter is carried over."""
    normals = t.transform_normals(c.normals)
    if len(normals):
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return OrientedPointCloud(t.transform_points(c.points), normals, diameter=c.diameter)


def face_normals(vertices: np.ndarray, faces: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalised face normals (length = 2·area) and areas."""
    v = np.asarray(vertices, dtype=np.float64)
    f = np.asarray(faces, dtype=np.int64)
    cross = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
    return cross, 0.5 * np.linalg.norm(cross, axis=1)


def vertex_normals_from_faces(
    vertices: np.ndarray, faces: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Area-weighted vertex normals and a validity mask (vertices touched by a face)."""
    v = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    f = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
    cross, _ = face_normals(v, f)
    accum = np.zeros_like(v)
    for corner in range(3):
        np.add.at(accum, f[:, corner], cross)
    length = np.linalg.norm(accum, axis=1)
    valid = length > 1e-12
    normals = np.zeros_like(v)
    normals[valid] = accum[valid] / length[valid, None]
    return normals, valid


@typechecked
def sample_surface(
    model: ObjectModel, spacing: float, rng: np.random.Generator
) -> OrientedPointCloud:
    """Area-weighted surface samples (about one per spacing²) carrying face normals."""
    if not model.has_faces:
        raise ValueError("surface sampling needs faces")
    if spacing <= 0:
        raise ValueError("spacing must be > 0")
    v = model.cloud.points
    f = model.faces
    cross, areas = face_normals(v, f)
    keep = areas > 1e-12
    f, cross, areas = f[keep], cross[keep], areas[keep]
    counts = np.maximum(1, np.ceil(areas / spacing**2)).astype(np.int64)
    face_idx = np.repeat(np.arange(len(f)), counts)
    r1 = np.sqrt(rng.random(len(face_idx)))
    r2 = rng.random(len(face_idx))
    a, b, c = (v[f[face_idx, k]] for k in range(3))
    points = (1 - r1)[:, None] * a + (r1 * (1 - r2))[:, None] * b + (r1 * r2)[:, None] * c
    normals = cross[face_idx] / (2.0 * areas[face_idx, None])
    logger.debug("sampled %d surface points from %d faces", len(points), len(f))
    return OrientedPointCloud(points, normals)
