# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Normal estimation by local PCA."""

import logging

import numpy as np
from scipy.spatial import cKDTree
from typeguard import typechecked

from .cloud import OrientedPointCloud

logger = logging.getLogger(__name__)

DEFAULT_K = 20

_CHUNK = 32768


def _pca_normals(points: np.ndarray, neighbors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    local = points[neighbors]
    centered = local - local.mean(axis=1, keepdims=True)
    cov = np.einsum("nki,nkj->nij", centered, centered) / neighbors.shape[1]
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    normals = eigenvectors[:, :, 0]
    largest = eigenvalues[:, 2]
    # Zero spread, or spread along a single line: no plane to speak of.
    valid = (largest > 1e-12) & (eigenvalues[:, 1] > 1e-9 * largest)
    return normals, valid


@typechecked
def estimate_normals(
    points: np.ndarray, k: int = DEFAULT_K, viewpoint: np.ndarray | None = None
) -> OrientedPointCloud:
    """Smallest-eigenvector normals of the k-NN covariance, oriented towards `viewpoint`.

    Points whose neighbourhood is degenerate get no normal and are dropped.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if len(pts) < k:
        raise ValueError(f"need at least k={k} points, got {len(pts)}")
    view = np.zeros(3) if viewpoint is None else np.asarray(viewpoint, dtype=np.float64)

    tree = cKDTree(pts)
    normals = np.empty_like(pts)
    valid = np.empty(len(pts), dtype=bool)
    for start in range(0, len(pts), _CHUNK):
        stop = min(start + _CHUNK, len(pts))
        _, nn = tree.query(pts[start:stop], k=k)
        normals[start:stop], valid[start:stop] = _pca_normals(pts, nn)

    flip = np.einsum("ij,ij->i", normals, view - pts) < 0
    normals[flip] *= -1.0
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)

    dropped = int((~valid).sum())
    if dropped:
        logger.debug("dropped %d points with degenerate neighbourhoods", dropped)
    return OrientedPointCloud(pts[valid], normals[valid])
