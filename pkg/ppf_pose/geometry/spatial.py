# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""kd-tree spatial index."""

import numpy as np
from scipy.spatial import cKDTree
from typeguard import typechecked


class SpatialIndex:
    """Immutable radius-query index over a point set."""

    def __init__(self, points: np.ndarray) -> None:
        self._points = np.array(points, dtype=np.float64).reshape(-1, 3)
        self._points.setflags(write=False)
        self._tree = cKDTree(self._points)

    @property
    def points(self) -> np.ndarray:
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def query_radius(self, center: np.ndarray, r: float) -> np.ndarray:
        """Sorted int64 indices with |p - center| <= r."""
        found = self._tree.query_ball_point(np.asarray(center, dtype=np.float64), r)
        return np.array(sorted(found), dtype=np.int64)

    def query_pairs(self, r: float) -> np.ndarray:
        """All unordered index pairs (i < j) closer than or at r, as an (M,2) array."""
        return self._tree.query_pairs(r, output_type="ndarray")


@typechecked
def build_index(points: np.ndarray) -> SpatialIndex:
    return SpatialIndex(points)


@typechecked
def radius_query(idx: SpatialIndex, center: np.ndarray, r: float) -> list[int]:
    """Exactly the indices i with |p_i - center| <= r."""
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    return [int(i) for i in idx.query_radius(center, r)]
