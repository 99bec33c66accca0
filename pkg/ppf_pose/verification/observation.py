# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from functools import cached_property

import numpy as np
from scipy import ndimage

from .camera import CameraIntrinsics, DepthImage, point_map, scene_normal_map

_CROSS = ndimage.generate_binary_structure(2, 1)
_SQUARE = ndimage.generate_binary_structure(2, 2)


def depth_edges(depth: np.ndarray, jump: float) -> np.ndarray:
    """Pixels differing from a 4-neighbour by more than `jump` (missing data reads as 0)."""
    edges = np.zeros(depth.shape, dtype=bool)
    dx = np.abs(np.diff(depth, axis=1)) > jump
    dy = np.abs(np.diff(depth, axis=0)) > jump
    edges[:, 1:] |= dx
    edges[:, :-1] |= dx
    edges[1:, :] |= dy
    edges[:-1, :] |= dy
    return edges


def dilate(mask: np.ndarray, pixels: int) -> np.ndarray:
    if pixels == 0:
        return mask
    return ndimage.binary_dilation(mask, structure=_SQUARE, iterations=pixels)


def silhouette(mask: np.ndarray) -> np.ndarray:
    """Mask pixels with at least one 4-neighbour outside the mask (or the image)."""
    inner = ndimage.binary_erosion(mask, structure=_CROSS, border_value=0)
    return mask & ~inner


class Observation:
    """A scene depth image plus the per-pixel maps verification keeps reusing."""

    def __init__(self, depth: DepthImage, cam: CameraIntrinsics) -> None:
        if not depth.matches(cam):
            raise ValueError(
                f"depth image {depth.depth.shape} does not match intrinsics {cam.shape}"
            )
        self.depth = depth
        self.cam = cam
        self._edges: dict[tuple[float, int], np.ndarray] = {}

    @cached_property
    def points(self) -> np.ndarray:
        return point_map(self.depth, self.cam)

    @cached_property
    def normals(self) -> np.ndarray:
        return scene_normal_map(self.depth, self.cam)

    def edge_map(self, jump: float, dilation: int) -> np.ndarray:
        key = (jump, dilation)
        if key not in self._edges:
            self._edges[key] = dilate(depth_edges(self.depth.depth, jump), dilation)
        return self._edges[key]
