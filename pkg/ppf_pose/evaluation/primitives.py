# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Small triangle meshes for fixtures and synthetic scenes, centred on their bounding box."""

import numpy as np
from scipy.spatial import ConvexHull

from ppf_pose.geometry import ObjectModel, OrientedPointCloud, vertex_normals_from_faces


def _model(vertices: np.ndarray, faces: np.ndarray, name: str) -> ObjectModel:
    vertices = vertices - 0.5 * (vertices.min(axis=0) + vertices.max(axis=0))
    normals, _ = vertex_normals_from_faces(vertices, faces)
    return ObjectModel(OrientedPointCloud(vertices, normals), faces, name)


def extrude_polygon(
    outline: np.ndarray, cap: np.ndarray, height: float, name: str = ""
) -> ObjectModel:
    """Prism over a counter-clockwise xy outline; `cap` triangulates the outline.

    Faces wind counter-clockwise seen from outside.
    """
    outline = np.asarray(outline, dtype=np.float64)
    cap = np.asarray(cap, dtype=np.int64)
    n = len(outline)
    vertices = np.r_[np.c_[outline, np.zeros(n)], np.c_[outline, np.full(n, height)]]
    a = np.arange(n)
    b = (a + 1) % n
    sides = np.r_[np.c_[a, b, b + n], np.c_[a, b + n, a + n]]
    faces = np.r_[cap[:, ::-1], cap + n, sides]
    return _model(vertices, faces, name)


def box_mesh(size: float | tuple[float, float, float], name: str = "box") -> ObjectModel:
    sx, sy, sz = (size, size, size) if np.isscalar(size) else size
    if min(sx, sy, sz) <= 0:
        raise ValueError("box sides must be > 0")
    outline = np.array([[0.0, 0.0], [sx, 0.0], [sx, sy], [0.0, sy]])
    return extrude_polygon(outline, np.array([[0, 1, 2], [0, 2, 3]]), sz, name)


def l_block_mesh(
    arm: float = 80.0,
    short_arm: float = 60.0,
    thickness: float = 30.0,
    height: float = 40.0,
    name: str = "l_block",
) -> ObjectModel:
    """An L-shaped prism with unequal arms: no rotational symmetry, so every pose is distinct."""
    if not 0 < thickness < min(arm, short_arm) or short_arm >= arm or height <= 0:
        raise ValueError("need 0 < thickness < short_arm < arm and height > 0")
    a, b, t = arm, short_arm, thickness
    outline = np.array([[0.0, 0.0], [a, 0.0], [a, t], [t, t], [t, b], [0.0, b]])
    # Fan from the reflex corner.
    cap = np.array([[3, 4, 5], [3, 5, 0], [3, 0, 1], [3, 1, 2]])
    return extrude_polygon(outline, cap, height, name)


def plane_mesh(width: float, height: float, name: str = "plane") -> ObjectModel:
    """A single-sided rectangle in z = 0 facing +z."""
    if width <= 0 or height <= 0:
        raise ValueError("plane sides must be > 0")
    vertices = np.array(
        [[0.0, 0.0, 0.0], [width, 0.0, 0.0], [width, height, 0.0], [0.0, height, 0.0]]
    )
    return _model(vertices, np.array([[0, 1, 2], [0, 2, 3]]), name)


def sphere_mesh(radius: float, n_vertices: int = 200, name: str = "sphere") -> ObjectModel:
    """Convex hull of a Fibonacci lattice on the sphere."""
    if radius <= 0 or n_vertices < 4:
        raise ValueError("need radius > 0 and at least 4 vertices")
    i = np.arange(n_vertices) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / n_vertices)
    azimuth = np.pi * (1.0 + 5.0**0.5) * i
    vertices = radius * np.c_[
        np.cos(azimuth) * np.sin(polar), np.sin(azimuth) * np.sin(polar), np.cos(polar)
    ]
    faces = ConvexHull(vertices).simplices.astype(np.int64)
    v = vertices[faces]
    outward = np.einsum("ij,ij->i", np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]), v.mean(axis=1))
    faces[outward < 0] = faces[outward < 0][:, ::-1]
    return _model(vertices, faces, name)


PRIMITIVES = {
    "box": box_mesh,
    "sphere": sphere_mesh,
    "plane": plane_mesh,
    "l_block": l_block_mesh,
}
