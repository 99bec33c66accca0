# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from .cloud import (
    ObjectModel,
    OrientedPointCloud,
    apply_transform,
    compute_diameter,
    sample_surface,
    vertex_normals_from_faces,
)
from .normals import estimate_normals
from .spatial import SpatialIndex, build_index, radius_query
from .transform import RigidTransform, orthonormalize, random_rigid_transform

__all__ = [
    "ObjectModel",
    "OrientedPointCloud",
    "RigidTransform",
    "SpatialIndex",
    "apply_transform",
    "build_index",
    "compute_diameter",
    "estimate_normals",
    "orthonormalize",
    "radius_query",
    "random_rigid_transform",
    "sample_surface",
    "vertex_normals_from_faces",
]
