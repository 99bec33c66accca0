# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from .camera import (
    CameraIntrinsics,
    DepthImage,
    backproject,
    pixel_rays,
    point_map,
    scene_normal_map,
)
from .filters import (
    consistency_filter,
    edge_overlap_filter,
    edge_overlap_rate,
    nonconsistent_fraction,
    scene_edge_map,
)
from .icp import ICPResult, projective_correspondences, projective_icp, refine_pose
from .observation import Observation, silhouette
from .params import VerifyParams
from .pipeline import verify_hypotheses, verify_pipeline
from .render import RenderModel, Rendering, rasterize_mesh, render_depth, splat_points
from .rescore import fit_score, rescore, rescore_hypotheses

__all__ = [
    "CameraIntrinsics",
    "DepthImage",
    "ICPResult",
    "Observation",
    "RenderModel",
    "Rendering",
    "VerifyParams",
    "backproject",
    "consistency_filter",
    "edge_overlap_filter",
    "edge_overlap_rate",
    "fit_score",
    "nonconsistent_fraction",
    "pixel_rays",
    "point_map",
    "projective_correspondences",
    "projective_icp",
    "rasterize_mesh",
    "refine_pose",
    "render_depth",
    "rescore",
    "rescore_hypotheses",
    "scene_edge_map",
    "scene_normal_map",
    "silhouette",
    "splat_points",
    "verify_hypotheses",
    "verify_pipeline",
]
