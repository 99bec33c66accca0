# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from .bop import BopFormatError, BopImage, bop_scene_record, list_bop_images, load_bop_scene
from .depth import (
    DEFAULT_DEPTH_SCALE,
    DepthFormatError,
    IntrinsicsError,
    depth_to_raw,
    format_intrinsics,
    load_depth,
    load_intrinsics,
    parse_intrinsics,
    raw_to_depth,
    read_depth_png,
    save_depth,
    save_intrinsics,
    write_depth_png,
)
from .ply import (
    PlyError,
    PlyHeaderError,
    PlyMesh,
    PlyTruncatedError,
    PlyUnsupportedError,
    load_model_file,
    parse_header,
    parse_ply,
    write_ply,
)
from .results import (
    DetectionRecord,
    ResultsError,
    empty_record,
    format_results,
    parse_results,
    read_results,
    write_results,
)
from .scene_spec import build_scene_specs, load_scene_spec, parse_scene_spec
from .scenes import (
    GroundTruth,
    GroundTruthError,
    SceneRecord,
    format_ground_truth,
    list_scenes,
    load_scene,
    parse_ground_truth,
    write_scene,
)

__all__ = [
    "DEFAULT_DEPTH_SCALE",
    "BopFormatError",
    "BopImage",
    "DepthFormatError",
    "DetectionRecord",
    "GroundTruth",
    "GroundTruthError",
    "IntrinsicsError",
    "PlyError",
    "PlyHeaderError",
    "PlyMesh",
    "PlyTruncatedError",
    "PlyUnsupportedError",
    "ResultsError",
    "SceneRecord",
    "bop_scene_record",
    "build_scene_specs",
    "depth_to_raw",
    "empty_record",
    "format_ground_truth",
    "format_intrinsics",
    "format_results",
    "list_bop_images",
    "list_scenes",
    "load_bop_scene",
    "load_depth",
    "load_intrinsics",
    "load_model_file",
    "load_scene",
    "load_scene_spec",
    "parse_ground_truth",
    "parse_header",
    "parse_intrinsics",
    "parse_ply",
    "parse_results",
    "parse_scene_spec",
    "raw_to_depth",
    "read_depth_png",
    "read_results",
    "save_depth",
    "save_intrinsics",
    "write_depth_png",
    "write_ply",
    "write_results",
    "write_scene",
]
