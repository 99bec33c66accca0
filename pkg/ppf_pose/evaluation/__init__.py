# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from .primitives import (
    PRIMITIVES,
    box_mesh,
    extrude_polygon,
    l_block_mesh,
    plane_mesh,
    sphere_mesh,
)
from .recall import (
    RecallError,
    RecallRow,
    RecallSummary,
    TargetResult,
    format_recall_table,
    recall,
    recall_table_csv,
    summarize_recall,
)
from .synthetic import (
    Distractor,
    SceneLayers,
    SceneSpec,
    SceneSpecError,
    background_wall,
    generate_scene,
    random_scene_spec,
    render_layers,
)
from .vsd import VSDParams, discrepancy, is_correct, pose_errors, visibility_mask, vsd_error

__all__ = [
    "PRIMITIVES",
    "Distractor",
    "RecallError",
    "RecallRow",
    "RecallSummary",
    "SceneLayers",
    "SceneSpec",
    "SceneSpecError",
    "TargetResult",
    "VSDParams",
    "background_wall",
    "box_mesh",
    "discrepancy",
    "extrude_polygon",
    "format_recall_table",
    "generate_scene",
    "is_correct",
    "l_block_mesh",
    "plane_mesh",
    "pose_errors",
    "random_scene_spec",
    "recall",
    "recall_table_csv",
    "render_layers",
    "sphere_mesh",
    "summarize_recall",
    "visibility_mask",
    "vsd_error",
]
