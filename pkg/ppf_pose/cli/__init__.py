# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from .detect import (
    STAGES,
    DetectionResult,
    config_for_table,
    detection_record,
    prepare_scene,
    render_model,
    run_detection,
    train_model,
    training_cloud,
)
from .main import build_parser, main
from .summary import format_bench_summary, format_detection_summary, format_train_summary

__all__ = [
    "STAGES",
    "DetectionResult",
    "build_parser",
    "config_for_table",
    "detection_record",
    "format_bench_summary",
    "format_detection_summary",
    "format_train_summary",
    "main",
    "prepare_scene",
    "render_model",
    "run_detection",
    "train_model",
    "training_cloud",
]
