# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from .clustering import cluster_hypotheses, weighted_quaternion_mean
from .hypothesis import PoseHypothesis, Status, score_order, vote_order
from .params import MatchParams
from .voting import (
    Accumulator,
    DuplicateLog,
    Peak,
    duplicate_suppression,
    extract_peak,
    first_occurrence,
    match_scene,
    peak_angle,
    rotation_bins,
    scene_alpha_bins,
    vote_reference_point,
)

__all__ = [
    "Accumulator",
    "DuplicateLog",
    "MatchParams",
    "Peak",
    "PoseHypothesis",
    "Status",
    "cluster_hypotheses",
    "duplicate_suppression",
    "extract_peak",
    "first_occurrence",
    "match_scene",
    "peak_angle",
    "rotation_bins",
    "scene_alpha_bins",
    "score_order",
    "vote_order",
    "vote_reference_point",
    "weighted_quaternion_mean",
]
