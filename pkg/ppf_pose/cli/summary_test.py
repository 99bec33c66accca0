# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

import numpy as np

from ppf_pose.cli import DetectionResult, format_bench_summary, format_detection_summary
from ppf_pose.geometry import RigidTransform
from ppf_pose.matching import PoseHypothesis, Status

POSE = RigidTransform(np.eye(3), np.array([10.0, -5.0, 600.0]))
TIMINGS = {"scene": 12.0, "matching": 80.0, "clustering": 3.0, "verification": 45.0}


def _result(accepted: bool) -> DetectionResult:
    candidates = [
        PoseHypothesis(POSE, 40, 0.9, status=Status.ACCEPTED if accepted else Status.REJECTED_EDGE),
        PoseHypothesis(POSE, 30, 0.5, status=Status.REJECTED_CONSISTENCY),
    ]
    best = candidates[0] if accepted else None
    return DetectionResult(best, candidates, 900, 180, 25, TIMINGS)


def test_accepted_detection():
    text = format_detection_summary(_result(True), "000003")
    lines = text.splitlines()
    assert lines[0] == "✅ 000003: pose accepted (score 0.900, 40 votes)"
    assert "  hypotheses: 180 raw, 25 clustered, 2 verified" in lines
    assert "  rejected: 1 by consistency, 0 by edges" in lines
    assert "  translation: (10.0, -5.0, 600.0) mm" in lines
    assert lines[-2].endswith("(total 140 ms)")


def test_error_against_ground_truth():
    rotvec = np.array([0.0, 0.0, np.radians(10)])
    gt = RigidTransform.from_rotvec(rotvec, np.array([10.0, -5.0, 605.0]))
    text = format_detection_summary(_result(True), "000003", gt)
    assert text.splitlines()[-1] == "  error vs ground truth: 10.00 deg, 5.00 mm"


def test_nothing_accepted():
    text = format_detection_summary(_result(False), "000004")
    assert text.startswith("⬜ 000004: no hypothesis survived verification")
    assert "  rejected: 1 by consistency, 1 by edges" in text
    assert "translation" not in text


def test_bench_means():
    text = format_bench_summary([_result(True), _result(False)])
    assert text.splitlines() == [
        "📊 Bench: 1/2 scenes with an accepted pose",
        "  mean timings: scene 12 ms, matching 80 ms, clustering 3 ms, verification 45 ms "
        "(total 140 ms)",
    ]
    assert format_bench_summary([]) == "📊 Bench: no scenes"
