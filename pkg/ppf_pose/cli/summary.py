# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Human-readable summaries printed to standard error."""

from collections.abc import Sequence

from ppf_pose.evaluation import pose_errors
from ppf_pose.geometry import RigidTransform
from ppf_pose.matching import Status
from ppf_pose.model import ModelTable

from .detect import STAGES, DetectionResult


def _format_timings(timings: dict[str, float]) -> str:
    parts = [f"{name} {timings[name]:.0f} ms" for name in STAGES if name in timings]
    return ", ".join(parts) + f" (total {sum(timings.values()):.0f} ms)"


def format_train_summary(table: ModelTable, name: str, path: str) -> str:
    return "\n".join(
        [
            f'🧩 Trained "{name}" -> {path}',
            f"  model points: {len(table.model)} (leaf {table.leaf:.3f} mm, "
            f"diameter {table.model.diameter:.1f} mm)",
            f"  table: {table.entry_count} pairs under {len(table.keys)} keys "
            f"(d_max {table.d_max:.1f} mm)",
        ]
    )


def format_detection_summary(
    result: DetectionResult, scene_id: str, gt: RigidTransform | None = None
) -> str:
    """What survived each stage, the accepted pose and, given ground truth, its error."""
    h = result.hypothesis
    headline = (
        f"✅ {scene_id}: pose accepted (score {h.score:.3f}, {h.votes} votes)"
        if h is not None
        else f"⬜ {scene_id}: no hypothesis survived verification"
    )
    lines = [
        headline,
        f"  scene points: {result.scene_points}",
        f"  hypotheses: {result.raw_hypotheses} raw, {result.clusters} clustered, "
        f"{len(result.candidates)} verified",
        f"  rejected: {result.rejected(Status.REJECTED_CONSISTENCY)} by consistency, "
        f"{result.rejected(Status.REJECTED_EDGE)} by edges",
        f"  timings: {_format_timings(result.timings)}",
    ]
    if h is not None:
        t = ", ".join(f"{v:.1f}" for v in h.pose.translation)
        lines.append(f"  translation: ({t}) mm")
        if gt is not None:
            deg, mm = pose_errors(h.pose, gt)
            lines.append(f"  error vs ground truth: {deg:.2f} deg, {mm:.2f} mm")
    return "\n".join(lines)


def format_bench_summary(results: Sequence[DetectionResult]) -> str:
    if not results:
        return "📊 Bench: no scenes"
    detected = sum(r.detected for r in results)
    mean = {
        name: sum(r.timings.get(name, 0.0) for r in results) / len(results) for name in STAGES
    }
    return "\n".join(
        [
            f"📊 Bench: {detected}/{len(results)} scenes with an accepted pose",
            f"  mean timings: {_format_timings(mean)}",
        ]
    )
