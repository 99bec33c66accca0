# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Recall over annotated targets, per dataset and per object."""

import csv
import io
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import TypedDict

from .vsd import VSDParams, is_correct


class RecallError(ValueError):
    pass


@dataclass(frozen=True)
class TargetResult:
    """One annotated object instance; `error` is None when no pose was emitted for it."""

    dataset: str
    object_id: str
    scene_id: str
    error: float | None

    def __post_init__(self) -> None:
        if self.error is not None and not 0.0 <= self.error <= 1.0:
            raise RecallError(f"VSD error must be in [0, 1], got {self.error}")

    def correct(self, p: VSDParams = VSDParams()) -> bool:
        return self.error is not None and is_correct(self.error, p)


def recall(results: Sequence[TargetResult], p: VSDParams = VSDParams()) -> float:
    """#correct / #targets; targets without a pose count as misses."""
    if not results:
        raise RecallError("recall of an empty result list is undefined")
    return sum(r.correct(p) for r in results) / len(results)


class RecallRow(TypedDict):
    name: str
    correct: int
    targets: int
    recall: float


class RecallSummary(TypedDict):
    per_dataset: list[RecallRow]
    per_object: list[RecallRow]
    average: float


def _rows(
    results: Sequence[TargetResult], key: Callable[[TargetResult], str], p: VSDParams
) -> list[RecallRow]:
    groups: dict[str, list[TargetResult]] = {}
    for r in results:
        groups.setdefault(key(r), []).append(r)
    rows = []
    for name in sorted(groups):
        group = groups[name]
        correct = sum(r.correct(p) for r in group)
        rows.append(
            RecallRow(name=name, correct=correct, targets=len(group), recall=correct / len(group))
        )
    return rows


def summarize_recall(
    results: Sequence[TargetResult], p: VSDParams = VSDParams()
) -> RecallSummary:
    """Per-dataset and per-object recall; the average is taken over datasets."""
    if not results:
        raise RecallError("cannot summarize an empty result list")
    per_dataset = _rows(results, lambda r: r.dataset, p)
    per_object = _rows(results, lambda r: f"{r.dataset}/{r.object_id}", p)
    average = sum(row["recall"] for row in per_dataset) / len(per_dataset)
    return RecallSummary(per_dataset=per_dataset, per_object=per_object, average=average)


def _format_rows(title: str, rows: list[RecallRow], width: int) -> list[str]:
    lines = [f"{title:<{width}}  recall  correct/targets"]
    for row in rows:
        lines.append(
            f"{row['name']:<{width}}  {row['recall']:6.2f}  {row['correct']}/{row['targets']}"
        )
    return lines


def format_recall_table(summary: RecallSummary, per_object: bool = False) -> str:
    rows = summary["per_dataset"] + (summary["per_object"] if per_object else [])
    width = max(len("average"), *(len(row["name"]) for row in rows))
    lines = _format_rows("dataset", summary["per_dataset"], width)
    lines.append(f"{'average':<{width}}  {summary['average']:6.2f}")
    if per_object:
        lines.append("")
        lines.extend(_format_rows("object", summary["per_object"], width))
    return "\n".join(lines)


def recall_table_csv(summary: RecallSummary) -> str:
    """Rows of (level, name, correct, targets, recall), closing with the average."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["level", "name", "correct", "targets", "recall"])
    for level, rows in (("dataset", summary["per_dataset"]), ("object", summary["per_object"])):
        for row in rows:
            writer.writerow(
                [level, row["name"], row["correct"], row["targets"], f"{row['recall']:.4f}"]
            )
    writer.writerow(["average", "", "", "", f"{summary['average']:.4f}"])
    return out.getvalue()
