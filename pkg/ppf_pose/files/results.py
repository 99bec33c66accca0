# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Line-delimited JSON results: a metadata line, then one record per target."""

import json
from collections.abc import Iterable
from os import PathLike
from pathlib import Path
from typing import Any, TypedDict

from typeguard import TypeCheckError, check_type

from ppf_pose.custom_encoder import to_json


class ResultsError(ValueError):
    pass


class DetectionRecord(TypedDict):
    scene_id: str
    obj_id: str
    dataset: str
    detected: bool
    R: list[float] | None
    t: list[float] | None
    score: float | None
    votes: int | None
    consistent: bool | None
    edges_ok: bool | None
    timings: dict[str, float]  # ms per stage
    vsd: float | None
    correct: bool | None


def empty_record(scene_id: str, obj_id: str, dataset: str = "") -> DetectionRecord:
    return DetectionRecord(
        scene_id=scene_id,
        obj_id=obj_id,
        dataset=dataset,
        detected=False,
        R=None,
        t=None,
        score=None,
        votes=None,
        consistent=None,
        edges_ok=None,
        timings={},
        vsd=None,
        correct=None,
    )


def format_results(metadata: dict[str, Any], records: Iterable[DetectionRecord]) -> str:
    lines = [to_json({"metadata": metadata})]
    lines += [to_json(r) for r in records]
    return "\n".join(lines) + "\n"


def write_results(
    path: str | PathLike, metadata: dict[str, Any], records: Iterable[DetectionRecord]
) -> None:
    Path(path).write_text(format_results(metadata, records))


def parse_results(text: str) -> tuple[dict[str, Any], list[DetectionRecord]]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ResultsError("results file is empty")
    try:
        first = json.loads(lines[0])
        if not isinstance(first, dict) or "metadata" not in first:
            raise ResultsError("results must start with a metadata line")
        records = [json.loads(line) for line in lines[1:]]
        check_type(first["metadata"], dict[str, Any])
        check_type(records, list[DetectionRecord])
    except json.JSONDecodeError as e:
        raise ResultsError(f"malformed results line. Error: {e}") from None
    except TypeCheckError as e:
        raise ResultsError(f"unexpected results record format. Error: {e}") from None
    return first["metadata"], records


def read_results(path: str | PathLike) -> tuple[dict[str, Any], list[DetectionRecord]]:
    return parse_results(Path(path).read_text())
