# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Plain-JSON forms of the numeric and pose types that show up in results and metadata."""

import dataclasses
from typing import Any

import numpy

from ppf_pose.geometry import RigidTransform
from ppf_pose.matching import PoseHypothesis


def dump_numpy_integer(obj: numpy.integer) -> int:
    return int(obj)


def dump_numpy_floating(obj: numpy.floating) -> float:
    return float(obj)


def dump_numpy_bool(obj: numpy.bool_) -> bool:
    return bool(obj)


def dump_numpy_ndarray(obj: numpy.ndarray) -> list:
    return obj.tolist()


def dump_rigid_transform(obj: RigidTransform) -> dict[str, list[float]]:
    """Row-major rotation (9 floats) and translation in mm (3 floats)."""
    return {"R": obj.rotation.ravel().tolist(), "t": obj.translation.tolist()}


def load_rigid_transform(payload: dict[str, Any]) -> RigidTransform:
    return RigidTransform(
        numpy.asarray(payload["R"], dtype=numpy.float64).reshape(3, 3),
        numpy.asarray(payload["t"], dtype=numpy.float64),
    )


def dump_pose_hypothesis(obj: PoseHypothesis) -> dict[str, Any]:
    return {
        "pose": dump_rigid_transform(obj.pose),
        "votes": obj.votes,
        "score": obj.score,
        "scene_ref": obj.scene_ref,
        "status": obj.status.value,
        "low_support": obj.low_support,
        "consistent": obj.consistent,
        "edges_ok": obj.edges_ok,
    }


def dump_dataclass(obj: Any) -> dict[str, Any]:
    return {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}


def dump_dict_keys(obj: Any) -> list:
    return list(obj)
