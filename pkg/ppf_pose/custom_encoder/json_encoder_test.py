# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

import json
from dataclasses import dataclass

import numpy as np
import pytest

from ppf_pose.custom_encoder import load_rigid_transform, to_json
from ppf_pose.geometry import RigidTransform, random_rigid_transform
from ppf_pose.matching import PoseHypothesis, Status
from ppf_pose.matching.params import MatchParams

# ------------------------------------------------------------------------------------------------------
# Std lib
# ------------------------------------------------------------------------------------------------------


def test_stdlib_primitives():
    assert json.loads(to_json([1, "two", 3.0])) == [1, "two", 3.0]
    assert json.loads(to_json({"key": "value", "num": 42})) == {"key": "value", "num": 42}
    assert json.loads(to_json(None)) is None
    assert json.loads(to_json({"a": 1}.keys())) == ["a"]


def test_unknown_objects_still_fail():
    with pytest.raises(TypeError):
        to_json(object())


# ------------------------------------------------------------------------------------------------------
# NumPy
# ------------------------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "value, expected",
    [
        (np.int64(7), 7),
        (np.uint32(4000000000), 4000000000),
        (np.float32(0.5), 0.5),
        (np.bool_(True), True),
        (np.array([[1, 2], [3, 4]]), [[1, 2], [3, 4]]),
    ],
)
def test_numpy_values_become_plain_json(value, expected):
    assert json.loads(to_json(value)) == expected


# ------------------------------------------------------------------------------------------------------
# Poses
# ------------------------------------------------------------------------------------------------------


def test_rigid_transform_round_trip():
    pose = random_rigid_transform(np.random.default_rng(0))
    payload = json.loads(to_json(pose))
    assert len(payload["R"]) == 9 and len(payload["t"]) == 3
    assert load_rigid_transform(payload).allclose(pose, rot_tol=0.0, trans_tol=0.0)


def test_pose_hypothesis():
    h = PoseHypothesis(RigidTransform.identity(), 12, 0.5, 3, Status.ACCEPTED, consistent=True)
    payload = json.loads(to_json(h))
    assert payload["status"] == "accepted"
    assert (payload["votes"], payload["score"], payload["scene_ref"]) == (12, 0.5, 3)
    assert payload["consistent"] is True and payload["edges_ok"] is None
    assert payload["pose"]["t"] == [0.0, 0.0, 0.0]


def test_parameter_dataclasses_are_written_field_by_field():
    payload = json.loads(to_json(MatchParams().resolve(100.0)))
    assert payload["scene_ref_stride"] == 5
    assert payload["cluster_trans_thresh"] == pytest.approx(10.0)


def test_nested_dataclass_fields_are_encoded():
    @dataclass
    class Record:
        pose: RigidTransform
        values: tuple[np.float64, ...]

    payload = json.loads(to_json(Record(RigidTransform.identity(), (np.float64(1.5),))))
    assert payload == {"pose": {"R": [1, 0, 0, 0, 1, 0, 0, 0, 1], "t": [0, 0, 0]}, "values": [1.5]}
