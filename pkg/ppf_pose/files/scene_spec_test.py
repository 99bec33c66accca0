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

import numpy as np
import pytest

from ppf_pose.evaluation import SceneSpecError, l_block_mesh
from ppf_pose.files import build_scene_specs, parse_scene_spec
from ppf_pose.geometry import sample_surface
from ppf_pose.verification import CameraIntrinsics, RenderModel

BLOCK = l_block_mesh()
MODEL = RenderModel(sample_surface(BLOCK, 4.0, np.random.default_rng(0)), 4.0, BLOCK)
CAMERA = {"fx": 300.0, "fy": 300.0, "cx": 80.0, "cy": 60.0, "width": 160, "height": 120}
IDENTITY = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]


def _spec(**fields) -> str:
    return json.dumps({"camera": CAMERA, **fields})


def test_explicit_pose_gives_one_scene():
    payload = parse_scene_spec(
        _spec(
            model_id="block",
            R=IDENTITY,
            t=[0.0, 0.0, 600.0],
            noise_sigma=1.5,
            distractors=[{"kind": "box", "size": 30, "R": IDENTITY, "t": [0, 0, 400]}],
        )
    )
    (spec,) = build_scene_specs(payload, MODEL, seed=11)
    assert spec.model_id == "block"
    assert spec.cam == CameraIntrinsics(**CAMERA)
    assert np.allclose(spec.pose.translation, [0.0, 0.0, 600.0])
    assert spec.noise_sigma == 1.5
    assert spec.seed == 11
    assert [d.kind for d in spec.distractors] == ["box"]


def test_random_placements_are_seeded():
    payload = parse_scene_spec(
        _spec(random={"count": 3, "distance": [550, 650], "wall": True}, noise_sigma=2.0)
    )
    first = build_scene_specs(payload, MODEL, seed=4, model_id="l_block")
    again = build_scene_specs(payload, MODEL, seed=4, model_id="l_block")
    assert len(first) == 3
    assert all(a.pose.allclose(b.pose) and a.seed == b.seed for a, b in zip(first, again))
    assert all(550.0 <= s.pose.translation[2] <= 650.0 for s in first)
    assert all(len(s.distractors) == 1 and s.model_id == "l_block" for s in first)
    other = build_scene_specs(payload, MODEL, seed=5)
    assert not first[0].pose.allclose(other[0].pose)


@pytest.mark.parametrize(
    "text, match",
    [
        ("{", "malformed scene spec"),
        (json.dumps({"R": IDENTITY, "t": [0, 0, 600]}), "needs a camera"),
        (_spec(R=IDENTITY), "both R and t"),
        (_spec(), "exactly one"),
        (_spec(R=IDENTITY, t=[0, 0, 1], random={}), "exactly one"),
        (_spec(random={"count": "two"}), "unexpected scene spec format"),
        (_spec(random={}, color="red"), "unexpected scene spec format"),
    ],
)
def test_bad_specs(text, match):
    with pytest.raises(SceneSpecError, match=match):
        parse_scene_spec(text)


@pytest.mark.parametrize(
    "fields, match",
    [
        ({"random": {"distance": [800, 500]}}, "random distance"),
        ({"R": [2.0, 0, 0, 0, 1, 0, 0, 0, 1], "t": [0, 0, 600]}, "invalid scene spec"),
        ({"random": {}, "camera": {**CAMERA, "fx": -1.0}}, "invalid scene spec"),
        ({"random": {}, "dropout": 1.0}, "dropout"),
    ],
)
def test_specs_that_cannot_be_built(fields, match):
    payload = parse_scene_spec(_spec(**fields))
    with pytest.raises(SceneSpecError, match=match):
        build_scene_specs(payload, MODEL, seed=0)
