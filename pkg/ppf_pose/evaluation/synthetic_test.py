# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from dataclasses import replace

import numpy as np
import pytest

from ppf_pose.evaluation import (
    Distractor,
    SceneSpec,
    SceneSpecError,
    background_wall,
    box_mesh,
    generate_scene,
    l_block_mesh,
    random_scene_spec,
    render_layers,
)
from ppf_pose.geometry import RigidTransform, sample_surface
from ppf_pose.verification import CameraIntrinsics, RenderModel, render_depth

CAM = CameraIntrinsics(300.0, 300.0, 80.0, 60.0, 160, 120)
BLOCK = l_block_mesh()
MODEL = RenderModel(sample_surface(BLOCK, 4.0, np.random.default_rng(0)), 4.0, BLOCK)
GT = RigidTransform.from_rotvec(np.array([0.4, -0.3, 0.2]), np.array([10.0, -5.0, 600.0]))
SPEC = SceneSpec("l_block", GT, CAM)


def _at(x: float, y: float, z: float) -> RigidTransform:
    return RigidTransform(np.eye(3), np.array([x, y, z]))


# ------------------------------------------------------------------------------------------------------
# generate_scene
# ------------------------------------------------------------------------------------------------------


def test_noiseless_scene_is_the_rendering():
    depth, pose = generate_scene(SPEC, MODEL)
    assert pose is GT
    assert np.array_equal(depth.depth, render_depth(MODEL, GT, CAM).depth.depth)


def test_noise_touches_measured_pixels_only():
    clean = generate_scene(SPEC, MODEL)[0].depth
    noisy = generate_scene(replace(SPEC, noise_sigma=2.0, seed=5), MODEL)[0].depth
    measured = clean > 0
    assert np.all(noisy[~measured] == 0)
    diff = (noisy - clean)[measured]
    assert abs(diff.mean()) < 0.3
    assert diff.std() == pytest.approx(2.0, rel=0.2)


def test_same_seed_same_scene():
    spec = replace(SPEC, noise_sigma=2.0, dropout=0.1, seed=3)
    first = generate_scene(spec, MODEL)[0].depth
    assert np.array_equal(first, generate_scene(spec, MODEL)[0].depth)
    other = generate_scene(replace(spec, seed=4), MODEL)[0].depth
    assert not np.array_equal(first, other)


def test_dropout_removes_about_that_share():
    clean = generate_scene(SPEC, MODEL)[0].depth > 0
    dropped = generate_scene(replace(SPEC, dropout=0.25, seed=1), MODEL)[0].depth > 0
    assert not np.any(dropped & ~clean)
    assert 1.0 - dropped.sum() / clean.sum() == pytest.approx(0.25, abs=0.06)


def test_occluder_wins_the_z_buffer():
    occluder = Distractor("box", 40.0, _at(10.0, -5.0, 450.0))
    layers = render_layers(replace(SPEC, distractors=(occluder,)), MODEL)
    (box,) = layers.clutter
    depth = layers.composite()
    both = layers.target.mask & box.mask
    assert both.any()
    assert np.array_equal(depth[both], box.depth.depth[both])
    assert layers.visible.sum() == layers.target.mask.sum() - both.sum()


def test_wall_fills_the_image_behind_the_object():
    wall = background_wall(SPEC, MODEL)
    assert wall.pose.translation[2] == pytest.approx(600.0 + MODEL.diameter)
    rendering = render_depth(wall.render_model(), wall.pose, CAM)
    assert rendering.mask.all()
    depth = generate_scene(replace(SPEC, distractors=(wall,)), MODEL)[0].depth
    target = render_depth(MODEL, GT, CAM).mask
    assert np.all(depth > 0)
    assert np.all(depth[target] < wall.pose.translation[2])


def test_object_outside_the_frustum_is_an_error():
    with pytest.raises(SceneSpecError, match="outside the camera frustum"):
        generate_scene(replace(SPEC, pose=_at(0.0, 0.0, -600.0)), MODEL)


@pytest.mark.parametrize(
    "build, match",
    [
        (lambda: replace(SPEC, noise_sigma=-1.0), "noise_sigma"),
        (lambda: replace(SPEC, dropout=1.0), "dropout"),
        (lambda: Distractor("cone", 1.0, _at(0, 0, 0)), "unknown distractor kind"),
    ],
)
def test_invalid_specs(build, match):
    with pytest.raises(SceneSpecError, match=match):
        build()


# ------------------------------------------------------------------------------------------------------
# random_scene_spec
# ------------------------------------------------------------------------------------------------------


def test_random_scenes_are_seeded():
    first = random_scene_spec(np.random.default_rng(7), MODEL, CAM, wall=True, occluder=True)
    again = random_scene_spec(np.random.default_rng(7), MODEL, CAM, wall=True, occluder=True)
    assert first.pose.allclose(again.pose)
    assert first.seed == again.seed
    assert len(first.distractors) == len(again.distractors) == 2
    assert all(d.pose.allclose(e.pose) for d, e in zip(first.distractors, again.distractors))


@pytest.mark.parametrize("seed", range(5))
def test_random_scene_placement(seed):
    spec = random_scene_spec(
        np.random.default_rng(seed), MODEL, CAM, distance=(500.0, 700.0), occluder=True
    )
    center = spec.pose.translation
    assert 500.0 <= center[2] <= 700.0
    u, v = CAM.project(center)
    assert 0.25 * CAM.width <= u[0] <= 0.75 * CAM.width
    assert 0.25 * CAM.height <= v[0] <= 0.75 * CAM.height
    layers = render_layers(spec, MODEL)
    assert layers.visible.sum() >= 0.7 * layers.target.mask.sum()


def test_box_distractor_takes_three_sides():
    cube = Distractor("box", (10.0, 20.0, 30.0), _at(0.0, 0.0, 300.0)).render_model()
    assert cube.mesh is not None
    assert cube.mesh.cloud.diameter == pytest.approx(box_mesh((10.0, 20.0, 30.0)).cloud.diameter)
