# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

import math

import numpy as np
import pytest

from ppf_pose.geometry import RigidTransform, random_rigid_transform
from ppf_pose.model import (
    alpha_angle,
    alpha_angles,
    intermediate_frame,
    intermediate_frames,
    pose_from_correspondence,
)

X = np.array([1.0, 0.0, 0.0])


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


# ------------------------------------------------------------------------------------------------------
# intermediate_frame
# ------------------------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p, n",
    [
        ((0, 0, 0), (1, 0, 0)),
        ((5, 5, 5), (0, 0, 1)),
        ((1, -2, 3), (-1, 0, 0)),
        ((0, 0, 0), (-1, 1e-12, 0)),
        ((10, 0, -4), (0.6, 0.0, 0.8)),
    ],
)
def test_frame_maps_point_to_origin_and_normal_to_x(p, n):
    p, n = np.asarray(p, dtype=float), _unit(n)
    t = intermediate_frame(p, n)
    assert np.allclose(t.transform_points(p[None])[0], 0.0, atol=1e-9)
    assert np.allclose(t.transform_normals(n[None])[0], X, atol=1e-9)


def test_frame_of_canonical_input_is_identity():
    t = intermediate_frame(np.zeros(3), X)
    assert t.allclose(RigidTransform.identity())


def test_frame_of_opposite_normal_is_half_turn_about_z():
    t = intermediate_frame(np.zeros(3), -X)
    assert np.array_equal(t.rotation, np.diag([-1.0, -1.0, 1.0]))


def test_random_frames_are_rigid():
    rng = np.random.default_rng(0)
    points = rng.uniform(-100, 100, (500, 3))
    normals = rng.normal(size=(500, 3))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    rotations, translations = intermediate_frames(points, normals)
    for r, t, p, n in zip(rotations, translations, points, normals):
        frame = RigidTransform(r, t)  # validates orthonormality
        assert np.allclose(frame.transform_points(p[None]), 0.0, atol=1e-9)
        assert np.allclose(r @ n, X, atol=1e-9)


# ------------------------------------------------------------------------------------------------------
# alpha_angle
# ------------------------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p_other, expected",
    [
        ((3.0, 1.0, 0.0), 0.0),
        ((3.0, 0.0, 1.0), math.pi / 2),
        ((-2.0, 0.0, -1.0), -math.pi / 2),
        ((3.0, -1.0, 0.0), math.pi),
        ((3.0, -1.0, -0.0), math.pi),
        ((3.0, 0.0, 0.0), 0.0),
        ((3.0, -0.0, -0.0), 0.0),
    ],
)
def test_alpha_angle(p_other, expected: float):
    frame = RigidTransform.identity()
    assert alpha_angle(frame, np.array(p_other)) == pytest.approx(expected)


def test_alpha_rotates_into_the_positive_half_plane():
    rng = np.random.default_rng(1)
    points = rng.uniform(-50, 50, (1000, 3))
    normals = rng.normal(size=(1000, 3))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    others = rng.uniform(-50, 50, (1000, 3))
    rotations, translations = intermediate_frames(points, normals)
    alphas = alpha_angles(rotations, translations, others)
    assert np.all((alphas > -math.pi) & (alphas <= math.pi))
    for r, t, alpha, q in zip(rotations, translations, alphas, others):
        mapped = RigidTransform.rot_x(-alpha).transform_points((r @ q + t)[None])[0]
        assert abs(mapped[2]) < 1e-9
        assert mapped[1] >= -1e-9


# ------------------------------------------------------------------------------------------------------
# Pose reconstruction
# ------------------------------------------------------------------------------------------------------


def test_pose_from_correspondence_recovers_ground_truth():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        g = random_rigid_transform(rng, max_translation=500.0)
        m_r, m_i = rng.uniform(-50, 50, (2, 3))
        n_r = _unit(rng.normal(size=3))
        s_r, s_i = g.transform_points(np.stack([m_r, m_i]))
        n_s = _unit(g.transform_normals(n_r[None])[0])

        t_m = intermediate_frame(m_r, n_r)
        t_s = intermediate_frame(s_r, n_s)
        pose = pose_from_correspondence(
            t_s, t_m, alpha_angle(t_m, m_i), alpha_angle(t_s, s_i)
        )
        assert np.linalg.norm(pose.rotation - g.rotation) < 1e-4
        assert pose.translation_distance(g) < 1e-3


def test_swapped_angles_do_not_recover_the_pose():
    rng = np.random.default_rng(3)
    g = RigidTransform.from_rotvec(np.array([0.3, -0.2, 0.5]), np.array([10.0, 0.0, 5.0]))
    m_r, m_i = np.zeros(3), np.array([10.0, 20.0, -5.0])
    n_r = _unit(rng.normal(size=3))
    t_m = intermediate_frame(m_r, n_r)
    s_r, s_i = g.transform_points(np.stack([m_r, m_i]))
    t_s = intermediate_frame(s_r, g.transform_normals(n_r[None])[0])
    a_m, a_s = alpha_angle(t_m, m_i), alpha_angle(t_s, s_i)
    assert pose_from_correspondence(t_s, t_m, a_m, a_s).rotation_angle(g) < 1e-6
    if abs(math.remainder(2 * (a_s - a_m), 2 * math.pi)) > 1e-3:
        assert pose_from_correspondence(t_s, t_m, a_s, a_m).rotation_angle(g) > 1e-3
