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
import pytest

from ppf_pose.geometry.transform import (
    RigidTransform,
    orthonormalize,
    random_rigid_transform,
)


def _is_valid(t: RigidTransform) -> bool:
    r = t.rotation
    return bool(
        np.abs(r @ r.T - np.eye(3)).max() < 1e-6 and abs(np.linalg.det(r) - 1) < 1e-6
    )


def test_identity_maps_points_to_themselves():
    pts = np.random.default_rng(0).normal(size=(10, 3))
    assert np.array_equal(RigidTransform.identity().transform_points(pts), pts)


def test_rejects_reflection():
    with pytest.raises(ValueError, match="orthonormal"):
        RigidTransform(np.diag([1.0, 1.0, -1.0]), np.zeros(3))


def test_rejects_non_finite():
    with pytest.raises(ValueError, match="finite"):
        RigidTransform(np.eye(3), np.array([0.0, np.nan, 0.0]))


def test_composition_matches_sequential_application():
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(20, 3)) * 50
    for _ in range(100):
        t1 = random_rigid_transform(rng)
        t2 = random_rigid_transform(rng)
        assert np.allclose(
            (t1 @ t2).transform_points(pts),
            t1.transform_points(t2.transform_points(pts)),
            atol=1e-6,
        )
        assert _is_valid(t1 @ t2)


def test_inverse_composes_to_identity():
    rng = np.random.default_rng(2)
    for _ in range(100):
        t = random_rigid_transform(rng, max_translation=500.0)
        assert (t.inverse() @ t).allclose(RigidTransform.identity(), 1e-9, 1e-6)


def test_rot_x_quarter_turn():
    t = RigidTransform.rot_x(np.pi / 2)
    assert np.allclose(t.transform_points(np.array([[0.0, 1.0, 0.0]])), [[0, 0, 1]])


def test_matrix_round_trip():
    t = random_rigid_transform(np.random.default_rng(3))
    assert RigidTransform.from_matrix(t.as_matrix()).allclose(t, 0.0, 0.0)


def test_rotation_angle_and_translation_distance():
    a = RigidTransform.identity()
    b = RigidTransform.from_rotvec(np.array([0.0, 0.0, 0.3]), np.array([3.0, 4.0, 0.0]))
    assert a.rotation_angle(b) == pytest.approx(0.3)
    assert a.translation_distance(b) == pytest.approx(5.0)


def test_bounded_random_rotation():
    rng = np.random.default_rng(4)
    for _ in range(50):
        t = random_rigid_transform(rng, max_angle=np.radians(5))
        assert t.rotation_angle(RigidTransform.identity()) <= np.radians(5) + 1e-9


def test_orthonormalize_repairs_drift():
    r = random_rigid_transform(np.random.default_rng(5)).rotation + 1e-4
    fixed = orthonormalize(r)
    assert _is_valid(RigidTransform(fixed, np.zeros(3)))
    assert np.abs(fixed - r).max() < 1e-3
