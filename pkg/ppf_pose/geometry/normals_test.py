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

from ppf_pose.geometry import estimate_normals


def _angle_deg(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.degrees(np.arccos(np.clip((a * b).sum(-1), -1.0, 1.0)))


def test_plane_normals_face_the_viewpoint():
    xs, ys = np.meshgrid(np.linspace(-10, 10, 21), np.linspace(-10, 10, 21))
    pts = np.c_[xs.ravel(), ys.ravel(), np.zeros(xs.size)]
    cloud = estimate_normals(pts, k=20, viewpoint=np.array([0.0, 0.0, 1.0]))
    assert len(cloud) == len(pts)
    assert _angle_deg(cloud.normals, np.array([0.0, 0.0, 1.0])).max() < 1.0


def test_plane_normals_flip_for_viewpoint_below():
    xs, ys = np.meshgrid(np.arange(10.0), np.arange(10.0))
    pts = np.c_[xs.ravel(), ys.ravel(), np.zeros(xs.size)]
    cloud = estimate_normals(pts, k=8, viewpoint=np.array([0.0, 0.0, -5.0]))
    assert np.allclose(cloud.normals, [0.0, 0.0, -1.0], atol=1e-9)


def test_sphere_normal_at_pole():
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(3000, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    pts = np.vstack([[0.0, 0.0, 1.0], pts])
    cloud = estimate_normals(pts, k=20, viewpoint=np.array([0.0, 0.0, 5.0]))
    pole = np.argmin(np.linalg.norm(cloud.points - [0.0, 0.0, 1.0], axis=1))
    assert _angle_deg(cloud.normals[pole], np.array([0.0, 0.0, 1.0])) < 5.0


def test_normals_are_unit_length():
    pts = np.random.default_rng(1).normal(size=(500, 3)) * 30
    cloud = estimate_normals(pts, k=10, viewpoint=np.zeros(3))
    assert np.abs(np.linalg.norm(cloud.normals, axis=1) - 1).max() <= 1e-6


def test_degenerate_neighbourhoods_are_dropped():
    plane = np.c_[np.random.default_rng(2).uniform(0, 10, size=(50, 2)), np.zeros(50)]
    duplicates = np.tile([100.0, 100.0, 100.0], (5, 1))
    cloud = estimate_normals(np.vstack([plane, duplicates]), k=5, viewpoint=np.zeros(3))
    assert len(cloud) == 50


@pytest.mark.parametrize("n, k", [(2, 3), (10, 2)])
def test_preconditions(n: int, k: int):
    with pytest.raises(ValueError):
        estimate_normals(np.random.default_rng(3).normal(size=(n, 3)), k=k)
