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

from ppf_pose.verification import (
    CameraIntrinsics,
    DepthImage,
    backproject,
    point_map,
    scene_normal_map,
)

CAM = CameraIntrinsics(300.0, 300.0, 80.0, 60.0, 160, 120)


def _tilted_plane_depth(cam: CameraIntrinsics, z0: float, slope: float) -> np.ndarray:
    """Depth of the plane z = z0 + slope * x at every pixel centre."""
    v, u = np.mgrid[0 : cam.height, 0 : cam.width].astype(float)
    return z0 / (1.0 - slope * (u - cam.cx) / cam.fx)


# ------------------------------------------------------------------------------------------------------
# Types
# ------------------------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "args",
    [
        (0.0, 300.0, 80.0, 60.0, 160, 120),
        (300.0, -1.0, 80.0, 60.0, 160, 120),
        (300.0, 300.0, 160.0, 60.0, 160, 120),
        (300.0, 300.0, 80.0, -0.5, 160, 120),
        (300.0, 300.0, 0.0, 0.0, 0, 120),
    ],
)
def test_invalid_intrinsics(args):
    with pytest.raises(ValueError):
        CameraIntrinsics(*args)


@pytest.mark.parametrize(
    "depth, match",
    [
        (np.zeros(5), "2-D"),
        (np.array([[1.0, -2.0]]), "non-negative"),
        (np.array([[np.nan, 1.0]]), "finite"),
    ],
)
def test_invalid_depth(depth, match):
    with pytest.raises(ValueError, match=match):
        DepthImage(depth)


def test_depth_is_read_only_copy():
    raw = np.ones((2, 3))
    image = DepthImage(raw)
    raw[0, 0] = 5.0
    assert image.depth[0, 0] == 1.0
    assert not image.depth.flags.writeable
    assert (image.width, image.height) == (3, 2)


def test_on_axis_projection():
    cam = CameraIntrinsics(500.0, 500.0, 320.0, 320.0, 640, 480)
    u, v = cam.project(np.array([[0.0, 0.0, 1000.0], [100.0, -50.0, 1000.0]]))
    assert np.allclose(u, [320.0, 370.0])
    assert np.allclose(v, [320.0, 295.0])


# ------------------------------------------------------------------------------------------------------
# Back-projection
# ------------------------------------------------------------------------------------------------------


def test_backprojected_points_project_to_their_pixels():
    rng = np.random.default_rng(0)
    depth = rng.uniform(300, 900, CAM.shape)
    depth[rng.random(CAM.shape) < 0.2] = 0.0
    points, flat = backproject(DepthImage(depth), CAM)
    assert len(points) == int((depth > 0).sum())
    u, v = CAM.project(points)
    assert np.allclose(u, flat % CAM.width, atol=1e-9)
    assert np.allclose(v, flat // CAM.width, atol=1e-9)
    assert np.array_equal(points[:, 2], depth.ravel()[flat])


def test_point_map_is_zero_where_depth_is_missing():
    depth = np.full(CAM.shape, 500.0)
    depth[10, 20] = 0.0
    pts = point_map(DepthImage(depth), CAM)
    assert pts.shape == (*CAM.shape, 3)
    assert np.array_equal(pts[10, 20], [0.0, 0.0, 0.0])
    assert pts[60, 80] == pytest.approx([0.0, 0.0, 500.0])


def test_backproject_rejects_size_mismatch():
    with pytest.raises(ValueError, match="disagree"):
        backproject(DepthImage(np.ones((10, 10))), CAM)


# ------------------------------------------------------------------------------------------------------
# scene_normal_map
# ------------------------------------------------------------------------------------------------------


def test_fronto_parallel_plane_faces_the_camera():
    normals = scene_normal_map(DepthImage(np.full(CAM.shape, 600.0)), CAM)
    inner = normals[1:-1, 1:-1]
    assert np.allclose(inner, [0.0, 0.0, -1.0])
    # No complete neighbourhood on the image border.
    assert not normals[0].any() and not normals[:, -1].any()


def test_tilted_plane_normals_are_exact():
    depth = _tilted_plane_depth(CAM, 600.0, 0.5)
    normals = scene_normal_map(DepthImage(depth), CAM)
    expected = np.array([0.5, 0.0, -1.0]) / np.linalg.norm([0.5, 0.0, -1.0])
    assert np.abs(normals[1:-1, 1:-1] - expected).max() < 1e-6


def test_missing_depth_and_jumps_clear_normals():
    depth = np.full(CAM.shape, 600.0)
    depth[30, 30] = 0.0
    depth[:, 100:] = 900.0
    normals = scene_normal_map(DepthImage(depth), CAM)
    for v, u in [(30, 30), (30, 29), (30, 31), (29, 30), (31, 30)]:
        assert not normals[v, u].any()
    assert not normals[50, 99].any() and not normals[50, 100].any()
    assert np.allclose(normals[50, 98], [0.0, 0.0, -1.0])
    assert np.allclose(normals[50, 101], [0.0, 0.0, -1.0])
