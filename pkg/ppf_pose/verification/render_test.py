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

from ppf_pose.evaluation import box_mesh, plane_mesh
from ppf_pose.geometry import OrientedPointCloud, RigidTransform
from ppf_pose.verification import (
    CameraIntrinsics,
    RenderModel,
    backproject,
    rasterize_mesh,
    render_depth,
    splat_points,
)

WIDE = CameraIntrinsics(500.0, 500.0, 320.0, 320.0, 640, 480)
SMALL = CameraIntrinsics(300.0, 300.0, 80.0, 60.0, 160, 120)


def _at(x: float, y: float, z: float, rotation: np.ndarray | None = None) -> RigidTransform:
    return RigidTransform(np.eye(3) if rotation is None else rotation, np.array([x, y, z]))


def _single_point(leaf: float = 1.0) -> RenderModel:
    cloud = OrientedPointCloud(np.zeros((1, 3)), np.array([[0.0, 0.0, -1.0]]))
    return RenderModel(cloud, leaf)


# ------------------------------------------------------------------------------------------------------
# Point splatting
# ------------------------------------------------------------------------------------------------------


def test_on_axis_vertex_lands_on_principal_point():
    r = render_depth(_single_point(), _at(0.0, 0.0, 1000.0), WIDE)
    assert r.depth.depth[320, 320] == 1000.0
    assert r.mask[320, 320]


def test_vertex_behind_camera_is_not_rendered():
    r = render_depth(_single_point(), _at(0.0, 0.0, -1000.0), WIDE)
    assert r.empty
    assert not r.depth.depth.any()


@pytest.mark.parametrize("leaf, pixels", [(1.0, 5), (4.0, 13), (6.0, 29)])
def test_splat_radius_follows_leaf_and_depth(leaf, pixels):
    # radius = ceil(fx * leaf / z): 1, 2 and 3 pixels at 1 m.
    r = splat_points(np.array([[0.0, 0.0, 1000.0]]), leaf, WIDE)
    assert int(r.mask.sum()) == pixels


def test_nearer_splat_wins():
    points = np.array([[0.0, 0.0, 1000.0], [0.0, 0.0, 900.0], [0.0, 0.0, 950.0]])
    r = splat_points(points, 1.0, WIDE)
    assert r.depth.depth[320, 320] == 900.0


# ------------------------------------------------------------------------------------------------------
# Mesh rasterization
# ------------------------------------------------------------------------------------------------------


def test_cube_front_face_depth():
    cube = box_mesh(100.0)
    model = RenderModel(cube.cloud, 5.0, cube)
    r = render_depth(model, _at(0.0, 0.0, 1050.0), WIDE)
    assert r.mask.sum() > 2000
    assert np.abs(r.depth.depth[r.mask] - 1000.0).max() <= 0.5
    # 100 mm at 1 m and fx = 500 spans about 50 pixels.
    cols = np.flatnonzero(r.mask.any(axis=0))
    assert 49 <= len(cols) <= 51


def test_tilted_plane_depth_is_perspective_correct():
    plane = plane_mesh(400.0, 400.0)
    tilt = RigidTransform.from_rotvec(np.array([0.0, np.radians(40), 0.0])).rotation
    pose = _at(0.0, 0.0, 800.0, tilt)
    r = render_depth(RenderModel(plane.cloud, 5.0, plane), pose, SMALL)
    assert r.mask.sum() > 1000
    # Intersect each pixel ray with the plane through the pose origin.
    normal = tilt[:, 2]
    v, u = np.nonzero(r.mask)
    rays = np.c_[(u - SMALL.cx) / SMALL.fx, (v - SMALL.cy) / SMALL.fy, np.ones(len(u))]
    expected = 800.0 * normal[2] / (rays @ normal)
    assert np.abs(r.depth.depth[r.mask] - expected).max() < 1e-6


def test_z_buffer_keeps_nearest_surface():
    plane = plane_mesh(2000.0, 2000.0)
    model = RenderModel(plane.cloud, 5.0, plane)
    far = render_depth(model, _at(0.0, 0.0, 900.0), SMALL)
    vertices = np.r_[
        _at(0.0, 0.0, 900.0).transform_points(plane.cloud.points),
        _at(0.0, 0.0, 700.0).transform_points(plane.cloud.points),
    ]
    faces = np.r_[plane.faces, plane.faces + 4]
    both = rasterize_mesh(vertices, faces, SMALL)
    assert far.mask.all() and both.mask.all()
    assert np.allclose(far.depth.depth, 900.0)
    assert np.allclose(both.depth.depth, 700.0)


def test_faces_reaching_behind_the_camera_are_skipped():
    vertices = np.array([[-100.0, -100.0, 500.0], [100.0, -100.0, 500.0], [0.0, 100.0, -10.0]])
    r = rasterize_mesh(vertices, np.array([[0, 1, 2]]), SMALL)
    assert r.empty


def test_off_screen_model_renders_nothing():
    cube = box_mesh(50.0)
    r = render_depth(RenderModel(cube.cloud, 5.0, cube), _at(5000.0, 0.0, 600.0), SMALL)
    assert r.empty


def test_backprojected_render_reprojects_onto_itself():
    cube = box_mesh(60.0)
    rotation = RigidTransform.from_rotvec(np.array([0.4, -0.7, 0.2])).rotation
    r = render_depth(RenderModel(cube.cloud, 5.0, cube), _at(10.0, -5.0, 600.0, rotation), SMALL)
    points, flat = backproject(r.depth, SMALL)
    u, v = SMALL.project(points)
    assert np.abs(u - flat % SMALL.width).max() < 0.5
    assert np.abs(v - flat // SMALL.width).max() < 0.5
    assert np.abs(points[:, 2] - r.depth.depth.ravel()[flat]).max() < 0.1


def test_render_model_validation():
    cube = box_mesh(10.0)
    with pytest.raises(ValueError, match="leaf"):
        RenderModel(cube.cloud, 0.0, cube)
    with pytest.raises(ValueError, match="faces"):
        RenderModel(cube.cloud, 1.0, type(cube)(cube.cloud))
