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

from ppf_pose.evaluation import box_mesh, l_block_mesh, plane_mesh, sphere_mesh
from ppf_pose.geometry import ObjectModel


def _signed_volume(model: ObjectModel) -> float:
    v = model.cloud.points[model.faces]
    return float(np.einsum("ij,ij->i", v[:, 0], np.cross(v[:, 1], v[:, 2])).sum() / 6.0)


def _is_closed(model: ObjectModel) -> bool:
    """Every directed edge is matched by its reverse exactly once."""
    f = model.faces
    edges = np.r_[f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]]
    forward = {tuple(e) for e in edges.tolist()}
    return len(forward) == len(edges) and all((b, a) in forward for a, b in forward)


# ------------------------------------------------------------------------------------------------------
# Closed solids
# ------------------------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "model, volume",
    [
        (box_mesh(60.0), 60.0**3),
        (box_mesh((40.0, 20.0, 10.0)), 8000.0),
        (l_block_mesh(), (80 * 30 + 30 * 30) * 40.0),
    ],
)
def test_prisms_are_closed_with_outward_faces(model, volume):
    assert _is_closed(model)
    assert _signed_volume(model) == pytest.approx(volume)


def test_box_layout():
    box = box_mesh((40.0, 20.0, 10.0))
    assert len(box.cloud) == 8
    assert box.faces.shape == (12, 3)
    assert np.allclose(box.cloud.points.min(axis=0), [-20.0, -10.0, -5.0])
    assert np.allclose(box.cloud.points.max(axis=0), [20.0, 10.0, 5.0])
    assert box.cloud.diameter == pytest.approx(np.sqrt(40.0**2 + 20.0**2 + 10.0**2))
    assert np.all(np.einsum("ij,ij->i", box.cloud.points, box.cloud.normals) > 0)


def test_l_block_is_centred_on_its_bounding_box():
    block = l_block_mesh(arm=80.0, short_arm=60.0, thickness=30.0, height=40.0)
    assert np.allclose(block.cloud.points.min(axis=0), [-40.0, -30.0, -20.0])
    assert np.allclose(block.cloud.points.max(axis=0), [40.0, 30.0, 20.0])


def test_sphere_approximates_the_ball():
    sphere = sphere_mesh(30.0, n_vertices=300)
    assert _is_closed(sphere)
    assert np.allclose(np.linalg.norm(sphere.cloud.points, axis=1), 30.0, atol=0.5)
    ball = 4.0 / 3.0 * np.pi * 30.0**3
    assert 0.95 * ball < _signed_volume(sphere) < ball


def test_plane_faces_positive_z():
    plane = plane_mesh(100.0, 50.0)
    assert plane.faces.shape == (2, 3)
    assert np.allclose(plane.cloud.normals, [0.0, 0.0, 1.0])
    assert np.allclose(plane.cloud.points[:, 2], 0.0)


@pytest.mark.parametrize(
    "build",
    [
        lambda: box_mesh(0.0),
        lambda: box_mesh((1.0, -1.0, 1.0)),
        lambda: l_block_mesh(short_arm=30.0, thickness=30.0),
        lambda: l_block_mesh(arm=60.0, short_arm=60.0),
        lambda: plane_mesh(0.0, 1.0),
        lambda: sphere_mesh(10.0, n_vertices=3),
    ],
)
def test_invalid_sizes(build):
    with pytest.raises(ValueError):
        build()
