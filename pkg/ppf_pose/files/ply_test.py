# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

import struct

import numpy as np
import pytest

from ppf_pose.evaluation import box_mesh
from ppf_pose.files import (
    PlyError,
    PlyHeaderError,
    PlyTruncatedError,
    PlyUnsupportedError,
    load_model_file,
    parse_header,
    parse_ply,
    write_ply,
)

CUBE_VERTICES = [
    (0, 0, 0),
    (1, 0, 0),
    (1, 1, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 0, 1),
    (1, 1, 1),
    (0, 1, 1),
]
CUBE_QUADS = [
    (0, 3, 2, 1),
    (4, 5, 6, 7),
    (0, 1, 5, 4),
    (1, 2, 6, 5),
    (2, 3, 7, 6),
    (3, 0, 4, 7),
]


def _ascii_cube(extra: str = "") -> bytes:
    header = [
        "ply",
        "format ascii 1.0",
        "comment unit cube",
        "element vertex 8",
        "property float x",
        "property float y",
        "property float z",
        *([extra] if extra else []),
        "element face 6",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    tail = " 255" if extra else ""
    body = [f"{x} {y} {z}{tail}" for x, y, z in CUBE_VERTICES]
    body += ["4 " + " ".join(map(str, q)) for q in CUBE_QUADS]
    return ("\n".join(header + body) + "\n").encode("ascii")


def _binary_cube() -> bytes:
    header = (
        "ply\nformat binary_little_endian 1.0\nelement vertex 8\n"
        "property float x\nproperty float y\nproperty float z\n"
        "element face 6\nproperty list uchar int vertex_indices\nend_header\n"
    ).encode("ascii")
    body = b"".join(struct.pack("<3f", *v) for v in CUBE_VERTICES)
    body += b"".join(struct.pack("<B4i", 4, *q) for q in CUBE_QUADS)
    return header + body


# ------------------------------------------------------------------------------------------------------
# Parsing
# ------------------------------------------------------------------------------------------------------


def test_ascii_cube_is_triangulated():
    mesh = parse_ply(_ascii_cube())
    assert mesh.points.shape == (8, 3)
    assert mesh.normals is None
    assert mesh.faces.shape == (12, 3)
    assert mesh.faces.tolist()[:2] == [[0, 3, 2], [0, 2, 1]]


def test_binary_and_ascii_agree():
    ascii_mesh = parse_ply(_ascii_cube())
    binary_mesh = parse_ply(_binary_cube())
    assert np.array_equal(ascii_mesh.points, binary_mesh.points)
    assert np.array_equal(ascii_mesh.faces, binary_mesh.faces)


def test_extra_vertex_properties_are_skipped():
    mesh = parse_ply(_ascii_cube("property uchar alpha"))
    assert mesh.points.shape == (8, 3)
    assert mesh.faces.shape == (12, 3)


def test_header_records_elements_and_body_offset():
    data = _binary_cube()
    header = parse_header(data)
    assert header.format == "binary_little_endian"
    assert [(e.name, e.count) for e in header.elements] == [("vertex", 8), ("face", 6)]
    assert data[: header.body_offset].endswith(b"end_header\n")


@pytest.mark.parametrize(
    "data, error, match",
    [
        (b"obj\nend_header\n", PlyHeaderError, "start with 'ply'"),
        (b"ply\nformat ascii 1.0\n", PlyHeaderError, "no end_header"),
        (b"ply\nelement vertex 1\nend_header\n", PlyHeaderError, "missing format"),
        (b"ply\nformat ascii 1.0\nproperty float x\nend_header\n", PlyHeaderError, "before any"),
        (b"ply\nformat ascii 1.0\nwibble\nend_header\n", PlyHeaderError, "line 3"),
        (
            b"ply\nformat ascii 1.0\nelement vertex 1\nproperty quux x\nend_header\n",
            PlyHeaderError,
            "malformed property",
        ),
        (b"ply\nformat binary_big_endian 1.0\nend_header\n", PlyUnsupportedError, "big_endian"),
    ],
)
def test_bad_headers(data, error, match):
    with pytest.raises(error, match=match):
        parse_ply(data)


def test_unknown_element_is_unsupported():
    data = _ascii_cube().replace(b"element face 6", b"element edge 6")
    with pytest.raises(PlyUnsupportedError, match="'edge'"):
        parse_ply(data)


def test_vertex_without_coordinates_is_unsupported():
    data = b"ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nend_header\n1\n"
    with pytest.raises(PlyUnsupportedError, match="x, y and z"):
        parse_ply(data)


@pytest.mark.parametrize("make", [_ascii_cube, _binary_cube])
def test_truncated_body(make):
    data = make()
    with pytest.raises(PlyTruncatedError):
        parse_ply(data[:-5])


def test_face_index_out_of_range():
    data = _ascii_cube().replace(b"4 3 0 4 7", b"4 3 0 4 9")
    with pytest.raises(PlyError, match="out of range"):
        parse_ply(data)


# ------------------------------------------------------------------------------------------------------
# Models
# ------------------------------------------------------------------------------------------------------


def test_loaded_cube_gets_outward_normals(tmp_path):
    path = tmp_path / "cube.ply"
    path.write_bytes(_ascii_cube())
    model = load_model_file(path)
    assert model.name == "cube"
    assert len(model.cloud) == 8
    outward = model.cloud.points - 0.5
    assert np.all(np.einsum("ij,ij->i", model.cloud.normals, outward) > 0)


@pytest.mark.parametrize("binary", [False, True])
def test_written_model_reloads(tmp_path, binary):
    box = box_mesh((40.0, 20.0, 10.0))
    path = tmp_path / "box.ply"
    write_ply(path, box, binary=binary)
    model = load_model_file(path)
    assert np.allclose(model.cloud.points, box.cloud.points, atol=1e-4)
    assert np.allclose(model.cloud.normals, box.cloud.normals, atol=1e-5)
    assert np.array_equal(model.faces, box.faces)


def test_point_only_model_estimates_normals(tmp_path):
    rng = np.random.default_rng(0)
    direction = rng.normal(size=(300, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    lines = [
        "ply",
        "format ascii 1.0",
        "element vertex 300",
        "property double x",
        "property double y",
        "property double z",
        "end_header",
    ]
    lines += [" ".join(repr(v) for v in 50.0 * d) for d in direction]
    path = tmp_path / "sphere.ply"
    path.write_text("\n".join(lines) + "\n")
    model = load_model_file(path)
    assert model.faces is None
    assert np.all(np.einsum("ij,ij->i", model.cloud.normals, model.cloud.points) > 0)
