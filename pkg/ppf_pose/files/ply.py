# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""PLY models: ascii and binary little-endian, vertices with optional normals and faces."""

import logging
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path

import numpy as np
from typeguard import typechecked

from ppf_pose.geometry import (
    ObjectModel,
    OrientedPointCloud,
    estimate_normals,
    vertex_normals_from_faces,
)

logger = logging.getLogger(__name__)

_TYPES = {
    "char": "i1",
    "int8": "i1",
    "uchar": "u1",
    "uint8": "u1",
    "short": "i2",
    "int16": "i2",
    "ushort": "u2",
    "uint16": "u2",
    "int": "i4",
    "int32": "i4",
    "uint": "u4",
    "uint32": "u4",
    "float": "f4",
    "float32": "f4",
    "double": "f8",
    "float64": "f8",
}
_FORMATS = ("ascii", "binary_little_endian")
_FACE_LISTS = ("vertex_indices", "vertex_index")


class PlyError(ValueError):
    pass


class PlyHeaderError(PlyError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"PLY header line {line}: {message}")
        self.line = line


class PlyTruncatedError(PlyError):
    def __init__(self, offset: int, message: str) -> None:
        super().__init__(f"PLY body truncated at byte {offset}: {message}")
        self.offset = offset


class PlyUnsupportedError(PlyError):
    pass


@dataclass(frozen=True)
class PlyProperty:
    name: str
    dtype: str
    count_dtype: str | None = None

    @property
    def is_list(self) -> bool:
        return self.count_dtype is not None


@dataclass
class PlyElement:
    name: str
    count: int
    properties: list[PlyProperty] = field(default_factory=list)

    def scalar_dtype(self) -> np.dtype:
        return np.dtype([(p.name, "<" + p.dtype) for p in self.properties])


@dataclass(frozen=True)
class PlyHeader:
    format: str
    elements: list[PlyElement]
    body_offset: int


def parse_header(data: bytes) -> PlyHeader:
    end = data.find(b"end_header")
    if end < 0:
        raise PlyHeaderError(1, "no end_header line")
    newline = data.find(b"\n", end)
    body_offset = len(data) if newline < 0 else newline + 1
    lines = data[:end].decode("ascii", errors="replace").splitlines()

    if not lines or lines[0].strip() != "ply":
        raise PlyHeaderError(1, "file does not start with 'ply'")
    fmt = None
    elements: list[PlyElement] = []
    for number, raw in enumerate(lines[1:], start=2):
        words = raw.split()
        if not words or words[0] in ("comment", "obj_info"):
            continue
        keyword = words[0]
        if keyword == "format":
            if len(words) != 3:
                raise PlyHeaderError(number, f"malformed format line {raw.strip()!r}")
            if words[1] == "binary_big_endian":
                raise PlyUnsupportedError("binary_big_endian PLY is not supported")
            if words[1] not in _FORMATS:
                raise PlyHeaderError(number, f"unknown format {words[1]!r}")
            fmt = words[1]
        elif keyword == "element":
            if len(words) != 3 or not words[2].isdigit():
                raise PlyHeaderError(number, f"malformed element line {raw.strip()!r}")
            elements.append(PlyElement(words[1], int(words[2])))
        elif keyword == "property":
            if not elements:
                raise PlyHeaderError(number, "property before any element")
            elements[-1].properties.append(_parse_property(words, number))
        else:
            raise PlyHeaderError(number, f"unknown keyword {keyword!r}")
    if fmt is None:
        raise PlyHeaderError(2, "missing format line")
    return PlyHeader(fmt, elements, body_offset)


def _parse_property(words: list[str], number: int) -> PlyProperty:
    try:
        if words[1] == "list":
            _, _, count_type, item_type, name = words
            return PlyProperty(name, _TYPES[item_type], _TYPES[count_type])
        _, type_name, name = words
        return PlyProperty(name, _TYPES[type_name])
    except (ValueError, KeyError):
        raise PlyHeaderError(number, f"malformed property line {' '.join(words)!r}") from None


def _check_elements(header: PlyHeader) -> tuple[PlyElement, PlyElement | None]:
    vertex = face = None
    for element in header.elements:
        if element.name == "vertex":
            if any(p.is_list for p in element.properties):
                raise PlyUnsupportedError("list properties on vertices are not supported")
            vertex = element
        elif element.name == "face":
            if not any(p.is_list and p.name in _FACE_LISTS for p in element.properties):
                raise PlyUnsupportedError("face element without a vertex_indices list")
            face = element
        else:
            raise PlyUnsupportedError(f"unsupported element {element.name!r}")
    if vertex is None:
        raise PlyUnsupportedError("PLY file has no vertex element")
    names = {p.name for p in vertex.properties}
    if not {"x", "y", "z"} <= names:
        raise PlyUnsupportedError("vertex element needs x, y and z")
    return vertex, face


# ------------------------------------------------------------------------------------------------------
# Body readers
# ------------------------------------------------------------------------------------------------------


class _AsciiBody:
    def __init__(self, data: bytes, offset: int) -> None:
        self._tokens = data[offset:].decode("ascii", errors="replace").split()
        self._pos = 0
        self._size = len(data)

    def take(self, n: int, what: str) -> list[str]:
        if self._pos + n > len(self._tokens):
            raise PlyTruncatedError(self._size, f"ran out of values reading {what}")
        out = self._tokens[self._pos : self._pos + n]
        self._pos += n
        return out

    def vertices(self, element: PlyElement) -> dict[str, np.ndarray]:
        k = len(element.properties)
        try:
            values = np.array(self.take(element.count * k, "vertices"), dtype=np.float64)
        except ValueError as e:
            raise PlyError(f"non-numeric vertex value. Error: {e}") from None
        table = values.reshape(element.count, k)
        return {p.name: table[:, i] for i, p in enumerate(element.properties)}

    def faces(self, element: PlyElement) -> list[list[int]]:
        polygons = []
        for _ in range(element.count):
            polygon: list[int] = []
            for p in element.properties:
                if not p.is_list:
                    self.take(1, "faces")
                    continue
                (count,) = self.take(1, "faces")
                items = [int(v) for v in self.take(int(count), "faces")]
                if p.name in _FACE_LISTS:
                    polygon = items
            polygons.append(polygon)
        return polygons


class _BinaryBody:
    def __init__(self, data: bytes, offset: int) -> None:
        self._data = data
        self._pos = offset

    def _read(self, dtype: np.dtype, count: int, what: str) -> np.ndarray:
        stop = self._pos + dtype.itemsize * count
        if stop > len(self._data):
            raise PlyTruncatedError(self._pos, f"{what} need {stop - self._pos} bytes")
        out = np.frombuffer(self._data, dtype=dtype, count=count, offset=self._pos)
        self._pos = stop
        return out

    def vertices(self, element: PlyElement) -> dict[str, np.ndarray]:
        records = self._read(element.scalar_dtype(), element.count, "vertices")
        return {p.name: records[p.name].astype(np.float64) for p in element.properties}

    def faces(self, element: PlyElement) -> list[list[int]]:
        polygons = []
        for _ in range(element.count):
            polygon: list[int] = []
            for p in element.properties:
                if not p.is_list:
                    self._read(np.dtype("<" + p.dtype), 1, "faces")
                    continue
                count = int(self._read(np.dtype("<" + p.count_dtype), 1, "faces")[0])
                items = self._read(np.dtype("<" + p.dtype), count, "faces").tolist()
                if p.name in _FACE_LISTS:
                    polygon = items
            polygons.append(polygon)
        return polygons


def _triangulate(polygons: list[list[int]], n_vertices: int) -> np.ndarray:
    triangles = [
        (polygon[0], polygon[i], polygon[i + 1])
        for polygon in polygons
        for i in range(1, len(polygon) - 1)
    ]
    faces = np.array(triangles, dtype=np.int64).reshape(-1, 3)
    if len(faces) and (faces.min() < 0 or faces.max() >= n_vertices):
        raise PlyError("face index out of range")
    return faces


@dataclass(frozen=True, eq=False)
class PlyMesh:
    """Raw PLY geometry; `normals` is None when the file carries none."""

    points: np.ndarray
    normals: np.ndarray | None
    faces: np.ndarray | None


@typechecked
def parse_ply(data: bytes) -> PlyMesh:
    header = parse_header(data)
    vertex, face = _check_elements(header)
    body = (
        _AsciiBody(data, header.body_offset)
        if header.format == "ascii"
        else _BinaryBody(data, header.body_offset)
    )

    faces = None
    columns: dict[str, np.ndarray] = {}
    for element in header.elements:
        if element is vertex:
            columns = body.vertices(element)
        else:
            faces = _triangulate(body.faces(element), vertex.count)

    points = np.c_[columns["x"], columns["y"], columns["z"]]
    normals = None
    if {"nx", "ny", "nz"} <= columns.keys():
        normals = np.c_[columns["nx"], columns["ny"], columns["nz"]]
    skipped = sorted(columns.keys() - {"x", "y", "z", "nx", "ny", "nz"})
    if skipped:
        logger.debug("ignoring vertex properties %s", ", ".join(skipped))
    return PlyMesh(points, normals, faces)


def _oriented(mesh: PlyMesh) -> tuple[OrientedPointCloud, np.ndarray | None]:
    points, faces = mesh.points, mesh.faces
    if mesh.normals is not None:
        length = np.linalg.norm(mesh.normals, axis=1)
        keep = length > 1e-12
        if not keep.all():
            logger.debug("dropping %d vertices with zero normals", int((~keep).sum()))
        normals = mesh.normals[keep] / length[keep, None]
    elif faces is not None and len(faces):
        normals, keep = vertex_normals_from_faces(points, faces)
        normals = normals[keep]
    else:
        # Outward: the estimate faces the centroid, so flip it.
        cloud = estimate_normals(points, viewpoint=points.mean(axis=0))
        return OrientedPointCloud(cloud.points, -cloud.normals), None

    if faces is not None and not keep.all():
        remap = np.cumsum(keep) - 1
        faces = remap[faces[keep[faces].all(axis=1)]]
    return OrientedPointCloud(points[keep], normals), faces


@typechecked
def load_model_file(path: str | PathLike) -> ObjectModel:
    """Read a PLY model in mm; missing normals come from faces, else from k-NN PCA."""
    mesh = parse_ply(Path(path).read_bytes())
    cloud, faces = _oriented(mesh)
    logger.info(
        "loaded %s: %d vertices, %d faces",
        path,
        len(cloud),
        0 if faces is None else len(faces),
    )
    return ObjectModel(cloud, faces, Path(path).stem)


@typechecked
def write_ply(path: str | PathLike, model: ObjectModel, binary: bool = False) -> None:
    """Write vertices with normals (float32) and triangle faces."""
    cloud = model.cloud
    faces = model.faces if model.faces is not None else np.zeros((0, 3), dtype=np.int64)
    lines = [
        "ply",
        f"format {'binary_little_endian' if binary else 'ascii'} 1.0",
        f"element vertex {len(cloud)}",
        *(f"property float {name}" for name in ("x", "y", "z", "nx", "ny", "nz")),
    ]
    if model.faces is not None:
        lines += [f"element face {len(faces)}", "property list uchar int vertex_indices"]
    lines.append("end_header")
    header = ("\n".join(lines) + "\n").encode("ascii")

    table = np.c_[cloud.points, cloud.normals].astype("<f4")
    if binary:
        face_records = np.zeros(len(faces), dtype=[("n", "u1"), ("idx", "<i4", (3,))])
        face_records["n"] = 3
        face_records["idx"] = faces
        body = table.tobytes() + (face_records.tobytes() if model.faces is not None else b"")
    else:
        rows = [" ".join(repr(float(v)) for v in row) for row in table]
        if model.faces is not None:
            rows += ["3 " + " ".join(str(int(i)) for i in face) for face in faces]
        body = ("\n".join(rows) + "\n").encode("ascii") if rows else b""
    Path(path).write_bytes(header + body)
