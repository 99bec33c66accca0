# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""PPFM, the binary model table file.

Little-endian throughout:

    magic "PPFM", version u16,
    d_max f64, n_dist_bins u32, n_angle_bins u32, noise_fraction f64,
    leaf f64, point count u64, diameter f64,
    points: point count x (x, y, z, nx, ny, nz) f32,
    entry count u64,
    entries: (packed key u32, ref index u32, alpha f32), grouped by ascending key.
"""

import struct
from pathlib import Path

import numpy as np
from typeguard import typechecked

from ppf_pose.geometry import OrientedPointCloud

from .features import PPFError, QuantizationParams
from .table import ModelTable

MAGIC = b"PPFM"
VERSION = 1

_HEADER = struct.Struct("<4sHdIIddQd")
_COUNT = struct.Struct("<Q")
_POINT = np.dtype("<f4")
_RECORD = np.dtype([("key", "<u4"), ("ref", "<u4"), ("alpha", "<f4")])


@typechecked
def serialize_table(table: ModelTable) -> bytes:
    q = table.quant
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        table.d_max,
        q.n_dist_bins,
        q.n_angle_bins,
        q.noise_fraction,
        table.leaf,
        len(table.model),
        table.model.diameter,
    )
    cloud = np.hstack([table.model.points, table.model.normals]).astype(_POINT)

    records = np.empty(table.entry_count, dtype=_RECORD)
    records["key"] = np.repeat(table.keys, np.diff(table.offsets))
    records["ref"] = table.ref_index
    records["alpha"] = table.alpha
    return b"".join(
        [header, cloud.tobytes(), _COUNT.pack(table.entry_count), records.tobytes()]
    )


def _take(data: bytes, offset: int, size: int, what: str) -> memoryview:
    if offset + size > len(data):
        raise PPFError(f"truncated PPFM data: {what} needs {size} bytes at offset {offset}")
    return memoryview(data)[offset : offset + size]


@typechecked
def deserialize_table(data: bytes) -> ModelTable:
    head = _take(data, 0, _HEADER.size, "header")
    magic, version, d_max, n_dist, n_angle, noise, leaf, n_points, diameter = (
        _HEADER.unpack(head)
    )
    if magic != MAGIC:
        raise PPFError(f"not a PPFM file (magic {magic!r})")
    if version != VERSION:
        raise PPFError(f"unsupported PPFM version {version}")
    offset = _HEADER.size

    size = n_points * 6 * _POINT.itemsize
    cloud = np.frombuffer(_take(data, offset, size, "points"), dtype=_POINT).reshape(-1, 6)
    offset += size
    (n_entries,) = _COUNT.unpack(_take(data, offset, _COUNT.size, "entry count"))
    offset += _COUNT.size
    size = n_entries * _RECORD.itemsize
    records = np.frombuffer(_take(data, offset, size, "entries"), dtype=_RECORD)
    offset += size
    if offset != len(data):
        raise PPFError(f"{len(data) - offset} trailing bytes after PPFM entries")

    try:
        quant = QuantizationParams(d_max, n_dist, n_angle, noise)
        model = OrientedPointCloud(
            cloud[:, :3].astype(np.float64), cloud[:, 3:].astype(np.float64), diameter
        )
    except ValueError as e:
        raise PPFError(f"invalid PPFM header or points. Error: {e}") from e

    keys, starts, counts = np.unique(records["key"], return_index=True, return_counts=True)
    offsets = np.r_[0, np.cumsum(counts)]
    if not np.array_equal(starts, offsets[:-1]):
        raise PPFError("PPFM entries are not grouped by ascending key")
    return ModelTable(model, quant, leaf, keys, offsets, records["ref"], records["alpha"])


@typechecked
def save_table(table: ModelTable, path: str | Path) -> None:
    Path(path).write_bytes(serialize_table(table))


@typechecked
def load_table(path: str | Path) -> ModelTable:
    return deserialize_table(Path(path).read_bytes())
