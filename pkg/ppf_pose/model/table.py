# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""The global model table: every model point pair, indexed by its quantised feature."""

import itertools
import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree
from typeguard import typechecked

from ppf_pose.config.concurrency import chunk_ranges, ordered_map
from ppf_pose.geometry import OrientedPointCloud
from ppf_pose.preprocess import SubsampleParams, preprocess_cloud

from .features import (
    MIN_PAIR_DISTANCE,
    PPFError,
    PPFKey,
    QuantizationParams,
    compute_ppf_batch,
    discretize_batch,
    pack_key,
    pack_keys,
    unpack_keys,
)
from .frames import alpha_angles, intermediate_frames

logger = logging.getLogger(__name__)

# Relative slack on d_max; the diameter pair itself must survive float rounding.
DIST_SLACK = 1e-9

_REFS_PER_CHUNK = 64


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ModelTable:
    """CSR layout: entries of `keys[k]` are `ref_index[offsets[k]:offsets[k+1]]` (and `alpha`)."""

    model: OrientedPointCloud
    quant: QuantizationParams
    leaf: float
    keys: np.ndarray
    offsets: np.ndarray
    ref_index: np.ndarray
    alpha: np.ndarray

    def __post_init__(self) -> None:
        if self.quant.d_max is None:
            raise PPFError("table quantization must carry d_max")
        keys = np.ascontiguousarray(self.keys, dtype=np.uint32)
        offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        ref_index = np.ascontiguousarray(self.ref_index, dtype=np.uint32)
        alpha = np.ascontiguousarray(self.alpha, dtype=np.float32)
        if (
            len(offsets) != len(keys) + 1
            or offsets[0] != 0
            or offsets[-1] != len(ref_index)
        ):
            raise PPFError("inconsistent table offsets")
        if len(alpha) != len(ref_index):
            raise PPFError("ref_index and alpha differ in length")
        if len(keys) > 1 and np.any(np.diff(keys.astype(np.int64)) <= 0):
            raise PPFError("table keys must be strictly increasing")
        if len(ref_index) and int(ref_index.max()) >= len(self.model):
            raise PPFError("reference index out of range")
        for name, value in (
            ("keys", keys),
            ("offsets", offsets),
            ("ref_index", ref_index),
            ("alpha", alpha),
        ):
            object.__setattr__(self, name, _frozen(value))
        object.__setattr__(self, "leaf", float(self.leaf))

    @classmethod
    def from_records(
        cls,
        model: OrientedPointCloud,
        quant: QuantizationParams,
        leaf: float,
        packed: np.ndarray,
        ref_index: np.ndarray,
        alpha: np.ndarray,
    ) -> "ModelTable":
        """Group flat records by key; records sharing a key keep their input order."""
        order = np.argsort(packed, kind="stable")
        packed = np.asarray(packed)[order]
        keys, counts = np.unique(packed, return_counts=True)
        offsets = np.concatenate([[0], np.cumsum(counts)])
        ref_index = np.asarray(ref_index)[order]
        return cls(model, quant, leaf, keys, offsets, ref_index, np.asarray(alpha)[order])

    @property
    def d_max(self) -> float:
        return float(self.quant.d_max)

    @property
    def entry_count(self) -> int:
        return len(self.ref_index)

    def find(self, packed: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Entry ranges [start, stop) for each packed key; empty where the key is absent."""
        packed = np.asarray(packed, dtype=np.uint32)
        pos = np.searchsorted(self.keys, packed)
        inside = pos < len(self.keys)
        hit = np.zeros(packed.shape, dtype=bool)
        hit[inside] = self.keys[pos[inside]] == packed[inside]
        starts = np.where(hit, self.offsets[np.minimum(pos, len(self.keys) - 1)], 0)
        stops = np.where(hit, self.offsets[np.minimum(pos, len(self.keys) - 1) + 1], 0)
        return starts, stops

    def lookup(self, key: PPFKey | int) -> list[tuple[int, float]]:
        packed = pack_key(key, self.quant) if isinstance(key, PPFKey) else int(key)
        if len(self.keys) == 0:
            return []
        start, stop = (int(v[0]) for v in self.find(np.array([packed])))
        return list(
            zip(self.ref_index[start:stop].tolist(), self.alpha[start:stop].tolist())
        )

    @property
    def entries(self) -> dict[PPFKey, list[tuple[int, float]]]:
        bins = unpack_keys(self.keys, self.quant)
        return {
            PPFKey(*(int(b) for b in bins[k])): list(
                zip(
                    self.ref_index[self.offsets[k] : self.offsets[k + 1]].tolist(),
                    self.alpha[self.offsets[k] : self.offsets[k + 1]].tolist(),
                )
            )
            for k in range(len(self.keys))
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelTable):
            return NotImplemented
        return bool(
            self.quant == other.quant
            and self.leaf == other.leaf
            and self.model.diameter == other.model.diameter
            and np.array_equal(self.model.points, other.model.points)
            and np.array_equal(self.model.normals, other.model.normals)
            and np.array_equal(self.keys, other.keys)
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.ref_index, other.ref_index)
            and np.array_equal(self.alpha, other.alpha)
        )

    __hash__ = None


def pair_records(
    model: OrientedPointCloud,
    q: QuantizationParams,
    refs: range,
    min_pair_angle: float = 0.0,
    tree: cKDTree | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(packed key, ref index, alpha) of every ordered pair (i, j), i in `refs`, within d_max."""
    pts, normals = model.points, model.normals
    tree = cKDTree(pts) if tree is None else tree
    reach = q.d_max * (1.0 + DIST_SLACK)
    ref_ids = np.arange(refs.start, refs.stop)
    neighbors = tree.query_ball_point(pts[ref_ids], reach, return_sorted=True)
    counts = [len(n) for n in neighbors]
    i = np.repeat(ref_ids, counts)
    flat = itertools.chain.from_iterable(neighbors)
    j = np.fromiter(flat, dtype=np.int64, count=sum(counts))

    features = compute_ppf_batch(pts[i], normals[i], pts[j], normals[j])
    keep = (
        (i != j)
        & (features[:, 0] > MIN_PAIR_DISTANCE)
        & (features[:, 0] <= reach)
        & (features[:, 3] >= min_pair_angle)
    )
    i, j, features = i[keep], j[keep], features[keep]

    rotations, translations = intermediate_frames(pts[ref_ids], normals[ref_ids])
    local = i - refs.start
    alpha = alpha_angles(rotations[local], translations[local], pts[j])
    packed = pack_keys(discretize_batch(features, q), q)
    return packed, i.astype(np.uint32), alpha.astype(np.float32)


@typechecked
def build_model_table(
    model_raw: OrientedPointCloud,
    sp: SubsampleParams,
    q: QuantizationParams,
    min_pair_angle: float = 0.0,
    workers: int | None = None,
) -> ModelTable:
    """Preprocess the model and store every ordered pair within d_max.

    The subsampled cloud is rounded to float32 first so that a table read back
    from disk describes exactly the stored points. `d_max` defaults to the
    subsampled diameter. `min_pair_angle` > 0 skips pairs whose normals are
    closer than that angle (ablation of the classic near-parallel pair rule).
    """
    model = preprocess_cloud(model_raw, sp).as_float32()
    if len(model) < 2:
        raise PPFError(f"model has {len(model)} point(s) after preprocessing, need >= 2")
    if q.d_max is None:
        q = replace(q, d_max=model.diameter)

    tree = cKDTree(model.points)
    chunks = ordered_map(
        lambda refs: pair_records(model, q, refs, min_pair_angle, tree),
        chunk_ranges(len(model), _REFS_PER_CHUNK),
        workers,
    )
    packed, ref_index, alpha = (np.concatenate(parts) for parts in zip(*chunks))
    table = ModelTable.from_records(model, q, sp.leaf, packed, ref_index, alpha)
    logger.info(
        "model table: %d -> %d points, %d entries under %d keys (d_max %.3f mm)",
        len(model_raw),
        len(model),
        table.entry_count,
        len(table.keys),
        table.d_max,
    )
    return table
