# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Per-reference-point Hough voting over (model point, rotation angle)."""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree
from typeguard import typechecked

from ppf_pose.config import chunk_ranges, ordered_map
from ppf_pose.geometry import OrientedPointCloud, RigidTransform
from ppf_pose.model import (
    ModelTable,
    PPFKey,
    QuantizationParams,
    alpha_angles,
    compute_ppf_batch,
    intermediate_frames,
    neighbor_key_batch,
    pack_key,
)
from ppf_pose.model.features import MIN_PAIR_DISTANCE
from ppf_pose.model.table import DIST_SLACK

from .hypothesis import PoseHypothesis, Status, vote_order
from .params import MatchParams

logger = logging.getLogger(__name__)

_REFS_PER_CHUNK = 16


class DuplicateLog:
    """(key, scene angle bin) pairs already voted for by the current reference point."""

    def __init__(self) -> None:
        self._seen: set[int] = set()

    @staticmethod
    def pack(key: int, alpha_bin: int) -> int:
        return (key << 32) | alpha_bin

    def allow(self, key: int, alpha_bin: int) -> bool:
        packed = self.pack(key, alpha_bin)
        if packed in self._seen:
            return False
        self._seen.add(packed)
        return True

    def clear(self) -> None:
        self._seen.clear()

    def __len__(self) -> int:
        return len(self._seen)


def duplicate_suppression(
    seen: DuplicateLog,
    key: PPFKey | int,
    alpha_s_bin: int,
    q: QuantizationParams | None = None,
) -> bool:
    """True the first time (key, alpha_s_bin) shows up since `seen` was cleared."""
    if isinstance(key, PPFKey):
        if q is None:
            raise ValueError("a PPFKey needs quantization params to be packed")
        key = pack_key(key, q)
    return seen.allow(int(key), int(alpha_s_bin))


def scene_alpha_bins(alpha: np.ndarray, n_alpha_bins: int) -> np.ndarray:
    """Bins of width 2pi/n starting at -pi, for the duplicate log."""
    scaled = (np.asarray(alpha) + np.pi) / (2 * np.pi) * n_alpha_bins
    return np.floor(scaled).astype(np.int64) % n_alpha_bins


def rotation_bins(delta: np.ndarray, n_alpha_bins: int) -> np.ndarray:
    """Bins of width 2pi/n centred on multiples of the width, bin 0 around 0."""
    step = 2 * np.pi / n_alpha_bins
    return np.floor(np.asarray(delta) / step + 0.5).astype(np.int64) % n_alpha_bins


def first_occurrence(keys: np.ndarray, alpha_bins: np.ndarray) -> np.ndarray:
    """Mask keeping the first of every repeated (key, alpha bin) pair."""
    packed = (keys.astype(np.uint64) << np.uint64(32)) | alpha_bins.astype(np.uint64)
    _, first = np.unique(packed, return_index=True)
    mask = np.zeros(len(packed), dtype=bool)
    mask[first] = True
    return mask


@dataclass(frozen=True, eq=False)
class Accumulator:
    """Votes of one scene reference point over [model point, rotation bin].

    `cells` and `deltas` list every cast vote (flat cell index and exact angle
    difference alpha_m - alpha_s) for peak refinement.
    """

    votes: np.ndarray
    cells: np.ndarray
    deltas: np.ndarray

    @property
    def total(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class Peak:
    model_index: int
    alpha_bin: int
    votes: int


@dataclass(frozen=True, eq=False)
class _Scene:
    cloud: OrientedPointCloud
    tree: cKDTree
    rotations: np.ndarray
    translations: np.ndarray


def _expand(starts: np.ndarray, stops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Concatenated ranges [start, stop) and the source row of each element."""
    counts = stops - starts
    rows = np.repeat(np.arange(len(counts)), counts)
    base = np.cumsum(counts) - counts
    return np.arange(counts.sum()) - np.repeat(base, counts) + np.repeat(starts, counts), rows


def _vote(
    table: ModelTable,
    scene: _Scene,
    ref: int,
    q: QuantizationParams,
    p: MatchParams,
) -> Accumulator:
    pts, normals = scene.cloud.points, scene.cloud.normals
    n_alpha = p.n_alpha_bins
    empty = np.zeros((len(table.model), n_alpha), dtype=np.int64)
    none = np.zeros(0, dtype=np.int64)

    reach = table.d_max * (1.0 + DIST_SLACK)
    nbrs = np.asarray(scene.tree.query_ball_point(pts[ref], reach, return_sorted=True))
    nbrs = nbrs[nbrs != ref].astype(np.int64)
    if len(nbrs) == 0:
        return Accumulator(empty, none, none.astype(np.float64))

    m = len(nbrs)
    features = compute_ppf_batch(
        np.repeat(pts[ref][None], m, 0),
        np.repeat(normals[ref][None], m, 0),
        pts[nbrs],
        normals[nbrs],
    )
    keep = (features[:, 0] > MIN_PAIR_DISTANCE) & (features[:, 0] <= reach)
    nbrs, features = nbrs[keep], features[keep]
    alpha_s = alpha_angles(
        np.repeat(scene.rotations[ref][None], len(nbrs), 0),
        np.repeat(scene.translations[ref][None], len(nbrs), 0),
        pts[nbrs],
    )

    candidates, valid = neighbor_key_batch(features, q)
    per_pair = valid.sum(axis=1)
    keys = candidates[valid]
    key_alpha = np.repeat(alpha_s, per_pair)
    if p.duplicate_suppression:
        first = first_occurrence(keys, scene_alpha_bins(key_alpha, n_alpha))
        keys, key_alpha = keys[first], key_alpha[first]

    entry, row = _expand(*table.find(keys))
    delta = table.alpha[entry].astype(np.float64) - key_alpha[row]
    cells = table.ref_index[entry].astype(np.int64) * n_alpha + rotation_bins(delta, n_alpha)
    votes = np.bincount(cells, minlength=empty.size).reshape(empty.shape)
    return Accumulator(votes, cells, delta)


def _scene_context(scene: OrientedPointCloud) -> _Scene:
    rotations, translations = intermediate_frames(scene.points, scene.normals)
    return _Scene(scene, cKDTree(scene.points), rotations, translations)


def _effective_quant(table: ModelTable, p: MatchParams) -> QuantizationParams:
    if p.noise_fraction is None:
        return table.quant
    return replace(table.quant, noise_fraction=p.noise_fraction)


@typechecked
def vote_reference_point(
    table: ModelTable, scene: OrientedPointCloud, ref: int, p: MatchParams
) -> Accumulator:
    """The accumulator one scene reference point fills (zeroed per reference point)."""
    if not 0 <= ref < len(scene):
        raise ValueError(f"reference index {ref} out of range")
    return _vote(table, _scene_context(scene), ref, _effective_quant(table, p), p)


def extract_peak(acc: Accumulator) -> Peak:
    """Highest cell; ties go to the lowest model index, then the lowest rotation bin."""
    flat = int(np.argmax(acc.votes))
    model_index, alpha_bin = divmod(flat, acc.votes.shape[1])
    return Peak(model_index, alpha_bin, int(acc.votes.flat[flat]))


def peak_angle(acc: Accumulator, peak: Peak, refine: bool) -> float:
    """alpha_m - alpha_s at the peak: the bin centre, or the mean of its exact votes."""
    n_alpha = acc.votes.shape[1]
    step = 2 * math.pi / n_alpha
    centre = math.remainder(peak.alpha_bin * step, 2 * math.pi)
    if not refine or peak.votes == 0:
        return centre
    inside = acc.deltas[acc.cells == peak.model_index * n_alpha + peak.alpha_bin]
    offsets = np.remainder(inside - centre + math.pi, 2 * math.pi) - math.pi
    return centre + float(offsets.mean())


def _hypothesis(
    table: ModelTable,
    scene: _Scene,
    ref: int,
    model_frames: tuple[np.ndarray, np.ndarray],
    q: QuantizationParams,
    p: MatchParams,
) -> PoseHypothesis | None:
    acc = _vote(table, scene, ref, q, p)
    peak = extract_peak(acc)
    if peak.votes == 0:
        return None
    delta = peak_angle(acc, peak, p.refine_alpha)
    t_s = RigidTransform(scene.rotations[ref], scene.translations[ref])
    t_m = RigidTransform(model_frames[0][peak.model_index], model_frames[1][peak.model_index])
    pose = t_s.inverse() @ RigidTransform.rot_x(-delta) @ t_m
    return PoseHypothesis(pose=pose, votes=peak.votes, scene_ref=ref, status=Status.RAW)


@typechecked
def match_scene(
    table: ModelTable,
    scene: OrientedPointCloud,
    p: MatchParams,
    workers: int | None = None,
) -> list[PoseHypothesis]:
    """One peak hypothesis per voting scene reference point, by votes then reference index."""
    if len(scene) == 0:
        return []
    context = _scene_context(scene)
    model_frames = intermediate_frames(table.model.points, table.model.normals)
    q = _effective_quant(table, p)
    refs = np.arange(0, len(scene), p.scene_ref_stride)

    def run(chunk: range) -> list[PoseHypothesis]:
        found = (
            _hypothesis(table, context, int(refs[i]), model_frames, q, p) for i in chunk
        )
        return [h for h in found if h is not None]

    chunks = ordered_map(run, chunk_ranges(len(refs), _REFS_PER_CHUNK), workers)
    hyps = sorted((h for chunk in chunks for h in chunk), key=vote_order)
    logger.info(
        "matching: %d scene points, %d reference points, %d hypotheses",
        len(scene),
        len(refs),
        len(hyps),
    )
    return hyps
