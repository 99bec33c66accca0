# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Voxel subsampling with per-voxel normal clustering and neighbour-cluster merging."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from typeguard import typechecked

from ppf_pose.geometry import OrientedPointCloud

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubsampleParams:
    leaf: float
    normal_cluster_angle: float = math.pi / 6
    merge_neighbor_clusters: bool = True

    def __post_init__(self) -> None:
        if not self.leaf > 0:
            raise ValueError(f"leaf must be > 0, got {self.leaf}")
        # pi itself is accepted: it switches normal splitting off.
        if not 0 < self.normal_cluster_angle <= math.pi:
            raise ValueError("normal_cluster_angle must be in (0, pi]")

    @property
    def joins_everything(self) -> bool:
        return self.normal_cluster_angle >= math.pi


@dataclass(frozen=True, eq=False)
class ClusteredCloud:
    """One representative per (voxel, normal cluster).

    `point_cluster[i]` is the representative index that input point i fell into.
    """

    cloud: OrientedPointCloud
    cell_id: np.ndarray
    cell_key: np.ndarray
    cluster_id: np.ndarray
    weight: np.ndarray
    point_cluster: np.ndarray

    def __len__(self) -> int:
        return len(self.cloud)


class _NormalClusterer:
    """Greedy running-mean clustering of the normals of one voxel."""

    def __init__(self, angle: float, join_all: bool) -> None:
        self._cos = math.cos(angle)
        self._join_all = join_all

    def _within(self, total: list[float], n: tuple[float, float, float]) -> bool:
        if self._join_all:
            return True
        norm = math.sqrt(total[0] ** 2 + total[1] ** 2 + total[2] ** 2)
        if norm == 0.0:
            return False
        dot = total[0] * n[0] + total[1] * n[1] + total[2] * n[2]
        return dot > norm * self._cos

    def cluster(self, normals: list[tuple[float, float, float]]) -> list[list[int]]:
        clusters: list[list[int]] = []
        unassigned = list(range(len(normals)))
        while unassigned:
            seed = unassigned[0]
            members = [seed]
            total = list(normals[seed])
            rest = []
            for i in unassigned[1:]:
                n = normals[i]
                if self._within(total, n):
                    members.append(i)
                    total[0] += n[0]
                    total[1] += n[1]
                    total[2] += n[2]
                else:
                    rest.append(i)
            # The mean drifts while members join; send back whoever it left behind.
            while True:
                ejected = [i for i in members if not self._within(total, normals[i])]
                if not ejected:
                    break
                for i in ejected:
                    members.remove(i)
                    total[0] -= normals[i][0]
                    total[1] -= normals[i][1]
                    total[2] -= normals[i][2]
                if not members:
                    members = [seed]
                    total = list(normals[seed])
                    ejected.remove(seed)
                rest = sorted(rest + ejected)
            clusters.append(members)
            unassigned = rest
        return clusters


def voxel_keys(points: np.ndarray, leaf: float) -> np.ndarray:
    """Integer voxel coordinates anchored at the cloud's minimum corner."""
    return np.floor((points - points.min(axis=0)) / leaf).astype(np.int64)


@typechecked
def subsample(c: OrientedPointCloud, p: SubsampleParams) -> ClusteredCloud:
    """Bucket points into `leaf` voxels, split each voxel by normal, emit cluster centroids."""
    if len(c) == 0:
        raise ValueError("cannot subsample an empty cloud")

    keys = voxel_keys(c.points, p.leaf)
    order = np.lexsort((np.arange(len(c)), keys[:, 2], keys[:, 1], keys[:, 0]))
    sorted_keys = keys[order]
    change = np.flatnonzero(np.any(np.diff(sorted_keys, axis=0) != 0, axis=1)) + 1
    starts = np.r_[0, change]
    stops = np.r_[change, len(c)]

    clusterer = _NormalClusterer(p.normal_cluster_angle, p.joins_everything)
    normals_list = [tuple(n) for n in c.normals.tolist()]

    rep_points, rep_normals, rep_cell, rep_weight = [], [], [], []
    point_cluster = np.empty(len(c), dtype=np.int64)
    for cell, (start, stop) in enumerate(zip(starts, stops)):
        members = order[start:stop]
        for local in clusterer.cluster([normals_list[i] for i in members]):
            idx = members[local]
            total = c.normals[idx].sum(axis=0)
            norm = np.linalg.norm(total)
            point_cluster[idx] = len(rep_points)
            rep_points.append(c.points[idx].mean(axis=0))
            rep_normals.append(total / norm if norm > 0 else c.normals[idx[0]])
            rep_cell.append(cell)
            rep_weight.append(len(idx))

    rep_cell_arr = np.asarray(rep_cell, dtype=np.int64)
    logger.debug(
        "subsampled %d points into %d representatives over %d voxels",
        len(c),
        len(rep_points),
        len(starts),
    )
    return ClusteredCloud(
        cloud=OrientedPointCloud(np.asarray(rep_points), np.asarray(rep_normals)),
        cell_id=rep_cell_arr,
        cell_key=sorted_keys[starts][rep_cell_arr],
        cluster_id=np.arange(len(rep_points), dtype=np.int64),
        weight=np.asarray(rep_weight, dtype=np.int64),
        point_cluster=point_cluster,
    )


def _merge_groups(cc: ClusteredCloud, p: SubsampleParams) -> list[np.ndarray]:
    """Seeded complete-linkage groups: every two members are closer than a leaf and similar.

    Seeds go heaviest first (ties by index); candidates join nearest first.
    """
    reps = cc.cloud
    tree = cKDTree(reps.points)
    cos_limit = math.cos(p.normal_cluster_angle)
    assigned = np.zeros(len(reps), dtype=bool)
    groups = []
    for seed in np.lexsort((np.arange(len(reps)), -cc.weight)):
        if assigned[seed]:
            continue
        assigned[seed] = True
        members = [int(seed)]
        near = np.asarray(tree.query_ball_point(reps.points[seed], p.leaf), dtype=np.int64)
        near = near[~assigned[near]]
        near = near[np.abs(cc.cell_key[near] - cc.cell_key[seed]).max(axis=1) <= 1]
        dist = np.linalg.norm(reps.points[near] - reps.points[seed], axis=1)
        for j in near[np.lexsort((near, dist))]:
            if np.any(np.linalg.norm(reps.points[members] - reps.points[j], axis=1) >= p.leaf):
                continue
            similar = reps.normals[members] @ reps.normals[j] > cos_limit
            if not p.joins_everything and not similar.all():
                continue
            members.append(int(j))
            assigned[j] = True
        groups.append(np.sort(np.asarray(members, dtype=np.int64)))
    return sorted(groups, key=lambda g: int(g[0]))


@typechecked
def filter_neighbor_pairs(cc: ClusteredCloud, p: SubsampleParams) -> OrientedPointCloud:
    """Merge near-duplicate representatives (close and similarly oriented) of adjacent voxels.

    A merged group spans less than a leaf and mixes no normals further apart than the
    cluster angle.
    """
    reps = cc.cloud
    if not p.merge_neighbor_clusters or len(reps) < 2:
        return reps

    points, normals = [], []
    for idx in _merge_groups(cc, p):
        w = cc.weight[idx].astype(np.float64)
        points.append((reps.points[idx] * w[:, None]).sum(axis=0) / w.sum())
        total = (reps.normals[idx] * w[:, None]).sum(axis=0)
        norm = np.linalg.norm(total)
        normals.append(total / norm if norm > 0 else reps.normals[idx[np.argmax(w)]])

    logger.debug(
        "neighbour filtering merged %d representatives into %d", len(reps), len(points)
    )
    return OrientedPointCloud(np.asarray(points), np.asarray(normals))


@typechecked
def preprocess_cloud(c: OrientedPointCloud, p: SubsampleParams) -> OrientedPointCloud:
    """subsample followed by filter_neighbor_pairs."""
    return filter_neighbor_pairs(subsample(c, p), p)
