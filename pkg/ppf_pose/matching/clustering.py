# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Greedy pose clustering with vote-weighted averaging."""

import logging
from dataclasses import replace

import numpy as np
from scipy.spatial.transform import Rotation
from typeguard import typechecked

from ppf_pose.geometry import RigidTransform

from .hypothesis import PoseHypothesis, Status, vote_order
from .params import MatchParams

logger = logging.getLogger(__name__)


def weighted_quaternion_mean(quats: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Weighted mean of unit quaternions, all flipped into the first one's hemisphere."""
    q = np.asarray(quats, dtype=np.float64)
    signs = np.where(q @ q[0] < 0, -1.0, 1.0)
    mean = (q * (signs * np.asarray(weights, dtype=np.float64))[:, None]).sum(axis=0)
    return mean / np.linalg.norm(mean)


@typechecked
def cluster_hypotheses(hyps: list[PoseHypothesis], p: MatchParams) -> list[PoseHypothesis]:
    """Join each hypothesis to the first cluster whose seed is within both thresholds."""
    if p.cluster_trans_thresh is None:
        raise ValueError("cluster_trans_thresh is unresolved; call MatchParams.resolve first")
    if not hyps:
        return []

    ordered = sorted(hyps, key=vote_order)
    quats = np.array([h.pose.as_quaternion() for h in ordered])
    trans = np.array([h.pose.translation for h in ordered])
    half_cos = np.cos(p.cluster_rot_thresh / 2)

    seeds: list[int] = []
    members: list[list[int]] = []
    for i in range(len(ordered)):
        if seeds:
            near = np.linalg.norm(trans[seeds] - trans[i], axis=1) <= p.cluster_trans_thresh
            # geodesic angle <= thresh  <=>  |<q_seed, q>| >= cos(thresh / 2)
            close = np.abs(quats[seeds] @ quats[i]) >= half_cos
            hit = np.flatnonzero(near & close)
            if len(hit):
                members[hit[0]].append(i)
                continue
        seeds.append(i)
        members.append([i])

    clusters = []
    for seed, group in zip(seeds, members):
        # group[0] is the seed
        w = np.array([ordered[i].votes for i in group], dtype=np.float64)
        if w.sum() == 0:
            w = np.ones(len(group))
        quat = weighted_quaternion_mean(quats[group], w)
        translation = (trans[group] * w[:, None]).sum(axis=0) / w.sum()
        pose = RigidTransform(Rotation.from_quat(quat).as_matrix(), translation)
        clusters.append(
            replace(
                ordered[seed],
                pose=pose,
                votes=int(sum(ordered[i].votes for i in group)),
                status=Status.CLUSTERED,
            )
        )

    clusters.sort(key=vote_order)
    logger.info("clustering: %d hypotheses -> %d clusters", len(hyps), len(clusters))
    return clusters[: p.max_hypotheses_out]
