# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""View-dependent re-scoring: how much of the rendered hypothesis the sensor confirms."""

import logging
from dataclasses import replace

import numpy as np
from typeguard import typechecked

from ppf_pose.config import ordered_map
from ppf_pose.matching import PoseHypothesis, Status, score_order, vote_order

from .camera import CameraIntrinsics, DepthImage
from .observation import Observation
from .params import VerifyParams
from .render import RenderModel, Rendering, render_depth

logger = logging.getLogger(__name__)


def fit_score(rendering: Rendering, scene: DepthImage, fit_thresh: float) -> float:
    """Fraction of measured mask pixels whose rendered depth is within `fit_thresh`."""
    measured = rendering.mask & scene.valid
    total = int(measured.sum())
    if total == 0:
        return 0.0
    diff = np.abs(rendering.depth.depth[measured] - scene.depth[measured])
    return float((diff < fit_thresh).sum()) / total


def _score(h: PoseHypothesis, obs: Observation, model: RenderModel, p: VerifyParams) -> float:
    return fit_score(render_depth(model, h.pose, obs.cam), obs.depth, p.fit_thresh)


@typechecked
def rescore(
    h: PoseHypothesis,
    scene_depth: DepthImage,
    cam: CameraIntrinsics,
    model: RenderModel,
    p: VerifyParams,
) -> float:
    p.require_resolved()
    return _score(h, Observation(scene_depth, cam), model, p)


def rescore_all(
    hyps: list[PoseHypothesis],
    obs: Observation,
    model: RenderModel,
    p: VerifyParams,
    status: Status = Status.RESCORED,
    workers: int | None = None,
) -> list[PoseHypothesis]:
    """Score every hypothesis and order by (score desc, votes desc, scene_ref asc)."""
    scores = ordered_map(lambda h: _score(h, obs, model, p), hyps, workers)
    scored = [replace(h, score=s, status=status) for h, s in zip(hyps, scores)]
    return sorted(scored, key=score_order)


@typechecked
def rescore_hypotheses(
    hyps: list[PoseHypothesis],
    scene_depth: DepthImage,
    cam: CameraIntrinsics,
    model: RenderModel,
    p: VerifyParams,
    workers: int | None = None,
) -> list[PoseHypothesis]:
    """Re-score the `rescore_top` most voted hypotheses and reorder them by fit."""
    p.require_resolved()
    top = sorted(hyps, key=vote_order)[: p.rescore_top]
    out = rescore_all(top, Observation(scene_depth, cam), model, p, workers=workers)
    logger.debug("re-scored %d of %d hypotheses", len(top), len(hyps))
    return out
