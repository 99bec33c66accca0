# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Re-score, refine, re-score again and filter; the best survivor is the detection."""

import logging
from dataclasses import replace

from typeguard import typechecked

from ppf_pose.config import ordered_map
from ppf_pose.matching import PoseHypothesis, Status, vote_order

from .camera import CameraIntrinsics, DepthImage
from .filters import passes_consistency, passes_edges
from .icp import refine_hypothesis
from .observation import Observation
from .params import VerifyParams
from .render import RenderModel, render_depth
from .rescore import rescore_all

logger = logging.getLogger(__name__)


def _judge(
    h: PoseHypothesis, obs: Observation, model: RenderModel, p: VerifyParams
) -> PoseHypothesis:
    rendering = render_depth(model, h.pose, obs.cam)
    if not passes_consistency(rendering, obs, p):
        return replace(h, consistent=False, status=Status.REJECTED_CONSISTENCY)
    if not passes_edges(rendering, obs, p):
        return replace(h, consistent=True, edges_ok=False, status=Status.REJECTED_EDGE)
    return replace(h, consistent=True, edges_ok=True, status=Status.ACCEPTED)


def verify_hypotheses(
    hyps: list[PoseHypothesis],
    obs: Observation,
    model: RenderModel,
    p: VerifyParams,
    workers: int | None = None,
) -> list[PoseHypothesis]:
    """Every refined hypothesis in final score order, each marked accepted or rejected."""
    p.require_resolved()
    # Fill the shared per-pixel maps before worker threads read them.
    _ = obs.points, obs.normals
    obs.edge_map(p.edge_depth_jump, p.edge_dilation)

    top = sorted(hyps, key=vote_order)[: p.rescore_top]
    rescored = rescore_all(top, obs, model, p, workers=workers)
    refined = ordered_map(
        lambda h: refine_hypothesis(h, obs, model, p), rescored[: p.icp_top], workers
    )
    refined = rescore_all(refined, obs, model, p, status=Status.REFINED, workers=workers)
    judged = ordered_map(lambda h: _judge(h, obs, model, p), refined, workers)
    logger.debug(
        "verified %d hypotheses: %d accepted",
        len(judged),
        sum(h.status is Status.ACCEPTED for h in judged),
    )
    return judged


@typechecked
def verify_pipeline(
    hyps: list[PoseHypothesis],
    scene_depth: DepthImage,
    cam: CameraIntrinsics,
    model: RenderModel,
    p: VerifyParams,
    workers: int | None = None,
) -> PoseHypothesis | None:
    """The highest-scoring hypothesis that survives both filters, or None."""
    if not hyps:
        return None
    judged = verify_hypotheses(hyps, Observation(scene_depth, cam), model, p, workers)
    return next((h for h in judged if h.status is Status.ACCEPTED), None)
