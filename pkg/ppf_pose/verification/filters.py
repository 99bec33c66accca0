# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Post-refinement filters: depth consistency and silhouette/edge overlap."""

import numpy as np
from typeguard import typechecked

from ppf_pose.matching import PoseHypothesis

from .camera import CameraIntrinsics, DepthImage
from .observation import Observation, depth_edges, dilate, silhouette
from .params import VerifyParams
from .render import RenderModel, Rendering, render_depth


def scene_edge_map(depth: DepthImage, jump: float, dilation: int) -> np.ndarray:
    """Depth discontinuities above `jump`, grown by `dilation` pixels."""
    return dilate(depth_edges(depth.depth, jump), dilation)


def nonconsistent_fraction(
    rendering: Rendering, scene: DepthImage, margin: float
) -> float | None:
    """Share of measured mask pixels where the model sits in front of what the sensor saw.

    None when no mask pixel has a measurement.
    """
    measured = rendering.mask & scene.valid
    total = int(measured.sum())
    if total == 0:
        return None
    rendered = rendering.depth.depth[measured]
    bad = rendered < scene.depth[measured] - margin
    return float(bad.sum()) / total


def edge_overlap_rate(rendering: Rendering, edges: np.ndarray) -> float | None:
    """Share of silhouette pixels lying on the edge map; None for an empty silhouette."""
    outline = silhouette(rendering.mask)
    total = int(outline.sum())
    if total == 0:
        return None
    return float((outline & edges).sum()) / total


def passes_consistency(rendering: Rendering, obs: Observation, p: VerifyParams) -> bool:
    fraction = nonconsistent_fraction(rendering, obs.depth, p.occlusion_margin)
    return fraction is not None and fraction <= p.nonconsistent_max


def passes_edges(rendering: Rendering, obs: Observation, p: VerifyParams) -> bool:
    rate = edge_overlap_rate(rendering, obs.edge_map(p.edge_depth_jump, p.edge_dilation))
    return rate is not None and rate >= p.edge_overlap_min


@typechecked
def consistency_filter(
    h: PoseHypothesis,
    scene_depth: DepthImage,
    cam: CameraIntrinsics,
    model: RenderModel,
    p: VerifyParams,
) -> bool:
    """Keep `h` unless too much of it floats in front of measured scene depth."""
    obs = Observation(scene_depth, cam)
    return passes_consistency(render_depth(model, h.pose, cam), obs, p)


@typechecked
def edge_overlap_filter(
    h: PoseHypothesis,
    scene_depth: DepthImage,
    cam: CameraIntrinsics,
    model: RenderModel,
    p: VerifyParams,
) -> bool:
    """Keep `h` when enough of its silhouette runs along scene depth edges."""
    obs = Observation(scene_depth, cam)
    return passes_edges(render_depth(model, h.pose, cam), obs, p)
