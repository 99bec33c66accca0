# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""The full set of pipeline knobs, as one JSON-serialisable object."""

import json
import math
from dataclasses import asdict, dataclass, field, replace
from os import PathLike
from pathlib import Path
from typing import Any, TypedDict

from typeguard import TypeCheckError, check_type

from ppf_pose.custom_encoder import to_json
from ppf_pose.evaluation import VSDParams
from ppf_pose.geometry.normals import DEFAULT_K
from ppf_pose.matching import MatchParams
from ppf_pose.model import QuantizationParams
from ppf_pose.preprocess import SubsampleParams
from ppf_pose.verification import VerifyParams


class ConfigError(ValueError):
    pass


class QuantPayload(TypedDict, total=False):
    d_max: float | None
    n_dist_bins: int
    n_angle_bins: int
    noise_fraction: float


class MatchPayload(TypedDict, total=False):
    scene_ref_stride: int
    n_alpha_bins: int
    cluster_trans_thresh: float | None
    cluster_rot_thresh: float
    max_hypotheses_out: int
    refine_alpha: bool
    duplicate_suppression: bool
    noise_fraction: float | None


class VerifyPayload(TypedDict, total=False):
    rescore_top: int
    icp_top: int
    fit_thresh: float | None
    icp_iters: int
    icp_reject_dist: float | None
    icp_reject_angle: float
    icp_min_angle_step: float
    icp_min_trans_step: float
    occlusion_margin: float
    nonconsistent_max: float
    edge_depth_jump: float
    edge_dilation: int
    edge_overlap_min: float


class VSDPayload(TypedDict, total=False):
    delta: float
    tau: float
    t: float


class ConfigPayload(TypedDict, total=False):
    leaf_frac: float
    leaf: float | None
    normal_cluster_angle: float
    merge_neighbor_clusters: bool
    normal_k: int
    min_pair_angle: float
    depth_scale: float
    seed: int
    quant: QuantPayload
    match: MatchPayload
    verify: VerifyPayload
    vsd: VSDPayload


_SECTIONS = {
    "quant": QuantizationParams,
    "match": MatchParams,
    "verify": VerifyParams,
    "vsd": VSDParams,
}


@dataclass(frozen=True)
class PipelineConfig:
    """Every stage's parameters plus the model-relative leaf.

    `leaf` is the absolute voxel size in mm; while it is None the leaf is
    `leaf_frac` of the model diameter. `resolve` fills in every
    model-dependent default so the result can be recorded and replayed.
    """

    leaf_frac: float = 0.05
    leaf: float | None = None
    normal_cluster_angle: float = math.pi / 6
    merge_neighbor_clusters: bool = True
    normal_k: int = DEFAULT_K
    min_pair_angle: float = 0.0
    depth_scale: float = 0.1
    seed: int = 0
    quant: QuantizationParams = field(default_factory=QuantizationParams)
    match: MatchParams = field(default_factory=MatchParams)
    verify: VerifyParams = field(default_factory=VerifyParams)
    vsd: VSDParams = field(default_factory=VSDParams)

    def __post_init__(self) -> None:
        if not 0 < self.leaf_frac < 1:
            raise ValueError(f"leaf_frac must be in (0, 1), got {self.leaf_frac}")
        if self.leaf is not None and not self.leaf > 0:
            raise ValueError(f"leaf must be > 0, got {self.leaf}")
        if not self.depth_scale > 0:
            raise ValueError(f"depth_scale must be > 0, got {self.depth_scale}")
        if self.normal_k < 3:
            raise ValueError(f"normal_k must be >= 3, got {self.normal_k}")
        if not 0 <= self.min_pair_angle < math.pi:
            raise ValueError("min_pair_angle must be in [0, pi)")
        # Borrow SubsampleParams' own checks on the angle.
        SubsampleParams(1.0, self.normal_cluster_angle, self.merge_neighbor_clusters)

    def leaf_for(self, diameter: float) -> float:
        return self.leaf if self.leaf is not None else self.leaf_frac * diameter

    def subsample_params(self, leaf: float | None = None) -> SubsampleParams:
        leaf = self.leaf if leaf is None else leaf
        if leaf is None:
            raise ConfigError("leaf is unresolved; pass one or call resolve first")
        return SubsampleParams(leaf, self.normal_cluster_angle, self.merge_neighbor_clusters)

    def resolve(self, leaf: float, diameter: float) -> "PipelineConfig":
        """Fix the absolute leaf and every leaf- or diameter-relative threshold."""
        return replace(
            self,
            leaf=leaf,
            match=self.match.resolve(diameter),
            verify=self.verify.resolve(leaf),
        )

    def with_overrides(self, **values: Any) -> "PipelineConfig":
        """Replace top-level fields; None means not given."""
        given = {k: v for k, v in values.items() if v is not None}
        try:
            return replace(self, **given)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid config override. Error: {e}") from None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "PipelineConfig":
        """Build from a possibly partial mapping; absent keys keep their defaults."""
        try:
            check_type(payload, ConfigPayload)
        except TypeCheckError as e:
            raise ConfigError(f"unexpected config format. Error: {e}") from None
        scalars = {k: v for k, v in payload.items() if k not in _SECTIONS}
        try:
            sections = {name: kind(**payload.get(name, {})) for name, kind in _SECTIONS.items()}
            return cls(**scalars, **sections)
        except ValueError as e:
            raise ConfigError(f"invalid config. Error: {e}") from None


def load_config(path: str | PathLike) -> PipelineConfig:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed config file {path}. Error: {e}") from None
    if not isinstance(payload, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return PipelineConfig.from_dict(payload)


def save_config(path: str | PathLike, config: PipelineConfig) -> None:
    Path(path).write_text(to_json(config.to_dict(), indent=2) + "\n")
