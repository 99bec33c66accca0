# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class VerifyParams:
    """Re-scoring, refinement and filter thresholds (mm unless noted).

    `fit_thresh` and `icp_reject_dist` default to 2 and 2.5 leaf sizes and are
    filled in by `resolve`.
    """

    rescore_top: int = 500
    icp_top: int = 200
    fit_thresh: float | None = None
    icp_iters: int = 15
    icp_reject_dist: float | None = None
    icp_reject_angle: float = math.radians(45)
    icp_min_angle_step: float = math.radians(0.01)
    icp_min_trans_step: float = 0.01
    occlusion_margin: float = 10.0
    nonconsistent_max: float = 0.1
    edge_depth_jump: float = 40.0
    edge_dilation: int = 2
    edge_overlap_min: float = 0.3

    def __post_init__(self) -> None:
        for name in ("rescore_top", "icp_top", "icp_iters", "edge_dilation"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name in ("fit_thresh", "icp_reject_dist"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be > 0")
        for name in (
            "icp_reject_angle",
            "icp_min_angle_step",
            "icp_min_trans_step",
            "occlusion_margin",
            "edge_depth_jump",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("nonconsistent_max", "edge_overlap_min"):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f"{name} must be in (0, 1)")

    @property
    def resolved(self) -> bool:
        return self.fit_thresh is not None and self.icp_reject_dist is not None

    def resolve(self, leaf: float) -> "VerifyParams":
        return replace(
            self,
            fit_thresh=2.0 * leaf if self.fit_thresh is None else self.fit_thresh,
            icp_reject_dist=2.5 * leaf if self.icp_reject_dist is None else self.icp_reject_dist,
        )

    def require_resolved(self) -> None:
        if not self.resolved:
            raise ValueError("VerifyParams are unresolved; call resolve(leaf) first")
