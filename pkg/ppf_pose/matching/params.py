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
class MatchParams:
    """Local matching and pose clustering settings.

    `cluster_trans_thresh` defaults to a tenth of the model diameter and is filled
    in by `resolve`. `noise_fraction` overrides the table's value when set.
    """

    scene_ref_stride: int = 5
    n_alpha_bins: int = 30
    cluster_trans_thresh: float | None = None
    cluster_rot_thresh: float = math.radians(12)
    max_hypotheses_out: int = 500
    refine_alpha: bool = True
    duplicate_suppression: bool = True
    noise_fraction: float | None = None

    def __post_init__(self) -> None:
        if self.scene_ref_stride < 1:
            raise ValueError("scene_ref_stride must be >= 1")
        if self.n_alpha_bins < 2:
            raise ValueError("n_alpha_bins must be >= 2")
        if self.cluster_trans_thresh is not None and not self.cluster_trans_thresh > 0:
            raise ValueError("cluster_trans_thresh must be > 0")
        if not self.cluster_rot_thresh > 0:
            raise ValueError("cluster_rot_thresh must be > 0")
        if self.max_hypotheses_out < 1:
            raise ValueError("max_hypotheses_out must be >= 1")
        if self.noise_fraction is not None and not 0 <= self.noise_fraction < 0.5:
            raise ValueError("noise_fraction must be in [0, 0.5)")

    @property
    def alpha_step(self) -> float:
        return 2 * math.pi / self.n_alpha_bins

    def resolve(self, diameter: float) -> "MatchParams":
        if self.cluster_trans_thresh is not None:
            return self
        return replace(self, cluster_trans_thresh=0.1 * diameter)
