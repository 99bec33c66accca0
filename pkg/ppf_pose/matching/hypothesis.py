# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from dataclasses import dataclass
from enum import Enum

from ppf_pose.geometry import RigidTransform


class Status(str, Enum):
    RAW = "raw"
    CLUSTERED = "clustered"
    RESCORED = "rescored"
    REFINED = "refined"
    REJECTED_CONSISTENCY = "rejected_consistency"
    REJECTED_EDGE = "rejected_edge"
    ACCEPTED = "accepted"


@dataclass(frozen=True)
class PoseHypothesis:
    """A model-to-scene pose with its evidence.

    `consistent` and `edges_ok` stay None until the corresponding filter ran.
    """

    pose: RigidTransform
    votes: int
    score: float = 0.0
    scene_ref: int = -1
    status: Status = Status.RAW
    low_support: bool = False
    consistent: bool | None = None
    edges_ok: bool | None = None

    def __post_init__(self) -> None:
        if self.votes < 0:
            raise ValueError(f"votes must be >= 0, got {self.votes}")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must be in [0, 1], got {self.score}")


def vote_order(h: PoseHypothesis) -> tuple[int, int]:
    return -h.votes, h.scene_ref


def score_order(h: PoseHypothesis) -> tuple[float, int, int]:
    return -h.score, -h.votes, h.scene_ref
