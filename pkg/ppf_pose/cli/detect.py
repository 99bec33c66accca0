# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Training and detection glue from files to stages and back."""

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field, replace

import numpy as np
from typeguard import typechecked

from ppf_pose.config.pipeline import PipelineConfig
from ppf_pose.custom_encoder import dump_rigid_transform
from ppf_pose.files import DetectionRecord, empty_record
from ppf_pose.geometry import ObjectModel, OrientedPointCloud, estimate_normals, sample_surface
from ppf_pose.geometry.normals import DEFAULT_K
from ppf_pose.matching import PoseHypothesis, Status, cluster_hypotheses, match_scene
from ppf_pose.model import ModelTable, build_model_table
from ppf_pose.preprocess import SubsampleParams, preprocess_cloud
from ppf_pose.verification import (
    CameraIntrinsics,
    DepthImage,
    Observation,
    RenderModel,
    backproject,
    verify_hypotheses,
)

logger = logging.getLogger(__name__)

STAGES = ("scene", "matching", "clustering", "verification")


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """The accepted hypothesis (None when everything was filtered) and how we got there."""

    hypothesis: PoseHypothesis | None
    candidates: list[PoseHypothesis] = field(default_factory=list)
    scene_points: int = 0
    raw_hypotheses: int = 0
    clusters: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def detected(self) -> bool:
        return self.hypothesis is not None

    def rejected(self, status: Status) -> int:
        return sum(h.status is status for h in self.candidates)


class _Stopwatch:
    def __init__(self) -> None:
        self.timings: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = (time.perf_counter() - start) * 1000.0


# ------------------------------------------------------------------------------------------------------
# Training
# ------------------------------------------------------------------------------------------------------


def training_cloud(model: ObjectModel, leaf: float, seed: int) -> OrientedPointCloud:
    """Meshes are sampled at a quarter leaf so every voxel sees its surface; clouds pass through."""
    if not model.has_faces:
        return model.cloud
    return sample_surface(model, leaf / 4.0, np.random.default_rng(seed))


@typechecked
def train_model(
    model: ObjectModel, config: PipelineConfig, workers: int | None = None
) -> ModelTable:
    leaf = config.leaf_for(model.cloud.diameter)
    cloud = training_cloud(model, leaf, config.seed)
    return build_model_table(
        cloud, config.subsample_params(leaf), config.quant, config.min_pair_angle, workers
    )


def render_model(table: ModelTable, mesh: ObjectModel | None = None) -> RenderModel:
    return RenderModel(table.model, table.leaf, mesh)


def config_for_table(config: PipelineConfig, table: ModelTable) -> PipelineConfig:
    """The config with the table's leaf and quantization, all thresholds resolved."""
    return replace(config.resolve(table.leaf, table.model.diameter), quant=table.quant)


# ------------------------------------------------------------------------------------------------------
# Detection
# ------------------------------------------------------------------------------------------------------


@typechecked
def prepare_scene(
    depth: DepthImage, cam: CameraIntrinsics, sp: SubsampleParams, normal_k: int = DEFAULT_K
) -> OrientedPointCloud:
    """Back-project, estimate normals facing the camera and subsample with the model's leaf."""
    points, _ = backproject(depth, cam)
    if len(points) < normal_k:
        logger.info("scene has %d measured pixels, too few for normals", len(points))
        return OrientedPointCloud(np.zeros((0, 3)), np.zeros((0, 3)))
    oriented = estimate_normals(points, normal_k)
    if len(oriented) == 0:
        return oriented
    return preprocess_cloud(oriented, sp)


@typechecked
def run_detection(
    table: ModelTable,
    depth: DepthImage,
    cam: CameraIntrinsics,
    config: PipelineConfig,
    model: RenderModel | None = None,
    workers: int | None = None,
) -> DetectionResult:
    """Match, cluster and verify; `config` must come from `config_for_table`."""
    model = render_model(table) if model is None else model
    clock = _Stopwatch()
    with clock.stage("scene"):
        scene = prepare_scene(depth, cam, config.subsample_params(), config.normal_k)
    with clock.stage("matching"):
        hyps = match_scene(table, scene, config.match, workers)
    with clock.stage("clustering"):
        clustered = cluster_hypotheses(hyps, config.match)
    with clock.stage("verification"):
        judged = (
            verify_hypotheses(clustered, Observation(depth, cam), model, config.verify, workers)
            if clustered
            else []
        )
    best = next((h for h in judged if h.status is Status.ACCEPTED), None)
    result = DetectionResult(best, judged, len(scene), len(hyps), len(clustered), clock.timings)
    logger.info(
        "detection: %d scene points, %d hypotheses, %d clusters, %s in %.0f ms",
        len(scene),
        len(hyps),
        len(clustered),
        "accepted" if best is not None else "nothing accepted",
        sum(clock.timings.values()),
    )
    return result


def detection_record(
    result: DetectionResult, scene_id: str, obj_id: str, dataset: str = ""
) -> DetectionRecord:
    record = empty_record(scene_id, obj_id, dataset)
    record["timings"] = {name: result.timings[name] for name in STAGES if name in result.timings}
    h = result.hypothesis
    if h is None:
        return record
    pose = dump_rigid_transform(h.pose)
    record.update(
        detected=True,
        R=pose["R"],
        t=pose["t"],
        score=h.score,
        votes=h.votes,
        consistent=h.consistent,
        edges_ok=h.edges_ok,
    )
    return record
