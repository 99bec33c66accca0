# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Seeded synthetic depth scenes with exact ground truth."""

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from typeguard import typechecked

from ppf_pose.geometry import RigidTransform, random_rigid_transform
from ppf_pose.verification import (
    CameraIntrinsics,
    DepthImage,
    RenderModel,
    Rendering,
    render_depth,
)

from .primitives import box_mesh, plane_mesh, sphere_mesh

logger = logging.getLogger(__name__)

DISTRACTOR_KINDS = ("box", "sphere", "plane")


class SceneSpecError(ValueError):
    pass


@dataclass(frozen=True)
class Distractor:
    """A clutter primitive. `size` is the side (box), radius (sphere) or extent (plane)."""

    kind: str
    size: float | tuple[float, ...]
    pose: RigidTransform

    def __post_init__(self) -> None:
        if self.kind not in DISTRACTOR_KINDS:
            raise SceneSpecError(f"unknown distractor kind {self.kind!r}")

    def render_model(self) -> RenderModel:
        if self.kind == "box":
            mesh = box_mesh(self.size)
        elif self.kind == "sphere":
            mesh = sphere_mesh(float(self.size))
        else:
            w, h = (self.size, self.size) if np.isscalar(self.size) else self.size
            mesh = plane_mesh(w, h)
        return RenderModel(mesh.cloud, 1.0, mesh)


@dataclass(frozen=True)
class SceneSpec:
    model_id: str
    pose: RigidTransform
    cam: CameraIntrinsics
    distractors: tuple[Distractor, ...] = ()
    noise_sigma: float = 0.0
    dropout: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.noise_sigma < 0:
            raise SceneSpecError("noise_sigma must be >= 0")
        if not 0 <= self.dropout < 1:
            raise SceneSpecError("dropout must be in [0, 1)")


@dataclass(frozen=True, eq=False)
class SceneLayers:
    """The noiseless object and clutter renderings that make up a scene."""

    target: Rendering
    clutter: list[Rendering] = field(default_factory=list)

    def composite(self) -> np.ndarray:
        zbuf = np.where(self.target.mask, self.target.depth.depth, np.inf)
        for r in self.clutter:
            zbuf = np.minimum(zbuf, np.where(r.mask, r.depth.depth, np.inf))
        return np.where(np.isfinite(zbuf), zbuf, 0.0)

    @property
    def visible(self) -> np.ndarray:
        """Target pixels not hidden behind clutter."""
        depth = self.composite()
        return self.target.mask & (depth == self.target.depth.depth)


def render_layers(spec: SceneSpec, model: RenderModel) -> SceneLayers:
    target = render_depth(model, spec.pose, spec.cam)
    if target.empty:
        raise SceneSpecError(f"object {spec.model_id!r} is entirely outside the camera frustum")
    clutter = [render_depth(d.render_model(), d.pose, spec.cam) for d in spec.distractors]
    return SceneLayers(target, clutter)


@typechecked
def generate_scene(spec: SceneSpec, model: RenderModel) -> tuple[DepthImage, RigidTransform]:
    """Z-buffer composite of the object and clutter, then noise, then dropout."""
    depth = render_layers(spec, model).composite()
    rng = np.random.default_rng(spec.seed)
    measured = depth > 0
    if spec.noise_sigma > 0:
        noise = rng.normal(0.0, spec.noise_sigma, depth.shape)
        depth = np.where(measured, np.maximum(depth + noise, 0.0), 0.0)
    if spec.dropout > 0:
        depth = np.where(rng.random(depth.shape) < spec.dropout, 0.0, depth)
    return DepthImage(depth), spec.pose


def background_wall(spec: SceneSpec, model: RenderModel, gap: float | None = None) -> Distractor:
    """A fronto-parallel plane behind the object large enough to fill the image."""
    gap = model.diameter if gap is None else gap
    z = float(spec.pose.translation[2]) + gap
    extent = 2.0 * z * max(spec.cam.width / spec.cam.fx, spec.cam.height / spec.cam.fy)
    pose = RigidTransform(np.eye(3), np.array([0.0, 0.0, z]))
    return Distractor("plane", (extent, extent), pose)


def _occluded_share(spec: SceneSpec, model: RenderModel) -> float:
    layers = render_layers(spec, model)
    return 1.0 - layers.visible.sum() / layers.target.mask.sum()


def random_scene_spec(
    rng: np.random.Generator,
    model: RenderModel,
    cam: CameraIntrinsics,
    model_id: str = "",
    distance: tuple[float, float] = (500.0, 800.0),
    noise_sigma: float = 0.0,
    dropout: float = 0.0,
    wall: bool = False,
    occluder: bool = False,
    max_occlusion: float = 0.3,
) -> SceneSpec:
    """A random pose whose centre projects into the middle half of the image.

    The optional occluder is a box in front of the object, shrunk until it
    hides at most `max_occlusion` of the object's pixels.
    """
    z = rng.uniform(*distance)
    u = rng.uniform(0.25, 0.75) * cam.width
    v = rng.uniform(0.25, 0.75) * cam.height
    center = np.array([(u - cam.cx) * z / cam.fx, (v - cam.cy) * z / cam.fy, z])
    rotation = random_rigid_transform(rng, max_translation=0.0).rotation
    spec = SceneSpec(
        model_id,
        RigidTransform(rotation, center),
        cam,
        noise_sigma=noise_sigma,
        dropout=dropout,
        seed=int(rng.integers(2**31)),
    )
    clutter: list[Distractor] = []
    if wall:
        clutter.append(background_wall(spec, model))
    if occluder:
        d = model.diameter
        angle = rng.uniform(0, 2 * np.pi)
        offset = 0.5 * d * np.array([np.cos(angle), np.sin(angle), 0.0])
        offset[2] = -d
        size = 0.5 * d
        while True:
            box = Distractor("box", size, RigidTransform(np.eye(3), center + offset))
            candidate = replace(spec, distractors=(*clutter, box))
            if _occluded_share(candidate, model) <= max_occlusion:
                clutter.append(box)
                break
            size *= 0.8
    spec = replace(spec, distractors=tuple(clutter))
    logger.debug("random scene %r at depth %.1f with %d distractors", model_id, z, len(clutter))
    return spec
