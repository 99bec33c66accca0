# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Scene directories: `<id>.png` depth, `<id>.cam.txt` intrinsics, optional `<id>.gt.json`."""

import json
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import TypedDict

from typeguard import TypeCheckError, check_type

from ppf_pose.custom_encoder import dump_rigid_transform, load_rigid_transform, to_json
from ppf_pose.geometry import RigidTransform
from ppf_pose.verification import CameraIntrinsics, DepthImage

from .depth import DEFAULT_DEPTH_SCALE, load_depth, save_depth, save_intrinsics


class GroundTruthError(ValueError):
    pass


class GroundTruthPayload(TypedDict):
    scene_id: str
    obj_id: str
    dataset: str
    R: list[float]
    t: list[float]


@dataclass(frozen=True)
class GroundTruth:
    scene_id: str
    obj_id: str
    dataset: str
    pose: RigidTransform


@dataclass(frozen=True, eq=False)
class SceneRecord:
    scene_id: str
    depth: DepthImage
    cam: CameraIntrinsics
    gt: GroundTruth | None


def parse_ground_truth(text: str) -> GroundTruth:
    try:
        payload = json.loads(text)
        check_type(payload, GroundTruthPayload)
        if len(payload["R"]) != 9 or len(payload["t"]) != 3:
            raise GroundTruthError("ground truth needs 9 rotation and 3 translation values")
        pose = load_rigid_transform(payload)
    except json.JSONDecodeError as e:
        raise GroundTruthError(f"malformed ground truth. Error: {e}") from None
    except TypeCheckError as e:
        raise GroundTruthError(f"unexpected ground truth format. Error: {e}") from None
    except GroundTruthError:
        raise
    except ValueError as e:
        raise GroundTruthError(f"invalid ground-truth pose. Error: {e}") from None
    return GroundTruth(payload["scene_id"], payload["obj_id"], payload["dataset"], pose)


def format_ground_truth(gt: GroundTruth) -> str:
    payload = {"scene_id": gt.scene_id, "obj_id": gt.obj_id, "dataset": gt.dataset}
    return to_json({**payload, **dump_rigid_transform(gt.pose)}, indent=2) + "\n"


def scene_paths(directory: str | PathLike, scene_id: str) -> tuple[Path, Path, Path]:
    root = Path(directory)
    return root / f"{scene_id}.png", root / f"{scene_id}.cam.txt", root / f"{scene_id}.gt.json"


def list_scenes(directory: str | PathLike) -> list[str]:
    """Ids of every `<id>.png` that has intrinsics next to it, sorted."""
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"scene directory {root} does not exist")
    return sorted(p.stem for p in root.glob("*.png") if (root / f"{p.stem}.cam.txt").is_file())


def write_scene(
    directory: str | PathLike,
    scene_id: str,
    depth: DepthImage,
    cam: CameraIntrinsics,
    gt: GroundTruth | None = None,
    depth_scale: float = DEFAULT_DEPTH_SCALE,
) -> None:
    Path(directory).mkdir(parents=True, exist_ok=True)
    png, cam_txt, gt_json = scene_paths(directory, scene_id)
    save_depth(png, depth, depth_scale)
    save_intrinsics(cam_txt, cam)
    if gt is not None:
        gt_json.write_text(format_ground_truth(gt))


def load_scene(
    directory: str | PathLike, scene_id: str, depth_scale: float = DEFAULT_DEPTH_SCALE
) -> SceneRecord:
    png, cam_txt, gt_json = scene_paths(directory, scene_id)
    depth, cam = load_depth(png, depth_scale, cam_txt)
    gt = parse_ground_truth(gt_json.read_text()) if gt_json.is_file() else None
    return SceneRecord(scene_id, depth, cam, gt)
