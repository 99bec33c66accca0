# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Read-only access to BOP-style scene folders (`scene_camera.json`, `scene_gt.json`, `depth/`)."""

import json
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import TypedDict

from typeguard import TypeCheckError, check_type

from ppf_pose.custom_encoder import load_rigid_transform
from ppf_pose.geometry import RigidTransform
from ppf_pose.verification import CameraIntrinsics, DepthImage

from .depth import raw_to_depth, read_depth_png
from .scenes import GroundTruth, SceneRecord


class BopFormatError(ValueError):
    pass


class BopCamera(TypedDict):
    cam_K: list[float]
    depth_scale: float


class BopGroundTruth(TypedDict):
    cam_R_m2c: list[float]
    cam_t_m2c: list[float]
    obj_id: int


@dataclass(frozen=True, eq=False)
class BopImage:
    scene_id: str
    depth: DepthImage
    cam: CameraIntrinsics
    objects: list[tuple[str, RigidTransform]]

    def poses_of(self, obj_id: str) -> list[RigidTransform]:
        return [pose for oid, pose in self.objects if oid == obj_id]


def _read_json(path: Path, annotation: object) -> dict:
    try:
        payload = json.loads(path.read_text())
        check_type(payload, annotation)
    except FileNotFoundError:
        raise BopFormatError(f"missing {path.name} in {path.parent}") from None
    except json.JSONDecodeError as e:
        raise BopFormatError(f"malformed {path.name}. Error: {e}") from None
    except TypeCheckError as e:
        raise BopFormatError(f"unexpected {path.name} format. Error: {e}") from None
    return payload


def list_bop_images(scene_dir: str | PathLike) -> list[int]:
    cameras = _read_json(Path(scene_dir) / "scene_camera.json", dict[str, BopCamera])
    return sorted(int(k) for k in cameras)


def load_bop_scene(scene_dir: str | PathLike, im_id: int) -> BopImage:
    """Depth, camera and every annotated object pose of one image of a BOP scene folder."""
    root = Path(scene_dir)
    cameras = _read_json(root / "scene_camera.json", dict[str, BopCamera])
    gts = _read_json(root / "scene_gt.json", dict[str, list[BopGroundTruth]])
    key = str(im_id)
    if key not in cameras:
        raise BopFormatError(f"image {im_id} has no camera in {root}")

    camera = cameras[key]
    if len(camera["cam_K"]) != 9:
        raise BopFormatError(f"cam_K of image {im_id} needs 9 values")
    raw = read_depth_png(root / "depth" / f"{im_id:06d}.png")
    k = camera["cam_K"]
    try:
        cam = CameraIntrinsics(k[0], k[4], k[2], k[5], raw.shape[1], raw.shape[0])
        depth = raw_to_depth(raw, camera["depth_scale"])
        objects = [
            (str(g["obj_id"]), load_rigid_transform({"R": g["cam_R_m2c"], "t": g["cam_t_m2c"]}))
            for g in gts.get(key, [])
        ]
    except ValueError as e:
        raise BopFormatError(f"invalid image {im_id} in {root}. Error: {e}") from None
    return BopImage(f"{root.name}/{im_id:06d}", depth, cam, objects)


def bop_scene_record(scene_dir: str | PathLike, im_id: int, obj_id: str) -> SceneRecord:
    """One BOP image under its zero-padded image id; ground truth is the first `obj_id` instance."""
    image = load_bop_scene(scene_dir, im_id)
    poses = image.poses_of(obj_id)
    scene_id = f"{im_id:06d}"
    gt = GroundTruth(scene_id, obj_id, "bop", poses[0]) if poses else None
    return SceneRecord(scene_id, image.depth, image.cam, gt)
