# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""16-bit PNG depth images and key-value intrinsics text."""

import logging
import re
from os import PathLike
from pathlib import Path
from typing import TypedDict

import cv2
import numpy as np
from typeguard import TypeCheckError, check_type, typechecked

from ppf_pose.verification import CameraIntrinsics, DepthImage

logger = logging.getLogger(__name__)

DEFAULT_DEPTH_SCALE = 0.1

_RAW_MAX = np.iinfo(np.uint16).max
_LINE = re.compile(r"^\s*([A-Za-z_]\w*)\s*(?:[:=]\s*|\s+)(\S+)\s*$")


class DepthFormatError(ValueError):
    pass


class IntrinsicsError(ValueError):
    pass


class IntrinsicsPayload(TypedDict):
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int


# ------------------------------------------------------------------------------------------------------
# Depth
# ------------------------------------------------------------------------------------------------------


def read_depth_png(path: str | PathLike) -> np.ndarray:
    """Raw uint16 counts of a single-channel 16-bit image."""
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise DepthFormatError(f"cannot read depth image {path}")
    if raw.ndim != 2:
        raise DepthFormatError(f"{path} has {raw.shape[2]} channels, expected one")
    if raw.dtype != np.uint16:
        raise DepthFormatError(f"{path} is {raw.dtype}, expected 16-bit depth")
    return raw


def write_depth_png(path: str | PathLike, raw: np.ndarray) -> None:
    if raw.dtype != np.uint16 or raw.ndim != 2:
        raise DepthFormatError("depth PNGs hold a 2-D uint16 array")
    if not cv2.imwrite(str(path), raw):
        raise DepthFormatError(f"cannot write depth image {path}")


def depth_to_raw(depth: DepthImage, depth_scale: float = DEFAULT_DEPTH_SCALE) -> np.ndarray:
    raw = np.rint(depth.depth / depth_scale)
    if raw.max(initial=0) > _RAW_MAX:
        raise DepthFormatError(
            f"depth {depth.depth.max():.1f} mm does not fit 16 bits at scale {depth_scale}"
        )
    return raw.astype(np.uint16)


def raw_to_depth(raw: np.ndarray, depth_scale: float = DEFAULT_DEPTH_SCALE) -> DepthImage:
    if not depth_scale > 0:
        raise DepthFormatError(f"depth_scale must be > 0, got {depth_scale}")
    return DepthImage(raw.astype(np.float64) * depth_scale)


def save_depth(
    path: str | PathLike, depth: DepthImage, depth_scale: float = DEFAULT_DEPTH_SCALE
) -> None:
    write_depth_png(path, depth_to_raw(depth, depth_scale))


# ------------------------------------------------------------------------------------------------------
# Intrinsics
# ------------------------------------------------------------------------------------------------------


def parse_intrinsics(text: str) -> CameraIntrinsics:
    """Accepts `key: value`, `key = value` or `key value` lines and `#` comments."""
    values: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        match = _LINE.match(line)
        if match is None:
            raise IntrinsicsError(f"line {number}: cannot parse {line.strip()!r}")
        values[match.group(1).lower()] = match.group(2)

    missing = [k for k in IntrinsicsPayload.__annotations__ if k not in values]
    if missing:
        raise IntrinsicsError(f"missing intrinsics keys: {', '.join(missing)}")
    try:
        payload = {k: float(values[k]) for k in ("fx", "fy", "cx", "cy")}
        for k in ("width", "height"):
            size = float(values[k])
            payload[k] = int(size) if size.is_integer() else size
        check_type(payload, IntrinsicsPayload)
        return CameraIntrinsics(**payload)
    except (ValueError, TypeCheckError) as e:
        raise IntrinsicsError(f"invalid intrinsics. Error: {e}") from None


def format_intrinsics(cam: CameraIntrinsics) -> str:
    return "".join(f"{k}: {getattr(cam, k)!r}\n" for k in IntrinsicsPayload.__annotations__)


@typechecked
def load_intrinsics(path: str | PathLike) -> CameraIntrinsics:
    return parse_intrinsics(Path(path).read_text())


def save_intrinsics(path: str | PathLike, cam: CameraIntrinsics) -> None:
    Path(path).write_text(format_intrinsics(cam))


@typechecked
def load_depth(
    path: str | PathLike,
    depth_scale: float,
    intrinsics_path: str | PathLike,
) -> tuple[DepthImage, CameraIntrinsics]:
    """Depth in mm (raw counts times `depth_scale`) and the camera that took it."""
    cam = load_intrinsics(intrinsics_path)
    depth = raw_to_depth(read_depth_png(path), depth_scale)
    if not depth.matches(cam):
        raise DepthFormatError(
            f"{path} is {depth.width}x{depth.height} but intrinsics say {cam.width}x{cam.height}"
        )
    logger.debug("loaded %s: %d measured pixels", path, int(depth.valid.sum()))
    return depth, cam
