# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from .features import (
    PPF,
    PPFError,
    PPFKey,
    QuantizationParams,
    compute_ppf,
    compute_ppf_batch,
    discretize,
    discretize_batch,
    neighbor_key_batch,
    neighbor_keys,
    neighbor_keys_full,
    pack_key,
    pack_keys,
    unpack_key,
    unpack_keys,
)
from .frames import (
    alpha_angle,
    alpha_angles,
    intermediate_frame,
    intermediate_frames,
    pose_from_correspondence,
)
from .ppfm import deserialize_table, load_table, save_table, serialize_table
from .table import ModelTable, build_model_table, pair_records

__all__ = [
    "PPF",
    "PPFError",
    "PPFKey",
    "ModelTable",
    "QuantizationParams",
    "alpha_angle",
    "alpha_angles",
    "build_model_table",
    "compute_ppf",
    "compute_ppf_batch",
    "deserialize_table",
    "discretize",
    "discretize_batch",
    "intermediate_frame",
    "intermediate_frames",
    "load_table",
    "neighbor_key_batch",
    "neighbor_keys",
    "neighbor_keys_full",
    "pack_key",
    "pack_keys",
    "pair_records",
    "pose_from_correspondence",
    "save_table",
    "serialize_table",
    "unpack_key",
    "unpack_keys",
]
