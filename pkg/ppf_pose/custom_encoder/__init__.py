# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

from .json_encoder import PoseJSONEncoder, to_json
from .serializer import dump_rigid_transform, load_rigid_transform

__all__ = ["PoseJSONEncoder", "dump_rigid_transform", "load_rigid_transform", "to_json"]
