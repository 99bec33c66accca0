# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

import dataclasses
import json
from typing import Any

import numpy

from ppf_pose.geometry import RigidTransform
from ppf_pose.matching import PoseHypothesis

from . import serializer


def to_json(obj: Any, indent: int | None = None) -> str:
    return json.dumps(obj, skipkeys=True, cls=PoseJSONEncoder, indent=indent)


class PoseJSONEncoder(json.JSONEncoder):
    def default(self, o: Any) -> Any:
        match o:
            case numpy.integer():
                return serializer.dump_numpy_integer(o)
            case numpy.floating():
                return serializer.dump_numpy_floating(o)
            case numpy.bool_():
                return serializer.dump_numpy_bool(o)
            case numpy.ndarray():
                return serializer.dump_numpy_ndarray(o)
            case RigidTransform():
                return serializer.dump_rigid_transform(o)
            case PoseHypothesis():
                return serializer.dump_pose_hypothesis(o)
            case _ if dataclasses.is_dataclass(o) and not isinstance(o, type):
                return serializer.dump_dataclass(o)
            case _ if type(o).__name__ == "dict_keys":
                return serializer.dump_dict_keys(o)
            case _:
                return json.JSONEncoder.default(self, o)
