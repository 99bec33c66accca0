# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

# PipelineConfig lives in ppf_pose.config.pipeline; it depends on every stage
# package, which in turn use the worker pool from here.
from .concurrency import chunk_ranges, ordered_map
from .env import PPF_LOG_LEVEL, PPF_WORKERS

__all__ = ["PPF_LOG_LEVEL", "PPF_WORKERS", "chunk_ranges", "ordered_map"]
