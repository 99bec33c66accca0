# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

import logging
import os

logger = logging.getLogger(__name__)


def parse_workers(raw: str | None) -> int:
    """A positive worker count; unset, non-numeric or non-positive values fall back to the CPUs."""
    fallback = os.cpu_count() or 1
    if raw is None or not raw.strip():
        return fallback
    try:
        workers = int(raw)
    except ValueError:
        workers = 0
    if workers < 1:
        logger.warning("ignoring PPF_WORKERS=%r, using %d workers", raw, fallback)
        return fallback
    return workers


IS_DEBUG = os.environ.get("PPF_DEBUG") == "1"

PPF_WORKERS = parse_workers(os.environ.get("PPF_WORKERS"))

if IS_DEBUG:
    PPF_LOG_LEVEL = "DEBUG"
else:
    PPF_LOG_LEVEL = os.environ.get("PPF_LOG_LEVEL", "WARNING").upper()
