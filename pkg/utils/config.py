"""Environment lookups."""

import logging
import os

logger = logging.getLogger(__name__)

THREADS_ENV = "KM_LAB_THREADS"


def thread_limit() -> int:
    """Return the worker cap from KM_LAB_THREADS, falling back to 1."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        return 1
    return max(1, value)
