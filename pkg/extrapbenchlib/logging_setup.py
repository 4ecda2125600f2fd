"""Root logger configuration for the ``bench`` CLI.

:func:`setup_logging` installs

* a ``RotatingFileHandler`` writing ``extrapbench.log`` in the directory
  from :func:`~extrapbenchlib.config.get_app_dir`, and
* a stderr ``StreamHandler``.

The level comes from ``BENCH_LOG_LEVEL`` (``DEBUG`` … ``CRITICAL``, or
``NONE`` to disable logging) and defaults to ``WARNING`` so that CSV
output on stdout stays clean. The library modules only create loggers.
"""

from __future__ import annotations

import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from .config import get_app_dir

LOG_FILENAME = "extrapbench.log"
LEVEL_ENV = "BENCH_LOG_LEVEL"
DISABLED = logging.CRITICAL + 10
_MAX_BYTES = 5 * 1024 * 1024
_BACKUP_COUNT = 3
_FORMAT = "%(asctime)s.%(msecs)03d [%(levelname)-5s] %(name)s: %(message)s"
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_initialized = False


def setup_logging(level: int | None = None) -> None:
    """Configure the root logger once; later calls are no-ops.

    *level* overrides ``BENCH_LOG_LEVEL`` when given.
    """
    global _initialized  # noqa: PLW0603  # pylint: disable=global-statement
    if _initialized:
        return
    _initialized = True

    if level is None:
        level = level_from_env()
    if level >= DISABLED:
        return

    root = logging.getLogger()
    root.setLevel(level)
    formatter = logging.Formatter(_FORMAT, datefmt=_DATE_FORMAT)

    try:
        log_dir = get_app_dir()
        os.makedirs(log_dir, exist_ok=True)
        fh = RotatingFileHandler(
            os.path.join(log_dir, LOG_FILENAME),
            maxBytes=_MAX_BYTES,
            backupCount=_BACKUP_COUNT,
            encoding="utf-8",
        )
        fh.setFormatter(formatter)
        root.addHandler(fh)
    except OSError:
        # read-only home: stderr only
        pass

    if sys.stderr is not None:
        sh = logging.StreamHandler(sys.stderr)
        sh.setFormatter(formatter)
        root.addHandler(sh)


def level_from_env(default: int = logging.WARNING) -> int:
    """Parse ``BENCH_LOG_LEVEL``; unknown names fall back to *default*."""
    raw = os.environ.get(LEVEL_ENV, "").strip().upper()
    if raw == "NONE":
        return DISABLED
    if raw:
        numeric = getattr(logging, raw, None)
        if isinstance(numeric, int):
            return numeric
    return default
