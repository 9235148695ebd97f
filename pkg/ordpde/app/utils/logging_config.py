"""Logging bootstrap for `python -m ordpde` runs and the test suite.

`init_logging` configures the root logger once per process from ORDPDE_LOG_* variables.
Solver runs log through module loggers under `ordpde.app`; the δ-search in
`ordpde.app.solver.convergence` writes one JSON event per attempt (shrink, term_accepted,
term_exhausted), which is the bulk of the INFO output on fine grids. Set
ORDPDE_LOG_EVENTS=0 to keep those events out of a run without lowering the root level.
"""
from __future__ import annotations
import logging, os
from typing import Iterable
DEFAULT_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
# Plotting and the worker pool log at INFO/DEBUG during every `solve --svg`
NOISY_LOGGERS: Iterable[str] = (
    "matplotlib",
    "matplotlib.font_manager",
    "PIL",
    "asyncio",
)
EVENT_LOGGER = "ordpde.app.solver.convergence"
_INITIALIZED = False

def init_logging(force: bool = False) -> None:
    """Set up root logging for a solver run.

    Reads ORDPDE_LOG_LEVEL (default INFO), ORDPDE_LOG_FORMAT, ORDPDE_LOG_VERBOSE=1 (keep the
    plotting and asyncio loggers at their own level) and ORDPDE_LOG_EVENTS=0 (silence the
    per-attempt δ-search events). Existing handlers, such as pytest's, only get the level.
    """
    global _INITIALIZED
    if _INITIALIZED and not force:
        return
    level_name = os.getenv("ORDPDE_LOG_LEVEL", "INFO").upper().strip()
    level = getattr(logging, level_name, logging.INFO)
    log_format = os.getenv("ORDPDE_LOG_FORMAT", DEFAULT_FORMAT)
    verbose = os.getenv("ORDPDE_LOG_VERBOSE", "0") == "1"
    events = os.getenv("ORDPDE_LOG_EVENTS", "1") != "0"
    root = logging.getLogger()
    if force or not root.handlers:
        logging.basicConfig(level=level, format=log_format, force=force)
    else:
        root.setLevel(level)
    if not verbose and level > logging.DEBUG:
        for name in NOISY_LOGGERS:
            logging.getLogger(name).setLevel(logging.WARNING)
    if not events:
        logging.getLogger(EVENT_LOGGER).setLevel(logging.WARNING)
    _INITIALIZED = True
__all__ = ["init_logging", "EVENT_LOGGER"]
