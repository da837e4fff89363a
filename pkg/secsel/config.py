"""
Runtime Configuration Module

This module collects the settings that can be changed without touching code.
Every setting is read once from the environment, with a sensible default, so
the same command behaves the same way on a laptop and on a batch machine.

Key concepts:
- SECSEL_THREADS: size of the worker pool used for secant sweeps and Dijkstra
                  runs when --threads is not given on the command line
- SECSEL_OUTPUT_DIR: directory where reports are also written as files
- SECSEL_LOG_LEVEL: logging level used when no -v flag is given
"""

import logging
import os
from typing import Optional

from secsel.exceptions import InvalidArgumentError

# Worker count fallback for --threads
# Empty or unset means "use every available core"
THREADS = os.getenv("SECSEL_THREADS", "")

# Directory for report files; empty means stdout only
OUTPUT_DIR = os.getenv("SECSEL_OUTPUT_DIR", "")

# Logging level name understood by the logging module
LOG_LEVEL = os.getenv("SECSEL_LOG_LEVEL", "WARNING")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def resolve_threads(cli_value: Optional[int] = None) -> int:
    """
    Work out how many worker threads a run may use.

    The command-line value wins, then SECSEL_THREADS, then the CPU count.

    Args:
        cli_value: value of --threads, or None when the flag was not given

    Returns:
        A worker count of at least 1

    Raises:
        InvalidArgumentError: if the chosen value is not a positive integer
    """
    if cli_value is not None:
        threads = cli_value
    elif THREADS.strip():
        try:
            threads = int(THREADS)
        except ValueError:
            raise InvalidArgumentError(f"SECSEL_THREADS must be an integer, got {THREADS!r}")
    else:
        threads = os.cpu_count() or 1

    if threads < 1:
        raise InvalidArgumentError(f"threads must be >= 1, got {threads}")
    return threads


def resolve_output_dir(cli_value: Optional[str] = None) -> Optional[str]:
    """Return the report directory from --output-dir or SECSEL_OUTPUT_DIR, or None."""
    if cli_value:
        return cli_value
    return OUTPUT_DIR or None


def configure_logging(verbosity: int = 0) -> None:
    """
    Install a single stderr handler on the root logger.

    verbosity 0 uses SECSEL_LOG_LEVEL, 1 means INFO and 2 or more means DEBUG.
    Calling it again replaces the previous handler instead of stacking them.
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, LOG_LEVEL.upper(), logging.WARNING)

    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_secsel", False):
            root.removeHandler(handler)

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._secsel = True
    root.addHandler(handler)
    root.setLevel(level)
