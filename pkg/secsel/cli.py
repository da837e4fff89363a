"""
Command-Line Entry Point

This module wires the subcommands together, the way the application object
of a web service includes its routers:

- builds one argparse parser with global options (--seed, --threads,
  --output-dir, -v) accepted before or after the subcommand
- asks every routes module to register its subcommands
- runs the chosen handler, prints its JSON report on stdout and, when an
  output directory is configured, writes the same report to <name>.json

Exit codes: 0 success, 1 invalid arguments, 2 runtime errors (numerical
failures of the linear algebra included). Failures print one line on stderr:

    error: <code>: <detail>
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ValidationError
from scipy.sparse.linalg import ArpackError

from secsel import __version__
from secsel.config import configure_logging, resolve_output_dir, resolve_threads
from secsel.exceptions import InvalidArgumentError, SecselError
from secsel.routes import analysis_routes, dataset_routes, repro_routes, selection_routes
from secsel.routes.common import GlobalOptions
from secsel.utils.dataset_io import write_report
from secsel.utils.parallel import configure_threads

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting on bad usage."""

    def error(self, message):
        raise InvalidArgumentError(message)


class _Subcommands:
    """Adds the shared global options to every subcommand parser."""

    def __init__(self, action, parents):
        self._action = action
        self._parents = parents

    def add_parser(self, name, **kwargs):
        return self._action.add_parser(name, parents=self._parents, **kwargs)


def _global_options(parser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--seed", type=int, default=default(0), help="random seed")
    parser.add_argument("--threads", type=int, default=default(None), help="worker threads (SECSEL_THREADS)")
    parser.add_argument("--output-dir", default=default(None), help="also write reports here (SECSEL_OUTPUT_DIR)")
    parser.add_argument("-v", "--verbose", action="count", default=default(0), help="-v info, -vv debug")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="secsel", description="Secant-based sensor and feature selection")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)

    shared = ArgumentParser(add_help=False)
    _global_options(shared, suppress=True)

    action = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    subcommands = _Subcommands(action, [shared])
    for routes in (dataset_routes, selection_routes, analysis_routes, repro_routes):
        routes.register(subcommands)
    return parser


def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    where = ".".join(str(part) for part in first["loc"])
    return f"{where}: {first['msg']}" if where else first["msg"]


def _render(result, options: GlobalOptions, config: BaseModel) -> dict:
    body = result.model_dump() if isinstance(result, BaseModel) else dict(result)
    body["config"] = {**options.model_dump(), **config.model_dump()}
    return body


def _fail(error: SecselError) -> int:
    print(f"error: {error.code}: {error.detail}", file=sys.stderr)
    return error.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Example:
        main(["bounds", "pairs", "--d", "1", "--eps", "0.1", "--l", "3", "--m-sensors", "10", "--p", "0.05"])
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        options = GlobalOptions(
            seed=args.seed,
            threads=resolve_threads(args.threads),
            output_dir=resolve_output_dir(args.output_dir),
        )
        configure_threads(options.threads)
        name, result, config = args.handler(args, options)
        report = _render(result, options, config)
        write_report(report, options.output_dir, name)
    except ValidationError as e:
        return _fail(InvalidArgumentError(_describe(e)))
    except SecselError as e:
        return _fail(e)
    except (np.linalg.LinAlgError, ArpackError, FloatingPointError) as e:
        return _fail(SecselError(f"numerical failure: {e}"))
    except OSError as e:
        return _fail(SecselError(str(e)))

    print(json.dumps(report, indent=2, allow_nan=True))
    logger.debug("%s finished", name)
    return 0
