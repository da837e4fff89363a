"""
Shared Route Helpers

Every subcommand handler has the signature

    handler(args, options) -> (report_name, result, config)

where ``options`` is the resolved GlobalOptions, ``result`` a pydantic model
or a plain dict, and ``config`` the pydantic RunConfig record built from the
parsed arguments. The CLI merges them into one JSON report.
"""

from typing import Optional, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from secsel.controllers import objective_controller, sampling_controller
from secsel.exceptions import InvalidArgumentError
from secsel.models.dataset import DataSet
from secsel.models.secants import SecantSet

ConfigT = TypeVar("ConfigT", bound=BaseModel)


# ============================================================================
# Pydantic Schemas
# ============================================================================


class GlobalOptions(BaseModel):
    """Options shared by every subcommand, after environment fallbacks."""

    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    threads: int = Field(default=1, ge=1)
    output_dir: Optional[str] = None


class RunConfig(BaseModel):
    """Base class of the per-command records: unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")


# ============================================================================
# Helpers
# ============================================================================


def build_config(model: Type[ConfigT], args) -> ConfigT:
    """Validate the parsed arguments that ``model`` declares."""
    values = {name: getattr(args, name) for name in model.model_fields if hasattr(args, name)}
    return model.model_validate(values)


def parse_indices(text: str) -> list:
    """'0,1,6' -> [0, 1, 6]."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidArgumentError(f"expected comma-separated integers, got {text!r}")


def build_secants(ds: DataSet, how: str, seed: int) -> SecantSet:
    """
    Secant set from a --secants value.

    all       every unordered pair
    pairs:M   M uniformly sampled pairs
    base:M    M base points joined to every state
    """
    if how == "all":
        return objective_controller.build_secants_all(ds)
    kind, _, count = how.partition(":")
    try:
        m = int(count)
    except ValueError:
        raise InvalidArgumentError(f"--secants must be all, pairs:M or base:M, got {how!r}")
    if kind == "pairs":
        return sampling_controller.sample_secant_pairs(ds, m, seed)
    if kind == "base":
        return sampling_controller.sample_base_points(ds, m, seed)
    raise InvalidArgumentError(f"--secants must be all, pairs:M or base:M, got {how!r}")


def parse_weights(text: str) -> np.ndarray:
    """'1,1,0.5' -> array([1.0, 1.0, 0.5])."""
    try:
        return np.array([float(part) for part in text.split(",") if part.strip()])
    except ValueError:
        raise InvalidArgumentError(f"expected comma-separated numbers, got {text!r}")
