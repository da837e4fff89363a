"""
Selection Routes - select, bisect-l and bounds subcommands

    select --data runs/toy --objective dd --gamma 0.3 --budget 2
    select --data runs/torus-phi --objective amp --lipschitz 10 --cover --secants base:100
    bisect-l --data runs/toy --budget 2 --l-lo 1 --l-hi 100
    bounds pairs --d 1 --eps 0.1 --l 3 --m-sensors 10 --p 0.05
"""

from typing import Literal, Optional

from pydantic import Field, model_validator

from secsel.controllers import greedy_controller, sampling_controller
from secsel.exceptions import InvalidArgumentError
from secsel.models.objective import ObjectiveSpec
from secsel.routes.common import GlobalOptions, RunConfig, build_config, build_secants
from secsel.utils.dataset_io import read_dataset

PAIR_CONVENTION = "unordered pairs i < i'; sums over ordered pairs are exactly twice these values"


# ============================================================================
# Pydantic Schemas
# ============================================================================


class SelectConfig(RunConfig):
    data: str
    objective: Literal["dd", "sep", "amp"]
    gamma: Optional[float] = Field(default=None, gt=0)
    eps: Optional[float] = Field(default=None, gt=0)
    lipschitz: Optional[float] = Field(default=None, gt=0)
    budget: Optional[int] = Field(default=None, ge=1)
    cover: bool = False
    secants: str = "all"
    accelerated: bool = True

    @model_validator(mode="after")
    def _budget_or_cover(self) -> "SelectConfig":
        if self.cover == (self.budget is not None):
            raise ValueError("give exactly one of --budget or --cover")
        return self


class BisectConfig(RunConfig):
    data: str
    budget: int = Field(ge=1)
    l_lo: float = Field(gt=0)
    l_hi: float = Field(gt=0)
    tol: float = Field(default=1e-2, gt=0)
    secants: str = "all"
    accelerated: bool = True


class BoundsConfig(RunConfig):
    formula: Literal["pairs", "cover", "base"]
    d: Optional[float] = Field(default=None, gt=0)
    data: Optional[str] = None
    eps: Optional[float] = Field(default=None, gt=0)
    l: Optional[int] = Field(default=None, ge=1)
    m_sensors: Optional[int] = Field(default=None, ge=1)
    p: float = Field(default=0.05, gt=0, lt=1)
    delta: Optional[float] = Field(default=None, gt=0, lt=1)


# ============================================================================
# Handlers
# ============================================================================


def select(args, options: GlobalOptions):
    config = build_config(SelectConfig, args)
    spec = ObjectiveSpec(
        variant=config.objective, gamma=config.gamma, eps=config.eps, lipschitz=config.lipschitz
    )
    ds = read_dataset(config.data)
    secants = build_secants(ds, config.secants, options.seed)

    if config.cover:
        trace, bound = greedy_controller.greedy_set_cover(spec, ds, secants, config.accelerated)
        extra = {"kappa": bound.kappa, "bounds": bound.model_dump()}
    else:
        if config.budget > ds.n_sensors:
            raise InvalidArgumentError(f"budget must be in 1..{ds.n_sensors}, got {config.budget}")
        trace = greedy_controller.greedy_maximize(spec, ds, secants, config.budget, config.accelerated)
        extra = {"nemhauser": greedy_controller.nemhauser_curve(config.budget, len(trace.chosen) or 1).tolist()}

    result = trace.model_dump()
    result.update(params=spec.params(), secant_kind=secants.kind, n_secants=len(secants), pair_convention=PAIR_CONVENTION)
    result.update(extra)
    return "select", result, config


def bisect_l(args, options: GlobalOptions):
    config = build_config(BisectConfig, args)
    ds = read_dataset(config.data)
    secants = build_secants(ds, config.secants, options.seed)
    search = greedy_controller.bisection_min_lipschitz(
        ds, secants, config.budget, config.l_lo, config.l_hi, config.tol, config.accelerated
    )
    return "bisect-l", search, config


def bounds(args, options: GlobalOptions):
    config = build_config(BoundsConfig, args)
    diameter, empirical, n_sensors = config.d, False, config.m_sensors
    if config.data:
        ds = read_dataset(config.data)
        n_sensors = n_sensors or ds.n_sensors
        if diameter is None:
            diameter, empirical = sampling_controller.estimate_target_diameter(ds), True

    def need(value, flag: str):
        if value is None:
            raise InvalidArgumentError(f"bounds {config.formula} needs {flag}")
        return value

    if config.formula == "pairs":
        report = sampling_controller.pairs_sample_size(
            need(diameter, "--d or --data"), need(config.eps, "--eps"), need(config.l, "--l"),
            need(n_sensors, "--m-sensors or --data"), config.p, empirical,
        )
    elif config.formula == "cover":
        report = sampling_controller.cover_sample_size(
            need(diameter, "--d or --data"), need(config.eps, "--eps"),
            need(n_sensors, "--m-sensors or --data"), config.p, empirical,
        )
    else:
        report = sampling_controller.base_sample_size(
            need(config.delta, "--delta"), need(n_sensors, "--m-sensors or --data"), config.p
        )
    return "bounds", report, config


# ============================================================================
# Registration
# ============================================================================


def _add_accelerated(parser) -> None:
    parser.add_argument("--accelerated", dest="accelerated", action="store_true", default=True,
                        help="lazy greedy (default)")
    parser.add_argument("--naive", dest="accelerated", action="store_false", help="evaluate every candidate each step")


def register(subparsers) -> None:
    parser = subparsers.add_parser("select", help="greedy sensor selection")
    parser.add_argument("--data", required=True)
    parser.add_argument("--objective", required=True, choices=["dd", "sep", "amp"])
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--eps", type=float)
    parser.add_argument("--lipschitz", type=float)
    parser.add_argument("--budget", type=int)
    parser.add_argument("--cover", action="store_true", help="run until f(S) = f(M)")
    parser.add_argument("--secants", default="all", help="all, pairs:M or base:M")
    _add_accelerated(parser)
    parser.set_defaults(handler=select)

    parser = subparsers.add_parser("bisect-l", help="smallest amplification tolerance within a budget")
    parser.add_argument("--data", required=True)
    parser.add_argument("--budget", type=int, required=True)
    parser.add_argument("--l-lo", type=float, required=True)
    parser.add_argument("--l-hi", type=float, required=True)
    parser.add_argument("--tol", type=float, default=1e-2)
    parser.add_argument("--secants", default="all")
    _add_accelerated(parser)
    parser.set_defaults(handler=bisect_l)

    parser = subparsers.add_parser("bounds", help="sample sizes for down-sampled objectives")
    parser.add_argument("formula", choices=["pairs", "cover", "base"])
    parser.add_argument("--d", type=float, help="target diameter")
    parser.add_argument("--data", help="estimate the diameter and M from a dataset")
    parser.add_argument("--eps", type=float)
    parser.add_argument("--l", type=int, help="largest sensor set size")
    parser.add_argument("--m-sensors", type=int)
    parser.add_argument("--p", type=float, default=0.05)
    parser.add_argument("--delta", type=float)
    parser.set_defaults(handler=bounds)
