"""
Analysis Routes - baseline and evaluate subcommands

    baseline --data runs/toy --method qr --k 2 --r 2
    baseline --data runs/toy --method bayes-dopt --k 2 --sigma 0.02
    evaluate --data runs/toy --selection 0,1 --gamma 0.05 --eps 0.5
"""

import os
from typing import Literal, Optional

from pydantic import Field

from secsel.controllers import baseline_controller, evaluate_controller, manifold_controller
from secsel.routes.common import GlobalOptions, RunConfig, build_config, parse_indices
from secsel.utils.dataset_io import read_dataset, write_measurements


# ============================================================================
# Pydantic Schemas
# ============================================================================


class BaselineConfig(RunConfig):
    data: str
    method: Literal["qr", "bayes-dopt"]
    k: int = Field(ge=1)
    sigma: float = Field(default=0.02, gt=0)
    r: Optional[int] = Field(default=None, ge=1)


class EvaluateConfig(RunConfig):
    data: str
    selection: str
    gamma: float = Field(gt=0)
    eps: float = Field(gt=0)
    holdout: float = Field(default=0.2, gt=0, lt=1)


# ============================================================================
# Handlers
# ============================================================================


def baseline(args, options: GlobalOptions):
    config = build_config(BaselineConfig, args)
    ds = read_dataset(config.data)
    if config.method == "qr":
        # a square orthonormal mode matrix gives every row the same norm
        model = manifold_controller.weighted_pca(ds.points, r=config.r or config.k)
        result = {"method": "qr", "chosen": baseline_controller.pivoted_qr_select(model.modes, config.k)}
    else:
        model = manifold_controller.weighted_pca(ds.points, r=config.r)
        linear = baseline_controller.linear_model_from_pca(ds, model, config.sigma)
        result = {"method": "bayes-dopt", **baseline_controller.greedy_bayes_dopt(linear, config.k).model_dump()}
    return "baseline", result, config


def evaluate(args, options: GlobalOptions):
    config = build_config(EvaluateConfig, args)
    ds = read_dataset(config.data)
    selection = parse_indices(config.selection)
    report = evaluate_controller.selection_report(
        ds, selection, config.gamma, config.eps, holdout=config.holdout, seed=options.seed
    )
    measurements_dir = options.output_dir or config.data
    os.makedirs(measurements_dir, exist_ok=True)
    write_measurements(ds, selection, os.path.join(measurements_dir, "measurements.csv"))
    return "evaluate", report, config


# ============================================================================
# Registration
# ============================================================================


def register(subparsers) -> None:
    parser = subparsers.add_parser("baseline", help="linear selection baselines on PCA modes")
    parser.add_argument("--data", required=True)
    parser.add_argument("--method", required=True, choices=["qr", "bayes-dopt"])
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--sigma", type=float, default=0.02, help="sensor noise standard deviation (bayes-dopt)")
    parser.add_argument("--r", type=int, help="number of PCA modes; K for qr and all for bayes-dopt by default")
    parser.set_defaults(handler=baseline)

    parser = subparsers.add_parser("evaluate", help="diagnostics of a sensor selection")
    parser.add_argument("--data", required=True)
    parser.add_argument("--selection", required=True, help="comma-separated sensor indices")
    parser.add_argument("--gamma", type=float, required=True)
    parser.add_argument("--eps", type=float, required=True)
    parser.add_argument("--holdout", type=float, default=0.2)
    parser.set_defaults(handler=evaluate)
