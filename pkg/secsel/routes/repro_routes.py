"""
Repro Routes - repro torus / repro toy

    repro toy
    repro torus --samples 2000 --r 100
"""

from typing import Literal

from pydantic import Field

from secsel.controllers import repro_controller
from secsel.routes.common import GlobalOptions, RunConfig, build_config


class ReproConfig(RunConfig):
    recipe: Literal["torus", "toy"]
    samples: int = Field(default=0, ge=0)
    k: int = Field(default=10, ge=1)
    r: int = Field(default=100, ge=1)
    base_points: int = Field(default=100, ge=1)
    sigma: float = Field(default=0.02, gt=0)
    accelerated: bool = True


def repro(args, options: GlobalOptions):
    config = build_config(ReproConfig, args)
    if config.recipe == "torus":
        report = repro_controller.repro_torus(
            n_samples=config.samples or 2000,
            k_neighbors=config.k,
            rank=config.r,
            base_points=config.base_points,
            seed=options.seed,
            accelerated=config.accelerated,
        )
    else:
        report = repro_controller.repro_toy(
            n_samples=config.samples or 1000,
            sigma=config.sigma,
            seed=options.seed,
            accelerated=config.accelerated,
        )
    return f"repro-{config.recipe}", report, config


def register(subparsers) -> None:
    parser = subparsers.add_parser("repro", help="one-shot reproduction recipes")
    parser.add_argument("recipe", choices=["torus", "toy"])
    parser.add_argument("--samples", type=int, default=0, help="number of states; recipe default if 0")
    parser.add_argument("--k", type=int, default=10, help="Isomap neighbors (torus)")
    parser.add_argument("--r", type=int, default=100, help="Isomap coordinates (torus)")
    parser.add_argument("--base-points", type=int, default=100, help="base points for the amplification scan (torus)")
    parser.add_argument("--sigma", type=float, default=0.02, help="D-optimal sensor noise (toy)")
    parser.add_argument("--naive", dest="accelerated", action="store_false", help="disable lazy greedy")
    parser.set_defaults(handler=repro, accelerated=True)
