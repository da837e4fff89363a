"""
Dataset Routes - generate, isomap and pca subcommands

    generate toy   --n 4 --samples 1000 --scales 1 1 2 2 --out runs/toy
    generate torus --samples 2000 --out runs/torus
    isomap --data runs/torus --k 10 --r 100 --assign all --register-sensors --out runs/torus-phi
    pca    --data runs/toy --r 4 --weights 1,1,0.5,0.5
"""

import os
from typing import List, Literal, Optional

from pydantic import Field

from secsel.controllers import dataset_controller, manifold_controller
from secsel.routes.common import GlobalOptions, RunConfig, build_config, parse_indices, parse_weights
from secsel.utils.dataset_io import read_dataset, write_dataset, write_embedding, write_matrix


# ============================================================================
# Pydantic Schemas
# ============================================================================


class GenerateConfig(RunConfig):
    kind: Literal["toy", "torus"]
    n: int = Field(default=4, ge=2)
    samples: int = Field(default=1000, ge=2)
    scales: Optional[List[float]] = None
    noise: float = Field(default=0.0, ge=0)
    smooth: Optional[int] = Field(default=None, ge=1)
    net_radius: Optional[float] = Field(default=None, gt=0)
    out: str


class IsomapConfig(RunConfig):
    data: str
    k: int = Field(default=10, ge=1)
    r: int = Field(default=2, ge=1)
    assign: Optional[str] = None
    register_sensors: bool = False
    out: Optional[str] = None


class PCAConfig(RunConfig):
    data: str
    r: Optional[int] = Field(default=None, ge=1)
    weights: Optional[str] = None


# ============================================================================
# Handlers
# ============================================================================


def generate(args, options: GlobalOptions):
    config = build_config(GenerateConfig, args)
    if config.kind == "toy":
        ds = dataset_controller.generate_toy_circle(
            config.n, config.samples, scales=config.scales or 1.0, seed=options.seed
        )
    else:
        ds = dataset_controller.generate_torus(config.samples, seed=options.seed)

    result = {}
    if config.net_radius is not None:
        net = dataset_controller.build_epsilon_net(ds.points, config.net_radius)
        ds = ds.subset(net.cover_indices)
        result["net"] = {"radius": net.radius, "size": net.size, "max_distance": net.max_distance}
    if config.noise > 0:
        ds = dataset_controller.add_gaussian_noise(ds, config.noise, seed=options.seed + 1)
    if config.smooth is not None:
        ds = dataset_controller.smooth_targets(ds, config.smooth)

    write_dataset(ds, config.out)
    result.update(
        name=ds.name,
        n_states=ds.n_states,
        n_sensors=ds.n_sensors,
        target_dim=ds.target_dim,
        directory=config.out,
    )
    return "generate", result, config


def isomap(args, options: GlobalOptions):
    config = build_config(IsomapConfig, args)
    ds = read_dataset(config.data)
    emb = manifold_controller.isomap(ds.points, k_neighbors=config.k, r=config.r, seed=options.seed)

    embedding_dir = config.out or options.output_dir or config.data
    write_embedding(emb, embedding_dir)
    if config.assign is not None:
        columns = list(range(emb.rank)) if config.assign == "all" else parse_indices(config.assign)
        ds = manifold_controller.assign_targets_from_embedding(
            ds, emb, columns, register_sensors=config.register_sensors
        )
        write_dataset(ds, config.out or config.data)

    result = {
        "k_neighbors": emb.k_neighbors,
        "requested_rank": emb.requested_rank,
        "rank": emb.rank,
        "truncated": emb.truncated,
        "embedding_dir": embedding_dir,
        "eigenvalues": emb.eigenvalues.tolist(),
    }
    return "isomap", result, config


def pca(args, options: GlobalOptions):
    config = build_config(PCAConfig, args)
    ds = read_dataset(config.data)
    weights = None if config.weights is None else parse_weights(config.weights)
    model = manifold_controller.weighted_pca(ds.points, weights=weights, r=config.r)
    if options.output_dir:
        os.makedirs(options.output_dir, exist_ok=True)
        write_matrix(
            os.path.join(options.output_dir, "modes.csv"), model.modes, [f"mode{k + 1}" for k in range(model.rank)]
        )
    result = {
        "rank": model.rank,
        "singular_values": model.singular_values.tolist(),
        "variance_fraction_bound": [
            manifold_controller.variance_fraction_bound(model, d) for d in range(1, model.rank + 1)
        ],
    }
    return "pca", result, config


# ============================================================================
# Registration
# ============================================================================


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="write a synthetic dataset directory")
    parser.add_argument("kind", choices=["toy", "torus"])
    parser.add_argument("--n", type=int, default=4, help="toy state dimension (even)")
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--scales", type=float, nargs="+", help="toy coordinate scales")
    parser.add_argument("--noise", type=float, default=0.0, help="Gaussian noise sigma on sensors and targets")
    parser.add_argument("--smooth", type=int, help="replace targets by k-nearest-neighbor means")
    parser.add_argument("--net-radius", type=float, help="keep only a farthest-point net of this radius")
    parser.add_argument("--out", required=True, help="dataset directory to write")
    parser.set_defaults(handler=generate)

    parser = subparsers.add_parser("isomap", help="Isomap eigen-coordinates of a dataset")
    parser.add_argument("--data", required=True)
    parser.add_argument("--k", type=int, default=10, help="neighbors per node")
    parser.add_argument("--r", type=int, default=2, help="coordinates to compute")
    parser.add_argument("--assign", help="'all' or comma-separated columns to use as targets")
    parser.add_argument("--register-sensors", action="store_true", help="also use the assigned columns as sensors")
    parser.add_argument(
        "--out", help="directory for embedding files and the updated dataset; --output-dir, then --data by default"
    )
    parser.set_defaults(handler=isomap)

    parser = subparsers.add_parser("pca", help="principal components of the states")
    parser.add_argument("--data", required=True)
    parser.add_argument("--r", type=int)
    parser.add_argument("--weights", help="comma-separated positive weight per state coordinate; ones by default")
    parser.set_defaults(handler=pca)
