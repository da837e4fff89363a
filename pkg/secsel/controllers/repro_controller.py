"""
Repro Controller - One-Shot Recipes

repro_torus: torus -> Isomap eigen-coordinates (used as both targets and
candidate sensors) -> detectable-difference greedy over a gamma scan ->
amplification cover on base-point secants over an L scan -> separation
covers at a fixed gamma over an eps scan. The expected outcome is the harmonic pair phi1, phi2 plus the first
coordinate that varies with the second angle.

repro_toy: the scaled toy circle where the high-variance coordinates fool
the linear baselines; the undetectable pair counts show what they miss.
"""

import logging
from typing import Sequence

from secsel.controllers import (
    baseline_controller,
    dataset_controller,
    evaluate_controller,
    greedy_controller,
    manifold_controller,
    objective_controller,
    sampling_controller,
)
from secsel.models.objective import ObjectiveSpec
from secsel.models.reports import ScanEntry, ToyReproReport, TorusReproReport
from secsel.models.trace import CoverBound, GreedyTrace

logger = logging.getLogger(__name__)

TORUS_GAMMAS = (0.05, 0.1, 0.5, 1.0, 2.0, 3.0)
TORUS_LIPSCHITZ = (8.0, 10.0, 15.0, 20.0)
TORUS_SEPARATION_GAMMA = 0.5
TORUS_SEPARATION_EPS = (0.5, 2.0, 3.0, 4.0, 5.0)


def _entry(trace: GreedyTrace, threshold: float, bound: CoverBound = None, eps: float = None) -> ScanEntry:
    return ScanEntry(
        variant=trace.objective.variant,
        threshold=threshold,
        eps=eps,
        chosen=trace.chosen,
        values=trace.values,
        stopped_reason=trace.stopped_reason,
        kappa=None if bound is None else bound.kappa,
    )


def repro_torus(
    n_samples: int = 2000,
    k_neighbors: int = 10,
    rank: int = 100,
    gammas: Sequence[float] = TORUS_GAMMAS,
    lipschitz_values: Sequence[float] = TORUS_LIPSCHITZ,
    base_points: int = 100,
    separation_gamma: float = TORUS_SEPARATION_GAMMA,
    separation_eps: Sequence[float] = TORUS_SEPARATION_EPS,
    budget: int = 3,
    seed: int = 0,
    accelerated: bool = True,
) -> TorusReproReport:
    ds = dataset_controller.generate_torus(n_samples, seed=seed)
    emb = manifold_controller.isomap(ds.points, k_neighbors=k_neighbors, r=rank, seed=seed)
    ds = manifold_controller.assign_targets_from_embedding(ds, emb, range(emb.rank), register_sensors=True)
    secants = objective_controller.build_secants_all(ds)

    detectable = []
    for gamma in gammas:
        spec = ObjectiveSpec.detectable_difference(gamma)
        trace = greedy_controller.greedy_maximize(spec, ds, secants, min(budget, ds.n_sensors), accelerated)
        detectable.append(_entry(trace, gamma))
        logger.info("torus dd gamma=%g: %s", gamma, trace.chosen)

    base = sampling_controller.sample_base_points(ds, base_points, seed=seed)
    amplification = []
    for lipschitz in lipschitz_values:
        spec = ObjectiveSpec.amplification(lipschitz)
        trace, bound = greedy_controller.greedy_set_cover(spec, ds, base, accelerated)
        amplification.append(_entry(trace, lipschitz, bound))
        logger.info("torus amp L=%g: %s", lipschitz, trace.chosen)

    separation = []
    for eps in separation_eps:
        spec = ObjectiveSpec.separation(separation_gamma, eps)
        trace, bound = greedy_controller.greedy_set_cover(spec, ds, secants, accelerated)
        separation.append(_entry(trace, separation_gamma, bound, eps))
        logger.info("torus sep gamma=%g eps=%g: %d sensors", separation_gamma, eps, len(trace.chosen))

    return TorusReproReport(
        n_samples=n_samples,
        k_neighbors=k_neighbors,
        rank=emb.rank,
        truncated=emb.truncated,
        leading_eigenvalues=emb.eigenvalues[:10].tolist(),
        detectable_scan=detectable,
        amplification_scan=amplification,
        separation_scan=separation,
        base_points=base_points,
    )


def repro_toy(
    n_samples: int = 1000,
    scales: Sequence[float] = (1.0, 1.0, 2.0, 2.0),
    sigma: float = 0.02,
    gamma: float = 0.3,
    count_gamma: float = 0.05,
    count_eps: float = 0.5,
    seed: int = 0,
    accelerated: bool = True,
) -> ToyReproReport:
    """
    Pivoted QR (two leading PCA modes) and greedy Bayes D-optimal selection
    (full PCA model, noise sigma) against detectable-difference greedy, all
    with K = 2, plus undetectable pair counts for the injective pair {0, 1}
    and the high-variance pair {2, 3}.
    """
    ds = dataset_controller.generate_toy_circle(len(scales), n_samples, scales=scales, seed=seed)

    leading = manifold_controller.weighted_pca(ds.points, r=2)
    qr = baseline_controller.pivoted_qr_select(leading.modes, 2)

    full = manifold_controller.weighted_pca(ds.points)
    model = baseline_controller.linear_model_from_pca(ds, full, sigma)
    dopt = baseline_controller.greedy_bayes_dopt(model, 2, accelerated)

    secants = objective_controller.build_secants_all(ds)
    trace = greedy_controller.greedy_maximize(
        ObjectiveSpec.detectable_difference(gamma), ds, secants, 2, accelerated
    )
    counts = {
        ",".join(map(str, pair)): evaluate_controller.undetectable_pair_count(
            ds, secants, pair, count_gamma, count_eps
        )
        for pair in ([0, 1], [2, 3])
    }
    logger.info("toy: qr %s, d-opt %s, dd %s", qr, dopt.chosen, trace.chosen)
    return ToyReproReport(
        scales=list(scales),
        n_samples=n_samples,
        qr=qr,
        bayes_dopt=dopt.chosen,
        detectable=_entry(trace, gamma),
        undetectable_pairs=counts,
    )
