"""
Evaluate Controller - What a Selection Actually Buys

Diagnostics run after sensors have been chosen:

- nn_reconstruct / linear_reconstruct: predict targets from measurements
- r_squared: coefficient of determination of a prediction
- undetectable_pair_count: secants with a real target gap but almost no
  measurement gap (the sampled picture of a self-intersection)
- empirical_lipschitz / noise_levels: data-driven inputs for the guarantees
- verify_separation_guarantee / verify_amplification_guarantee: check on
  fresh states what a cover condition on a net promises
- selection_report: the bundle written by the evaluate command

Lipschitz constants estimated from samples are lower bounds of the true
ones, so checks that use them are empirical only.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.linear_model import LinearRegression

from secsel.controllers.objective_controller import (
    build_secants_all,
    lipschitz_proxy,
    require_targets,
    selection_gap2,
)
from secsel.exceptions import InvalidArgumentError, UndefinedVarianceError
from secsel.models.dataset import DataSet
from secsel.models.reports import SelectionReport, SeparationReport
from secsel.models.secants import SecantSet
from secsel.models.trace import CoverBound
from secsel.utils.parallel import chunk_bounds, map_chunks

logger = logging.getLogger(__name__)

# Query rows handled per worker task in nearest-neighbor lookups
QUERY_CHUNK = 1024


def _query_matrix(train: DataSet, selection: Sequence[int], query: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    measured = train.measurements(selection)
    if measured.shape[1] == 0:
        raise InvalidArgumentError("reconstruction needs at least one selected sensor")
    query = np.asarray(query, dtype=float)
    if query.ndim == 1:
        query = query[:, None]
    if query.shape[1] != measured.shape[1]:
        raise InvalidArgumentError(
            f"query has {query.shape[1]} columns, selected sensors measure {measured.shape[1]}"
        )
    return measured, query


def nn_reconstruct(train: DataSet, selection: Sequence[int], query: np.ndarray) -> np.ndarray:
    """
    Predict each query's target as the target of the training state whose
    selected measurements are closest. Ties go to the lowest training index.
    """
    measured, query = _query_matrix(train, selection, query)

    def chunk(start: int, stop: int) -> np.ndarray:
        return np.argmin(cdist(query[start:stop], measured), axis=1)

    nearest = np.concatenate(map_chunks(chunk, chunk_bounds(query.shape[0], QUERY_CHUNK)))
    return train.targets[nearest]


def linear_reconstruct(train: DataSet, selection: Sequence[int], query: np.ndarray) -> np.ndarray:
    """Best affine least-squares map from the selected measurements to the targets."""
    measured, query = _query_matrix(train, selection, query)
    regression = LinearRegression().fit(measured, train.targets)
    return regression.predict(query)


def r_squared(pred: np.ndarray, truth: np.ndarray) -> float:
    """1 - sum ||pred - truth||^2 / sum ||truth - mean(truth)||^2."""
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if pred.shape != truth.shape:
        raise InvalidArgumentError(f"shape mismatch: {pred.shape} vs {truth.shape}")
    total = float(np.sum((truth - truth.mean(axis=0)) ** 2))
    if total == 0:
        raise UndefinedVarianceError("reference values have zero total variance")
    return 1.0 - float(np.sum((pred - truth) ** 2)) / total


def undetectable_pair_count(
    ds: DataSet, secants: SecantSet, selection: Sequence[int], gamma: float, eps: float
) -> int:
    """Secants with target gap >= eps whose measurement gap is below gamma."""
    if not (gamma > 0 and eps > 0):
        raise InvalidArgumentError("gamma and eps must be positive")
    require_targets(ds)
    m2 = selection_gap2(ds, secants, selection)
    return int(np.count_nonzero((secants.target_gap2 >= eps**2) & (m2 < gamma**2)))


def empirical_lipschitz(ds: DataSet, secants: SecantSet, selection: Sequence[int]) -> Tuple[float, float]:
    """
    Largest secant slopes of m_S and g with respect to the states.

    Returns (lip_m, lip_g); both are lower bounds on the true constants.
    """
    require_targets(ds)
    x2 = secants.gap2_of(ds.points)
    moving = x2 > 0
    if not np.any(moving):
        return 0.0, 0.0
    m2 = selection_gap2(ds, secants, selection)
    lip_m = float(np.sqrt(np.max(m2[moving] / x2[moving])))
    lip_g = float(np.sqrt(np.max(secants.target_gap2[moving] / x2[moving])))
    logger.info("empirical Lipschitz estimates (lower bounds): m %.4g, g %.4g", lip_m, lip_g)
    return lip_m, lip_g


def noise_levels(clean: DataSet, noisy: DataSet, selection: Sequence[int]) -> Tuple[float, float]:
    """
    (delta_u, delta_v): largest per-state noise norm on the selected
    measurements and on the targets.
    """
    clean_m = clean.measurements(selection)
    noisy_m = noisy.measurements(selection)
    if clean_m.shape != noisy_m.shape or clean.targets.shape != noisy.targets.shape:
        raise InvalidArgumentError("clean and noisy datasets do not line up")
    delta_u = float(np.max(np.linalg.norm(noisy_m - clean_m, axis=1))) if clean_m.shape[1] else 0.0
    delta_v = float(np.max(np.linalg.norm(noisy.targets - clean.targets, axis=1))) if clean.target_dim else 0.0
    return delta_u, delta_v


def noisy_separation_thresholds(
    gamma: float,
    eps: float,
    delta_u: float = 0.0,
    delta_v: float = 0.0,
    eps0: float = 0.0,
    lip_m: float = 0.0,
    lip_g: float = 0.0,
) -> Tuple[float, float]:
    """
    Thresholds that hold on noiseless states when (gamma, eps) separation
    holds on the noisy net.

    Returns:
        (eps_true, gamma_true) = (eps + 2 delta_v + 2 eps0 lip_g,
                                  gamma - 2 delta_u - 2 eps0 lip_m)
        States whose targets differ by at least eps_true have measurements
        that differ by more than gamma_true. gamma_true <= 0 promises nothing.
    """
    if min(delta_u, delta_v, eps0, lip_m, lip_g) < 0:
        raise InvalidArgumentError("noise levels, eps0 and Lipschitz constants must be >= 0")
    return (
        eps + 2.0 * delta_v + 2.0 * eps0 * lip_g,
        gamma - 2.0 * delta_u - 2.0 * eps0 * lip_m,
    )


def _check_guarantee_inputs(eps0: float, lip_m: float, lip_g: float) -> None:
    if eps0 < 0:
        raise InvalidArgumentError(f"eps0 must be >= 0, got {eps0}")
    if not (lip_m > 0 and lip_g > 0):
        raise InvalidArgumentError("Lipschitz estimates must be positive")


def verify_separation_guarantee(
    ds_net: DataSet,
    selection: Sequence[int],
    gamma: float,
    eps: float,
    eps0: float,
    lip_m: float,
    lip_g: float,
    test: DataSet,
    test_secants: Optional[SecantSet] = None,
    delta_u: float = 0.0,
    delta_v: float = 0.0,
) -> SeparationReport:
    """
    Check on test secants what separation on the net promises.

    The hypothesis is the separation condition on every net secant: target
    gap >= eps implies measurement gap >= gamma. On the test secants, a pair
    qualifies when its target gap is at least eps_true, and it is a violation
    when its measurement gap is not above gamma_true (see
    noisy_separation_thresholds; delta_u = delta_v = 0 for clean data).

    Example:
        report = verify_separation_guarantee(net, [0, 1], 0.2, 0.5, 0.01, 1.0, 1.0, fresh)
        report.passed
    """
    _check_guarantee_inputs(eps0, lip_m, lip_g)
    net_secants = build_secants_all(ds_net)
    net_m2 = selection_gap2(ds_net, net_secants, selection)
    hypothesis = not np.any((net_secants.target_gap2 >= eps**2) & (net_m2 < gamma**2))

    eps_true, gamma_true = noisy_separation_thresholds(gamma, eps, delta_u, delta_v, eps0, lip_m, lip_g)
    if test_secants is None:
        test_secants = build_secants_all(test)
    test_m = np.sqrt(selection_gap2(test, test_secants, selection))
    qualifying = np.sqrt(test_secants.target_gap2) >= eps_true
    violations = int(np.count_nonzero(qualifying & (test_m <= gamma_true)))
    if violations:
        logger.warning("separation check: %d violations on %d qualifying pairs", violations, int(qualifying.sum()))

    return SeparationReport(
        kind="separation",
        hypothesis_holds=bool(hypothesis),
        checked_pairs=len(test_secants),
        qualifying_pairs=int(qualifying.sum()),
        violations=violations,
        eps_required=eps_true,
        gamma_guaranteed=gamma_true,
    )


def verify_amplification_guarantee(
    ds_net: DataSet,
    selection: Sequence[int],
    lipschitz: float,
    eps0: float,
    lip_m: float,
    lip_g: float,
    test: DataSet,
    test_secants: Optional[SecantSet] = None,
) -> SeparationReport:
    """
    Check ||dg|| < L ||dm_S|| + 2 (lip_g + L lip_m) eps0 on test secants.

    The hypothesis is that the Lipschitz proxy of S on the net is at most L.
    """
    if not lipschitz > 0:
        raise InvalidArgumentError(f"L must be positive, got {lipschitz}")
    _check_guarantee_inputs(eps0, lip_m, lip_g)
    hypothesis = lipschitz_proxy(ds_net, build_secants_all(ds_net), selection) <= lipschitz

    if test_secants is None:
        test_secants = build_secants_all(test)
    slack = 2.0 * (lip_g + lipschitz * lip_m) * eps0
    test_m = np.sqrt(selection_gap2(test, test_secants, selection))
    test_g = np.sqrt(test_secants.target_gap2)
    qualifying = test_g > 0
    violations = int(np.count_nonzero(qualifying & (test_g >= lipschitz * test_m + slack)))
    if violations:
        logger.warning("amplification check: %d violations on %d pairs", violations, int(qualifying.sum()))

    return SeparationReport(
        kind="amplification",
        hypothesis_holds=bool(hypothesis),
        checked_pairs=len(test_secants),
        qualifying_pairs=int(qualifying.sum()),
        violations=violations,
        lipschitz_slack=slack,
    )


def selection_report(
    ds: DataSet,
    selection: Sequence[int],
    gamma: float,
    eps: float,
    holdout: float = 0.2,
    seed: int = 0,
    bounds: Optional[CoverBound] = None,
) -> SelectionReport:
    """
    Summarize a selection.

    R^2 comes from nearest-neighbor reconstruction of a random hold-out
    fraction of the states from the rest; the undetectable pair count and the
    Lipschitz proxy are taken over all secants of ``ds``.
    """
    if not 0.0 < holdout < 1.0:
        raise InvalidArgumentError(f"holdout must be in (0, 1), got {holdout}")
    selection = ds.check_selection(selection)
    n_hold = max(1, int(round(holdout * ds.n_states)))
    if n_hold >= ds.n_states:
        raise InvalidArgumentError("holdout leaves no training states")

    order = np.random.default_rng(seed).permutation(ds.n_states)
    test = ds.subset(np.sort(order[:n_hold]))
    train = ds.subset(np.sort(order[n_hold:]))
    pred = nn_reconstruct(train, selection, test.measurements(selection))
    r2 = r_squared(pred, test.targets)

    secants = build_secants_all(ds)
    proxy = lipschitz_proxy(ds, secants, selection)
    if np.isinf(proxy):
        logger.warning("selection %s has an unbounded Lipschitz proxy", selection)
    return SelectionReport(
        selection=selection,
        r_squared=r2,
        undetectable_pairs=undetectable_pair_count(ds, secants, selection, gamma, eps),
        gamma=gamma,
        eps=eps,
        lipschitz_proxy=proxy,
        holdout_states=n_hold,
        bounds=bounds,
    )
