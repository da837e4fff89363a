"""
Sampling Controller - Down-Sampled Secants and Sample-Size Formulas

Summing over all N(N-1)/2 secants is quadratic in N. Two cheaper secant sets
stand in for it:

- sample_secant_pairs: m i.i.d. uniform pairs, averaged (normalization 1/m)
- sample_base_points: m random base states joined to every other state
  (normalization 1/(mN); amplification sums it unnormalized)

The *_sample_size functions say how large m must be for the sampled
objective to be within eps (or delta) of its expectation with probability at
least 1 - p, uniformly over the sensor sets that matter.
"""

import logging
import math

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import gammaln

from secsel.controllers.objective_controller import require_targets
from secsel.exceptions import InvalidArgumentError
from secsel.models.dataset import DataSet
from secsel.models.reports import SampleSizeReport
from secsel.models.secants import SecantSet
from secsel.utils.parallel import chunk_bounds, map_chunks

logger = logging.getLogger(__name__)

# Rows of the diameter scan handled per worker task
DIAMETER_CHUNK = 512


def _target_gap2(ds: DataSet, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    diff = ds.targets[left] - ds.targets[right]
    return np.einsum("ij,ij->i", diff, diff)


def sample_secant_pairs(ds: DataSet, m: int, seed: int = 0) -> SecantSet:
    """
    Draw m secants uniformly with replacement.

    The second index of a pair is redrawn until it differs from the first.

    Example:
        secants = sample_secant_pairs(ds, 5, seed=1)   # len(secants) == 5
    """
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    require_targets(ds)
    n_states = ds.n_states
    rng = np.random.default_rng(seed)
    left = rng.integers(0, n_states, size=m)
    right = rng.integers(0, n_states, size=m)
    clash = left == right
    while np.any(clash):
        right[clash] = rng.integers(0, n_states, size=int(clash.sum()))
        clash = left == right

    return SecantSet(
        left=left,
        right=right,
        target_gap2=_target_gap2(ds, left, right),
        kind="sampled-pairs",
        normalization=1.0 / m,
    )


def sample_base_points(ds: DataSet, m: int, seed: int = 0) -> SecantSet:
    """
    Join m base states, drawn uniformly with replacement, to every other state.

    Each base point contributes N - 1 secants (its self-pair is dropped).
    """
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    require_targets(ds)
    n_states = ds.n_states
    base = np.random.default_rng(seed).integers(0, n_states, size=m)

    left = np.repeat(base, n_states)
    right = np.tile(np.arange(n_states), m)
    keep = left != right
    left, right = left[keep], right[keep]
    logger.info("base points: %d bases, %d secants", m, left.shape[0])
    return SecantSet(
        left=left,
        right=right,
        target_gap2=_target_gap2(ds, left, right),
        kind="base-by-all",
        normalization=1.0 / (m * n_states),
    )


def _check_probability(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise InvalidArgumentError(f"p must be in (0, 1), got {p}")


def _ceil_report(exact: float, formula_id: str, inputs: dict, empirical: bool) -> SampleSizeReport:
    return SampleSizeReport(
        m=max(1, math.ceil(exact)),
        inputs=inputs,
        formula_id=formula_id,
        exact=exact,
        diameter_is_empirical=empirical,
    )


def pairs_sample_size(
    diameter: float, eps: float, max_sensors: int, n_sensors: int, p: float, diameter_is_empirical: bool = False
) -> SampleSizeReport:
    """
    Pairs needed so the sampled dd objective is eps-accurate for every set of
    at most L sensors, with probability at least 1 - p.

    m = ceil(D^4 / (2 eps^2) * (L ln M - ln((L-1)!) - ln(p/2)))

    Example:
        pairs_sample_size(1.0, 0.1, 3, 10, 0.05).m   # 496
    """
    if diameter <= 0 or eps <= 0:
        raise InvalidArgumentError("D and eps must be positive")
    if not 1 <= max_sensors <= n_sensors:
        raise InvalidArgumentError(f"need 1 <= L <= M, got L={max_sensors}, M={n_sensors}")
    _check_probability(p)
    log_count = max_sensors * math.log(n_sensors) - gammaln(max_sensors)
    exact = diameter**4 / (2.0 * eps**2) * (log_count - math.log(p / 2.0))
    return _ceil_report(
        float(exact),
        "pairs-uniform",
        {"D": diameter, "eps": eps, "L": max_sensors, "M": n_sensors, "p": p},
        diameter_is_empirical,
    )


def cover_sample_size(
    diameter: float, eps: float, n_sensors: int, p: float, diameter_is_empirical: bool = False
) -> SampleSizeReport:
    """
    Pairs needed before a sampled separation cover certifies the full one.

    m = ceil(D^4 / (2 eps^4) * (M ln 2 - ln p))
    """
    if diameter <= 0 or eps <= 0:
        raise InvalidArgumentError("D and eps must be positive")
    if n_sensors < 1:
        raise InvalidArgumentError(f"M must be >= 1, got {n_sensors}")
    _check_probability(p)
    exact = diameter**4 / (2.0 * eps**4) * (n_sensors * math.log(2.0) - math.log(p))
    return _ceil_report(
        exact,
        "cover-separation",
        {"D": diameter, "eps": eps, "M": n_sensors, "p": p},
        diameter_is_empirical,
    )


def base_sample_size(delta: float, n_sensors: int, p: float) -> SampleSizeReport:
    """
    Base points needed by the sampled separation and amplification guarantees.

    m = ceil((M ln 2 - ln p) / (2 delta^2))
    """
    if not 0.0 < delta < 1.0:
        raise InvalidArgumentError(f"delta must be in (0, 1), got {delta}")
    if n_sensors < 1:
        raise InvalidArgumentError(f"M must be >= 1, got {n_sensors}")
    _check_probability(p)
    exact = (n_sensors * math.log(2.0) - math.log(p)) / (2.0 * delta**2)
    return _ceil_report(exact, "base-points", {"delta": delta, "M": n_sensors, "p": p}, False)


def estimate_target_diameter(ds: DataSet) -> float:
    """
    Largest distance between two sampled targets.

    This is only a lower bound on the diameter of g over the whole state set.
    """
    require_targets(ds)
    targets = ds.targets

    def chunk(start: int, stop: int) -> float:
        return float(cdist(targets[start:stop], targets).max())

    return max(map_chunks(chunk, chunk_bounds(ds.n_states, DIAMETER_CHUNK)))
