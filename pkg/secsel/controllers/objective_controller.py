"""
Objective Controller - Secant Objectives and Their Diagnostics

The three objectives all sum one term per secant (i, i'):

    dd   min(m2 / gamma^2, 1) * g2
    sep  the dd term, but only on secants with g2 >= eps^2
    amp  min(m2 / g2, 1 / L^2) on secants with g2 > 0

where g2 = ||g(x_i) - g(x_i')||^2 and m2 = ||m_S(x_i) - m_S(x_i')||^2.
m2 is a plain sum over the selected sensors, so greedy runs keep it per
secant (IncrementalState) and only sweep the new sensor's own gaps.

Secants are unordered pairs i < i'. Summing over ordered pairs would double
every value and change no selection, cover condition or bound ratio.

Every sweep runs over fixed chunks of secants; chunk sums are combined with
tree_sum so values do not depend on the thread count.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from secsel.exceptions import InvalidArgumentError
from secsel.models.dataset import DataSet
from secsel.models.objective import IncrementalState, ObjectiveSpec, ObjectiveValue
from secsel.models.secants import SecantSet
from secsel.utils.parallel import chunk_bounds, map_chunks, tree_sum

logger = logging.getLogger(__name__)


def require_targets(ds: DataSet) -> None:
    if ds.target_dim == 0:
        raise InvalidArgumentError(
            f"dataset {ds.name!r} has no target columns; assign targets before building secants"
        )


def build_secants_all(ds: DataSet) -> SecantSet:
    """
    Every unordered pair i < i' of sampled states, once.

    Example:
        secants = build_secants_all(ds)   # N=750 gives 280875 secants
    """
    require_targets(ds)
    left, right = np.triu_indices(ds.n_states, k=1)
    targets = ds.targets

    def gaps(start: int, stop: int) -> np.ndarray:
        diff = targets[left[start:stop]] - targets[right[start:stop]]
        return np.einsum("ij,ij->i", diff, diff)

    parts = map_chunks(gaps, chunk_bounds(left.shape[0]))
    gap2 = np.concatenate(parts) if parts else np.zeros(0)
    logger.info("built %d secants over %d states", left.shape[0], ds.n_states)
    return SecantSet(left=left, right=right, target_gap2=gap2, kind="all-unordered")


def effective_normalization(spec: ObjectiveSpec, secants: SecantSet) -> float:
    """
    Multiplier applied to an objective sum.

    An explicit spec.normalization wins. Amplification over base-point secants
    is an unnormalized sum; everything else uses the secant set's multiplier.
    """
    if spec.normalization is not None:
        return float(spec.normalization)
    if spec.variant == "amp" and secants.kind == "base-by-all":
        return 1.0
    return float(secants.normalization)


def _terms(spec: ObjectiveSpec, m2: np.ndarray, g2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-secant terms and a mask of the saturated ones."""
    if spec.variant == "amp":
        active = g2 > 0
        ratio = np.divide(m2, g2, out=np.zeros_like(m2), where=active)
        cap = 1.0 / spec.lipschitz**2
        terms = np.where(active, np.minimum(ratio, cap), 0.0)
        return terms, active & (ratio >= cap)

    gamma2 = spec.gamma**2
    weight = np.minimum(m2 / gamma2, 1.0)
    active = g2 > 0
    if spec.variant == "sep":
        active &= g2 >= spec.eps**2
    terms = np.where(active, weight * g2, 0.0)
    return terms, active & (m2 >= gamma2)


def sensor_gap2(
    ds: DataSet, secants: SecantSet, j: int, start: int = 0, stop: Optional[int] = None
) -> np.ndarray:
    return secants.gap2_of(ds.sensors[j].values, start, stop)


def selection_gap2(ds: DataSet, secants: SecantSet, selection: Sequence[int]) -> np.ndarray:
    """m2 per secant for the stacked sensors in ``selection`` (zeros when empty)."""
    selection = ds.check_selection(selection)
    if not selection:
        return np.zeros(len(secants))

    def chunk(start: int, stop: int) -> np.ndarray:
        m2 = np.zeros(stop - start)
        for j in selection:
            m2 += sensor_gap2(ds, secants, j, start, stop)
        return m2

    parts = map_chunks(chunk, chunk_bounds(len(secants)))
    return np.concatenate(parts) if parts else np.zeros(0)


def eval_objective(
    spec: ObjectiveSpec, ds: DataSet, secants: SecantSet, selection: Sequence[int]
) -> ObjectiveValue:
    """
    Objective value of a sensor set, computed from scratch.

    Returns:
        ObjectiveValue(value, saturated) where ``saturated`` counts the
        contributing secants whose term sits at its cap (weight 1 for dd and
        sep, ratio >= 1/L^2 for amp)

    Example:
        spec = ObjectiveSpec.detectable_difference(gamma=0.5)
        eval_objective(spec, ds, secants, [0, 1]).value
    """
    require_targets(ds)
    selection = ds.check_selection(selection)
    if not selection:
        return ObjectiveValue(0.0, 0)

    def chunk(start: int, stop: int) -> Tuple[float, int]:
        m2 = np.zeros(stop - start)
        for j in selection:
            m2 += sensor_gap2(ds, secants, j, start, stop)
        terms, saturated = _terms(spec, m2, secants.target_gap2[start:stop])
        return float(np.sum(terms)), int(np.count_nonzero(saturated))

    parts = map_chunks(chunk, chunk_bounds(len(secants)))
    value = tree_sum([p[0] for p in parts]) * effective_normalization(spec, secants)
    return ObjectiveValue(value, sum(p[1] for p in parts))


def init_state(spec: ObjectiveSpec, ds: DataSet, secants: SecantSet) -> IncrementalState:
    """Empty selection with zeroed accumulators."""
    require_targets(ds)
    return IncrementalState(
        spec=spec,
        normalization=effective_normalization(spec, secants),
        per_secant_m2=np.zeros(len(secants)),
    )


def _check_candidate(state: IncrementalState, ds: DataSet, j: int) -> int:
    j = int(j)
    if not 0 <= j < ds.n_sensors:
        raise InvalidArgumentError(f"sensor index {j} outside 0..{ds.n_sensors - 1}")
    if j in state.active_sensors:
        raise InvalidArgumentError(f"sensor {j} is already selected")
    return j


def marginal_gain(state: IncrementalState, ds: DataSet, secants: SecantSet, j: int) -> float:
    """f(S + j) - f(S) from the accumulators and sensor j's gaps alone."""
    j = _check_candidate(state, ds, j)
    spec = state.spec

    def chunk(start: int, stop: int) -> float:
        old = state.per_secant_m2[start:stop]
        g2 = secants.target_gap2[start:stop]
        before, _ = _terms(spec, old, g2)
        after, _ = _terms(spec, old + sensor_gap2(ds, secants, j, start, stop), g2)
        return float(np.sum(after - before))

    gain = tree_sum(map_chunks(chunk, chunk_bounds(len(secants)))) * state.normalization
    return max(gain, 0.0)


def commit_sensor(state: IncrementalState, ds: DataSet, secants: SecantSet, j: int) -> IncrementalState:
    """
    Add sensor j to the state in place and return it.

    current_value is re-summed from the updated accumulators, so it matches a
    from-scratch evaluation no matter how many commits came before.
    """
    j = _check_candidate(state, ds, j)
    spec = state.spec
    m2 = state.per_secant_m2

    def chunk(start: int, stop: int) -> float:
        m2[start:stop] += sensor_gap2(ds, secants, j, start, stop)
        terms, _ = _terms(spec, m2[start:stop], secants.target_gap2[start:stop])
        return float(np.sum(terms))

    state.current_value = tree_sum(map_chunks(chunk, chunk_bounds(len(secants)))) * state.normalization
    state.active_sensors.append(j)
    return state


def total_fluctuation(ds: DataSet, secants: SecantSet) -> float:
    """F_inf: the summed squared target gaps."""
    parts = map_chunks(
        lambda start, stop: float(np.sum(secants.target_gap2[start:stop])), chunk_bounds(len(secants))
    )
    return tree_sum(parts) * secants.normalization


def _split_by_threshold(
    ds: DataSet, secants: SecantSet, selection: Sequence[int], gamma: float
) -> Tuple[float, float]:
    """(sum of g2 on secants with m2 >= gamma^2, sum of g2 on the rest)."""
    if not gamma > 0:
        raise InvalidArgumentError(f"gamma must be positive, got {gamma}")
    require_targets(ds)
    m2 = selection_gap2(ds, secants, selection)
    gamma2 = gamma**2

    def chunk(start: int, stop: int) -> Tuple[float, float]:
        g2 = secants.target_gap2[start:stop]
        detected = m2[start:stop] >= gamma2
        return float(np.sum(g2[detected])), float(np.sum(g2[~detected]))

    parts = map_chunks(chunk, chunk_bounds(len(secants)))
    scale = secants.normalization
    return tree_sum([p[0] for p in parts]) * scale, tree_sum([p[1] for p in parts]) * scale


def undetectable_differences(ds: DataSet, secants: SecantSet, selection: Sequence[int], gamma: float) -> float:
    """F_gamma(S): target fluctuation left on secants the sensors cannot tell apart."""
    return _split_by_threshold(ds, secants, selection, gamma)[1]


def rigid_objective(ds: DataSet, secants: SecantSet, selection: Sequence[int], gamma: float) -> float:
    """Hard-threshold objective: target fluctuation on secants with m2 >= gamma^2."""
    return _split_by_threshold(ds, secants, selection, gamma)[0]


def relaxation_bounds(f_gamma: float, f_inf: float, alpha: float) -> Tuple[float, float]:
    """
    Bounds at the tighter threshold alpha * gamma implied by the relaxed value.

    Returns:
        (lower bound on the hard objective at alpha*gamma,
         upper bound on the undetectable differences at alpha*gamma)
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must be in (0, 1), got {alpha}")
    slack = 1e-12 * max(1.0, abs(f_inf))
    if f_gamma < -slack or f_gamma > f_inf + slack:
        raise InvalidArgumentError(f"need 0 <= f_gamma <= F_inf, got {f_gamma} and {f_inf}")
    shrink = 1.0 - alpha**2
    return (f_gamma - alpha**2 * f_inf) / shrink, (f_inf - f_gamma) / shrink


def lipschitz_proxy(ds: DataSet, secants: SecantSet, selection: Sequence[int]) -> float:
    """
    Largest secant slope sqrt(g2 / m2) of the reconstruction map.

    Returns +inf when some secant with a target gap has no measurement gap,
    and 0.0 when no secant has a target gap at all.
    """
    require_targets(ds)
    m2 = selection_gap2(ds, secants, selection)
    active = secants.target_gap2 > 0
    if not np.any(active):
        return 0.0
    if np.any(m2[active] == 0):
        return math.inf
    return float(np.sqrt(np.max(secants.target_gap2[active] / m2[active])))
