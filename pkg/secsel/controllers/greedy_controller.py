"""
Greedy Controller - Submodular Maximization, Set Cover and the L Search

One engine drives every greedy run in the project. It only needs two
callbacks: the marginal gain of a candidate and a commit that returns the new
objective value. On top of it:

- greedy_maximize: best K sensors for a secant objective
- greedy_set_cover: fewest sensors reaching f(M), with the increment-ratio bound
- greedy_maximize_set_function: the same engine on any set function
- bisection_min_lipschitz: smallest amplification tolerance L whose greedy
  cover fits a sensor budget, with a lower-bound certificate when one exists

Selection rule at every step: the largest gain wins; gains within
TIE_TOLERANCE of the largest are tied and the lowest sensor index wins.

Accelerated (lazy) mode keeps a max-heap of stale gains. Stale gains are upper
bounds on the current ones (diminishing returns), so only the candidates whose
bound reaches the tie window are re-evaluated. It returns the same sequence as
the naive mode.
"""

import heapq
import logging
import math
from typing import Callable, Dict, FrozenSet, Optional, Tuple

import numpy as np

from secsel.controllers import objective_controller
from secsel.exceptions import BudgetInfeasibleError, InvalidArgumentError
from secsel.models.dataset import DataSet
from secsel.models.objective import ObjectiveSpec
from secsel.models.secants import SecantSet
from secsel.models.trace import CoverBound, GreedyTrace, LipschitzSearch

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12
NO_GAIN_THRESHOLD = 1e-15
COVER_RELATIVE_SLACK = 1e-12


def cover_reached(value: float, f_full: float) -> bool:
    return value >= f_full - COVER_RELATIVE_SLACK * max(1.0, abs(f_full))


def _pick(gains: Dict[int, float]) -> Tuple[int, float]:
    """Lowest index among the gains tied with the largest."""
    best = max(gains.values())
    winner = min(j for j, g in gains.items() if g >= best - TIE_TOLERANCE)
    return winner, gains[winner]


class _LazyQueue:
    """
    Max-heap of (gain bound, sensor) where bounds may be stale.

    refresh() re-evaluates entries until every candidate that could tie with
    the best current gain has a gain computed at this step.
    """

    def __init__(self, gains: Dict[int, float]):
        self._bound = dict(gains)
        self._heap = [(-g, j) for j, g in gains.items()]
        heapq.heapify(self._heap)

    def remove(self, j: int) -> None:
        del self._bound[j]

    def _push(self, j: int, gain: float) -> None:
        self._bound[j] = gain
        heapq.heappush(self._heap, (-gain, j))

    def _pop(self) -> Optional[int]:
        # entries are dropped lazily: removed sensors and superseded bounds
        while self._heap:
            neg, j = heapq.heappop(self._heap)
            if j in self._bound and self._bound[j] == -neg:
                return j
        return None

    def refresh(self, gain_fn: Callable[[int], float]) -> Dict[int, float]:
        fresh: Dict[int, float] = {}
        while True:
            j = self._pop()
            if j is None:
                break
            if j in fresh:
                # fresh top: nothing stale left above it
                self._push(j, fresh[j])
                break
            fresh[j] = gain_fn(j)
            self._push(j, fresh[j])

        if not fresh:
            return fresh
        best = max(fresh.values())
        for j in sorted(self._bound):
            if j not in fresh and self._bound[j] >= best - TIE_TOLERANCE:
                fresh[j] = gain_fn(j)
                self._push(j, fresh[j])
        best = max(fresh.values())
        return {j: g for j, g in fresh.items() if g >= best - TIE_TOLERANCE}


def run_greedy(
    n_items: int,
    budget: int,
    gain_fn: Callable[[int], float],
    commit_fn: Callable[[int], float],
    accelerated: bool,
    f_full: Optional[float] = None,
    stop_at_cover: bool = False,
) -> GreedyTrace:
    """
    The shared greedy loop.

    gain_fn(j) returns the marginal gain of item j for the current selection;
    commit_fn(j) adds j and returns the new objective value.
    """
    trace = GreedyTrace(f_full=f_full)
    evaluations = 0

    def counted(j: int) -> float:
        nonlocal evaluations
        evaluations += 1
        return gain_fn(j)

    remaining = list(range(n_items))
    queue: Optional[_LazyQueue] = None
    value = 0.0

    while len(trace.chosen) < budget and remaining:
        if accelerated and queue is not None:
            candidates = queue.refresh(counted)
        else:
            candidates = {j: counted(j) for j in remaining}
            if accelerated:
                queue = _LazyQueue(candidates)

        j, gain = _pick(candidates)
        if gain <= NO_GAIN_THRESHOLD:
            trace.stopped_reason = "no-gain"
            break

        value = commit_fn(j)
        remaining.remove(j)
        if queue is not None:
            queue.remove(j)
        trace.chosen.append(j)
        trace.values.append(value)
        trace.increments.append(gain)
        logger.info("greedy step %d: sensor %d, gain %.6g, value %.6g", len(trace.chosen), j, gain, value)

        if stop_at_cover and cover_reached(value, f_full):
            trace.stopped_reason = "cover"
            break
    else:
        if stop_at_cover and f_full is not None and cover_reached(value, f_full):
            trace.stopped_reason = "cover"

    trace.evaluations = evaluations
    return trace


def _check_budget(budget: int, n_sensors: int) -> None:
    if not 1 <= budget <= n_sensors:
        raise InvalidArgumentError(f"budget must be in 1..{n_sensors}, got {budget}")


def _secant_greedy(
    spec: ObjectiveSpec,
    ds: DataSet,
    secants: SecantSet,
    budget: int,
    accelerated: bool,
    stop_at_cover: bool,
) -> GreedyTrace:
    f_full = objective_controller.eval_objective(spec, ds, secants, range(ds.n_sensors)).value
    state = objective_controller.init_state(spec, ds, secants)

    def gain(j: int) -> float:
        return objective_controller.marginal_gain(state, ds, secants, j)

    def commit(j: int) -> float:
        return objective_controller.commit_sensor(state, ds, secants, j).current_value

    trace = run_greedy(ds.n_sensors, budget, gain, commit, accelerated, f_full, stop_at_cover)
    trace.objective = spec
    return trace


def greedy_maximize(
    spec: ObjectiveSpec,
    ds: DataSet,
    secants: SecantSet,
    budget: int,
    accelerated: bool = True,
) -> GreedyTrace:
    """
    Pick up to ``budget`` sensors greedily.

    Stops early with reason "no-gain" once the best gain is at most
    NO_GAIN_THRESHOLD. Both modes return the same chosen sequence; the trace
    records how many marginal gains each one computed.

    Example:
        spec = ObjectiveSpec.detectable_difference(gamma=0.3)
        trace = greedy_maximize(spec, ds, build_secants_all(ds), budget=2)
        trace.chosen   # [0, 1]
    """
    _check_budget(budget, ds.n_sensors)
    return _secant_greedy(spec, ds, secants, budget, accelerated, stop_at_cover=False)


def greedy_set_cover(
    spec: ObjectiveSpec,
    ds: DataSet,
    secants: SecantSet,
    accelerated: bool = True,
) -> Tuple[GreedyTrace, CoverBound]:
    """
    Add sensors greedily until f(S) reaches f(M) up to COVER_RELATIVE_SLACK.

    Returns:
        (trace, bound) where bound holds kappa = first gain / last gain and the
        size guarantee |S| <= (1 + ln kappa) * optimum

    If f(M) is zero the cover is met by the empty set.
    """
    if ds.n_sensors == 0:
        raise InvalidArgumentError("dataset has no sensors")
    f_full = objective_controller.eval_objective(spec, ds, secants, range(ds.n_sensors)).value
    if f_full <= 0:
        trace = GreedyTrace(objective=spec, f_full=f_full, stopped_reason="cover")
        return trace, CoverBound.from_increments([], 0)

    trace = _secant_greedy(spec, ds, secants, ds.n_sensors, accelerated, stop_at_cover=True)
    if trace.stopped_reason != "cover":
        logger.warning(
            "greedy cover stopped (%s) at %.12g short of f(M)=%.12g", trace.stopped_reason, trace.final_value, f_full
        )
    return trace, CoverBound.from_increments(trace.increments, len(trace.chosen))


def greedy_maximize_set_function(
    func: Callable[[FrozenSet[int]], float],
    n_items: int,
    budget: int,
    accelerated: bool = False,
) -> GreedyTrace:
    """
    Greedy maximization of an arbitrary normalized set function.

    ``func`` maps a frozenset of item indices to a value with func(empty) = 0.
    Lazy mode is only exact for submodular functions.

    Example:
        values = {frozenset(): 0.0, frozenset({0}): 2.0, ...}
        greedy_maximize_set_function(values.__getitem__, 3, 2).chosen
    """
    _check_budget(budget, n_items)
    selected: FrozenSet[int] = frozenset()
    current = float(func(selected))

    def gain(j: int) -> float:
        return float(func(selected | {j})) - current

    def commit(j: int) -> float:
        nonlocal selected, current
        selected = selected | {j}
        current = float(func(selected))
        return current

    return run_greedy(n_items, budget, gain, commit, accelerated)


def bisection_min_lipschitz(
    ds: DataSet,
    secants: SecantSet,
    budget: int,
    l_lo: float,
    l_hi: float,
    tol: float = 1e-2,
    accelerated: bool = True,
) -> LipschitzSearch:
    """
    Smallest tolerance L in [l_lo, l_hi] whose greedy amplification cover uses
    at most ``budget`` sensors, found by bisection.

    Any probe with budget < |S| / (1 + ln kappa) proves that no set of
    ``budget`` sensors meets the tolerance at that L; the largest such L is
    reported as l_lower_certified.

    Raises:
        InvalidArgumentError: for a bad range, tolerance or budget
        BudgetInfeasibleError: when even the cover at l_hi is too large
    """
    if not 0 < l_lo < l_hi:
        raise InvalidArgumentError(f"need 0 < l_lo < l_hi, got {l_lo} and {l_hi}")
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    if budget < 1:
        raise InvalidArgumentError(f"budget must be >= 1, got {budget}")

    probes = 0
    certified: Optional[float] = None

    def probe(lipschitz: float) -> Tuple[GreedyTrace, CoverBound]:
        nonlocal probes, certified
        probes += 1
        spec = ObjectiveSpec.amplification(lipschitz)
        trace, bound = greedy_set_cover(spec, ds, secants, accelerated)
        size = len(trace.chosen)
        if budget < bound.lower_bound_on_optimum and (certified is None or lipschitz > certified):
            certified = lipschitz
        logger.info("probe L=%.6g: cover of %d sensors, kappa %.4g", lipschitz, size, bound.kappa)
        return trace, bound

    best = probe(l_hi)
    if len(best[0].chosen) > budget:
        raise BudgetInfeasibleError(budget, l_hi, len(best[0].chosen))
    upper = l_hi

    low = probe(l_lo)
    if len(low[0].chosen) <= budget:
        best, upper = low, l_lo
    else:
        lo, hi = l_lo, l_hi
        while hi - lo > tol * lo:
            mid = 0.5 * (lo + hi)
            result = probe(mid)
            if len(result[0].chosen) <= budget:
                hi, best, upper = mid, result, mid
            else:
                lo = mid

    return LipschitzSearch(
        budget=budget,
        l_upper=upper,
        l_lower_certified=certified,
        probes=probes,
        trace_at_l_upper=best[0],
        bound_at_l_upper=best[1],
    )


def nemhauser_curve(budget: int, kmax: int) -> np.ndarray:
    """Guarantee factors 1 - exp(-k / K) for k = 1..kmax."""
    if budget < 1:
        raise InvalidArgumentError(f"K must be >= 1, got {budget}")
    if kmax < 1:
        raise InvalidArgumentError(f"kmax must be >= 1, got {kmax}")
    k = np.arange(1, kmax + 1, dtype=float)
    return 1.0 - np.exp(-k / budget)


def sampled_greedy_guarantee(k: int, budget: int, eps: float) -> Tuple[float, float]:
    """
    Guarantee for greedy run on a sampled objective that is eps-accurate.

    f(S_k) >= factor * f(S*) - additive, with factor = 1 - exp(-k/K) and
    additive = (2 - exp(-k/K)) * eps.
    """
    if budget < 1 or k < 0:
        raise InvalidArgumentError(f"need k >= 0 and K >= 1, got k={k}, K={budget}")
    if eps < 0:
        raise InvalidArgumentError(f"eps must be >= 0, got {eps}")
    decay = math.exp(-k / budget)
    return 1.0 - decay, (2.0 - decay) * eps
