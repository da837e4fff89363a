"""
Greedy Trace Models - What a Greedy Run Did and What It Guarantees

Key concepts:
- GreedyTrace: chosen sensors in order, f(S_k) after each step, the gains,
               f(M), how many marginal gains were computed and why it stopped
- CoverBound: quantities derived from a set-cover run
    kappa                  first gain / last gain
    size_bound_factor      1 + ln(kappa)
    lower_bound_on_optimum |S_K| / (1 + ln(kappa))
- LipschitzSearch: outcome of the bisection over the amplification tolerance L
"""

import math
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from secsel.models.objective import ObjectiveSpec

StopReason = Literal["budget", "cover", "no-gain"]


class GreedyTrace(BaseModel):
    model_config = ConfigDict(extra="forbid")

    objective: Optional[ObjectiveSpec] = None
    chosen: List[int] = Field(default_factory=list)
    values: List[float] = Field(default_factory=list)
    increments: List[float] = Field(default_factory=list)
    f_full: Optional[float] = None
    evaluations: int = 0
    stopped_reason: StopReason = "budget"

    @property
    def final_value(self) -> float:
        return self.values[-1] if self.values else 0.0


class CoverBound(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kappa: float = Field(ge=1.0 - 1e-12)
    size_bound_factor: float
    lower_bound_on_optimum: float

    def size_bound(self, optimum_size: int) -> float:
        """Largest greedy cover size allowed for a cover of ``optimum_size``."""
        return self.size_bound_factor * optimum_size

    @classmethod
    def from_increments(cls, increments: List[float], size: Optional[int] = None) -> "CoverBound":
        """
        Derive the bound from greedy increments.

        A single increment (or none) gives kappa = 1.
        """
        size = len(increments) if size is None else size
        if len(increments) <= 1:
            kappa = 1.0
        else:
            kappa = max(increments[0] / increments[-1], 1.0)
        factor = 1.0 + math.log(kappa)
        return cls(kappa=kappa, size_bound_factor=factor, lower_bound_on_optimum=size / factor)


class LipschitzSearch(BaseModel):
    model_config = ConfigDict(extra="forbid")

    budget: int
    l_upper: float
    l_lower_certified: Optional[float] = None
    probes: int
    trace_at_l_upper: GreedyTrace
    bound_at_l_upper: CoverBound
