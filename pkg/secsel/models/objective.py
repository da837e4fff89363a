"""
Objective Models - Which Objective to Maximize and Its Running State

Key concepts:
- ObjectiveSpec: the objective variant and its thresholds
    dd   detectable differences, threshold gamma
    sep  separation, thresholds gamma and eps
    amp  amplification, Lipschitz tolerance L
- IncrementalState: the selected sensors so far plus, for every secant, the
  accumulated squared measurement gap ||m_S(x) - m_S(x')||^2. Because that
  quantity is a plain sum over sensors, adding a sensor only needs that
  sensor's own gaps.
"""

from dataclasses import dataclass, field
from typing import List, Literal, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

Variant = Literal["dd", "sep", "amp"]


class ObjectiveSpec(BaseModel):
    """
    Schema for an objective variant.

    normalization overrides the multiplier that would otherwise come from the
    secant set (see objective_controller.effective_normalization).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Variant
    gamma: Optional[float] = Field(default=None, gt=0)
    eps: Optional[float] = Field(default=None, gt=0)
    lipschitz: Optional[float] = Field(default=None, gt=0)
    normalization: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _thresholds_match_variant(self) -> "ObjectiveSpec":
        if self.variant in ("dd", "sep") and self.gamma is None:
            raise ValueError(f"variant {self.variant} needs gamma")
        if self.variant == "sep" and self.eps is None:
            raise ValueError("variant sep needs eps")
        if self.variant == "amp" and self.lipschitz is None:
            raise ValueError("variant amp needs lipschitz")
        return self

    @classmethod
    def detectable_difference(cls, gamma: float, normalization: Optional[float] = None):
        return cls(variant="dd", gamma=gamma, normalization=normalization)

    @classmethod
    def separation(cls, gamma: float, eps: float, normalization: Optional[float] = None):
        return cls(variant="sep", gamma=gamma, eps=eps, normalization=normalization)

    @classmethod
    def amplification(cls, lipschitz: float, normalization: Optional[float] = None):
        return cls(variant="amp", lipschitz=lipschitz, normalization=normalization)

    def params(self) -> dict:
        """Thresholds that apply to this variant, for reports."""
        if self.variant == "dd":
            return {"gamma": self.gamma}
        if self.variant == "sep":
            return {"gamma": self.gamma, "eps": self.eps}
        return {"lipschitz": self.lipschitz}


class ObjectiveValue(NamedTuple):
    """Objective value plus the number of saturated secants."""

    value: float
    saturated: int


@dataclass(eq=False)
class IncrementalState:
    """
    Mutable greedy state; owned by one thread at a time.

    per_secant_m2 always equals the sum over active sensors of that secant's
    per-sensor squared gap, and current_value the objective of active_sensors.
    """

    spec: ObjectiveSpec
    normalization: float
    per_secant_m2: np.ndarray
    active_sensors: List[int] = field(default_factory=list)
    current_value: float = 0.0
