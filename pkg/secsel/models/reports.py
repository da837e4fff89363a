"""
Report Schemas - JSON Records Returned by the Controllers

These are the pydantic records that end up on stdout. Infinite values (an
unbounded Lipschitz proxy) are written as the JSON constant Infinity.
"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from secsel.models.trace import CoverBound

FormulaId = Literal["pairs-uniform", "cover-separation", "base-points"]


class SampleSizeReport(BaseModel):
    """
    Number of secants (or base points) a sampled objective needs.

    inputs holds D, eps or delta, L, M and p as applicable.
    """

    model_config = ConfigDict(extra="forbid")

    m: int = Field(ge=1)
    inputs: Dict[str, float]
    formula_id: FormulaId
    exact: float
    diameter_is_empirical: bool = False


class SelectionReport(BaseModel):
    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    selection: List[int]
    r_squared: float = Field(le=1.0)
    undetectable_pairs: int = Field(ge=0)
    gamma: float
    eps: float
    lipschitz_proxy: float
    holdout_states: int
    bounds: Optional[CoverBound] = None


class SeparationReport(BaseModel):
    """
    Outcome of checking a separation (or amplification) guarantee on test pairs.

    hypothesis_holds says whether the cover condition held on the net itself;
    violations counts test pairs that break the promised conclusion.
    """

    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    kind: Literal["separation", "amplification"]
    hypothesis_holds: bool
    checked_pairs: int
    qualifying_pairs: int
    violations: int
    eps_required: Optional[float] = None
    gamma_guaranteed: Optional[float] = None
    lipschitz_slack: Optional[float] = None
    lipschitz_estimates_are_lower_bounds: bool = True

    @property
    def passed(self) -> bool:
        return self.violations == 0


class DOptimalResult(BaseModel):
    model_config = ConfigDict(extra="forbid")

    chosen: List[int]
    log_det: List[float]
    gains: List[float]
    log_det_prior: float


class ScanEntry(BaseModel):
    """One greedy run inside a threshold scan (gamma for dd and sep, L for amp); eps is set for sep only."""

    model_config = ConfigDict(extra="forbid")

    variant: Literal["dd", "sep", "amp"]
    threshold: float
    eps: Optional[float] = None
    chosen: List[int]
    values: List[float]
    stopped_reason: str
    kappa: Optional[float] = None


class TorusReproReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_samples: int
    k_neighbors: int
    rank: int
    truncated: bool
    leading_eigenvalues: List[float]
    detectable_scan: List[ScanEntry]
    amplification_scan: List[ScanEntry]
    separation_scan: List[ScanEntry]
    base_points: int


class ToyReproReport(BaseModel):
    """
    Linear baselines against the secant objective on the scaled toy model.

    undetectable_pairs maps a selection label ("0,1") to its count.
    """

    model_config = ConfigDict(extra="forbid")

    scales: List[float]
    n_samples: int
    qr: List[int]
    bayes_dopt: List[int]
    detectable: ScanEntry
    undetectable_pairs: Dict[str, int]
