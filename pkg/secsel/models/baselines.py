"""
LinearSensorModel - Linear-Gaussian Description of the Sensors

Each sensor j is modeled as m_j = M_j x + n_j, where x are modal coordinates
with prior covariance C_x and n_j ~ N(0, sigma_j^2 I).
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from secsel.exceptions import InvalidArgumentError


@dataclass(frozen=True, eq=False)
class LinearSensorModel:
    rows: Tuple[np.ndarray, ...]
    prior_cov: np.ndarray
    noise_var: np.ndarray

    def __post_init__(self):
        prior = np.asarray(self.prior_cov, dtype=float)
        rows = tuple(np.atleast_2d(np.asarray(r, dtype=float)) for r in self.rows)
        noise = np.broadcast_to(np.asarray(self.noise_var, dtype=float), (len(rows),)).copy()
        if prior.ndim != 2 or prior.shape[0] != prior.shape[1]:
            raise InvalidArgumentError("prior_cov must be square")
        if not np.allclose(prior, prior.T, rtol=0.0, atol=1e-10):
            raise InvalidArgumentError("prior_cov must be symmetric")
        for j, row in enumerate(rows):
            if row.shape[1] != prior.shape[0]:
                raise InvalidArgumentError(
                    f"sensor {j} row has {row.shape[1]} columns, prior is {prior.shape[0]}-dimensional"
                )
        if np.any(noise <= 0):
            raise InvalidArgumentError("noise variances must be positive")
        object.__setattr__(self, "prior_cov", prior)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "noise_var", noise)

    @property
    def n_sensors(self) -> int:
        return len(self.rows)

    @property
    def state_dim(self) -> int:
        return self.prior_cov.shape[0]
