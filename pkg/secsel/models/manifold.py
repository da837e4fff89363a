"""
Manifold Models - Linear and Nonlinear Coordinate Systems

Key concepts:
- PCAModel: weighted principal components. The modes U are orthonormal in
  the weighted inner product (U^T W U = I), so the coefficients of a state z
  are U^T W (z - mean) and the coefficient covariance is Sigma^2 / N.
- IsomapEmbedding: coordinates phi_k = eigenvector_k * sqrt(eigenvalue_k)
  of the double-centered squared geodesic distance matrix.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PCAModel:
    mean: np.ndarray
    modes: np.ndarray
    singular_values: np.ndarray
    weights: np.ndarray
    n_samples: int

    @property
    def rank(self) -> int:
        return self.modes.shape[1]

    def coefficients(self, data: np.ndarray) -> np.ndarray:
        """Modal coefficients x = U^T W (z - mean), one row per state."""
        return (np.asarray(data, dtype=float) - self.mean) @ (self.weights[:, None] * self.modes)

    def reconstruct(self, coefficients: np.ndarray) -> np.ndarray:
        return self.mean + np.asarray(coefficients, dtype=float) @ self.modes.T

    def coefficient_covariance(self) -> np.ndarray:
        """C_x = Sigma^2 / N."""
        return np.diag(self.singular_values**2 / self.n_samples)


@dataclass(frozen=True, eq=False)
class IsomapEmbedding:
    coordinates: np.ndarray
    eigenvalues: np.ndarray
    k_neighbors: int
    requested_rank: int
    truncated: bool = False

    @property
    def rank(self) -> int:
        return self.coordinates.shape[1]
