"""
Baseline Controller - Linear Sensor Selection

The two linear methods the secant objectives are compared against. Both see
the data only through PCA coordinates, so they favor whatever carries the
most variance:

- pivoted_qr_select: column-pivoted QR of the mode matrix
- greedy_bayes_dopt: greedy maximization of log det of the posterior
  information C_x^-1 + sum_j M_j^T M_j / sigma_j^2
"""

import logging
from typing import List

import numpy as np
from scipy.linalg import qr

from secsel.controllers.greedy_controller import run_greedy
from secsel.exceptions import InvalidArgumentError
from secsel.models.baselines import LinearSensorModel
from secsel.models.dataset import DataSet
from secsel.models.manifold import PCAModel
from secsel.models.reports import DOptimalResult

logger = logging.getLogger(__name__)


def pivoted_qr_select(modes_rows: np.ndarray, k: int) -> List[int]:
    """
    First k pivots of a Householder QR with column pivoting on modes_rows^T.

    Row j of ``modes_rows`` describes scalar sensor j in modal coordinates.
    Each pivot is the column with the largest residual norm; LAPACK takes the
    first one on ties.

    Example:
        pivoted_qr_select(np.array([[3.0, 0.0], [0.0, 2.0], [1.0, 1.0]]), 2)   # [0, 1]
    """
    rows = np.atleast_2d(np.asarray(modes_rows, dtype=float))
    n_sensors, rank = rows.shape
    if not 1 <= k <= min(n_sensors, rank):
        raise InvalidArgumentError(f"k must be in 1..{min(n_sensors, rank)}, got {k}")
    _, pivots = qr(rows.T, pivoting=True, mode="r")
    return [int(p) for p in pivots[:k]]


def linear_model_from_pca(ds: DataSet, pca: PCAModel, sigma: float) -> LinearSensorModel:
    """
    Fit each sensor as an affine function of the PCA coefficients.

    The prior on the coefficients is their sample covariance Sigma^2 / N and
    every sensor gets the same noise variance sigma^2.
    """
    if not sigma > 0:
        raise InvalidArgumentError(f"sigma must be positive, got {sigma}")
    coefficients = pca.coefficients(ds.points)
    rows = []
    for sensor in ds.sensors:
        centered = sensor.values - sensor.values.mean(axis=0)
        solution, *_ = np.linalg.lstsq(coefficients, centered, rcond=None)
        rows.append(solution.T)
    return LinearSensorModel(rows=tuple(rows), prior_cov=pca.coefficient_covariance(), noise_var=sigma**2)


def _logdet(matrix: np.ndarray) -> float:
    sign, value = np.linalg.slogdet(matrix)
    if sign <= 0:
        raise InvalidArgumentError("matrix is not positive definite")
    return float(value)


def information_logdet(model: LinearSensorModel, selection: List[int]) -> float:
    """Dense log det(C_x^-1 + sum_{j in S} M_j^T M_j / sigma_j^2)."""
    info = np.linalg.inv(model.prior_cov)
    for j in selection:
        row = model.rows[j]
        info = info + row.T @ row / model.noise_var[j]
    return _logdet(info)


def greedy_bayes_dopt(model: LinearSensorModel, k: int, accelerated: bool = False) -> DOptimalResult:
    """
    Greedy Bayesian D-optimal selection of k sensors.

    Adding sensor j multiplies the posterior information determinant by
    det(I + M_j P M_j^T / sigma_j^2), where P is the current posterior
    covariance; P is then updated with the Woodbury identity. Ties go to the
    lowest index, as in every greedy run here.

    Raises:
        InvalidArgumentError: if the prior covariance is not positive definite
            or k is out of range
    """
    if not 1 <= k <= model.n_sensors:
        raise InvalidArgumentError(f"k must be in 1..{model.n_sensors}, got {k}")
    try:
        np.linalg.cholesky(model.prior_cov)
    except np.linalg.LinAlgError:
        raise InvalidArgumentError("prior covariance is not symmetric positive definite")

    posterior = model.prior_cov.copy()
    log_det_prior = -_logdet(model.prior_cov)

    def gain(j: int) -> float:
        row = model.rows[j]
        inner = np.eye(row.shape[0]) + row @ posterior @ row.T / model.noise_var[j]
        return _logdet(inner)

    def commit(j: int) -> float:
        nonlocal posterior
        row = model.rows[j]
        innovation = model.noise_var[j] * np.eye(row.shape[0]) + row @ posterior @ row.T
        kalman = posterior @ row.T @ np.linalg.inv(innovation)
        posterior = posterior - kalman @ row @ posterior
        posterior = 0.5 * (posterior + posterior.T)
        return -_logdet(posterior) - log_det_prior

    trace = run_greedy(model.n_sensors, k, gain, commit, accelerated)
    logger.info("bayes d-opt chose %s", trace.chosen)
    return DOptimalResult(
        chosen=trace.chosen,
        log_det=[log_det_prior + v for v in trace.values],
        gains=trace.increments,
        log_det_prior=log_det_prior,
    )
