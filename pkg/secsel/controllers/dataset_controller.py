"""
Dataset Controller - Synthetic Examples and Preprocessing

This module creates the datasets used throughout the project and prepares
noisy data for selection.

Generators:
- generate_toy_circle: states driven by one hidden phase theta,
      x_{2k-1} = a_{2k-1} sqrt(2) cos(k theta),  x_{2k} = a_{2k} sqrt(2) sin(k theta)
  Every coordinate is also a scalar sensor and the targets are the states.
- generate_torus: points on a torus in R^3 parameterized by two angles.

Preprocessing:
- build_epsilon_net: pick a subset so that every point is close to it
- add_gaussian_noise: corrupt sensors and targets
- smooth_targets: replace each target by a k-nearest-neighbor average

Every random operation takes an explicit seed and uses numpy's PCG64 generator.
"""

import logging
from typing import Optional, Sequence, Union

import numpy as np
from sklearn.neighbors import NearestNeighbors

from secsel.exceptions import InvalidArgumentError
from secsel.models.dataset import DataSet, NetReport, SensorGroup, coordinate_sensors

logger = logging.getLogger(__name__)

TORUS_MAJOR_RADIUS = 5.0


def generate_toy_circle(
    n: int,
    n_samples: int,
    scales: Union[float, Sequence[float]] = 1.0,
    seed: int = 0,
    phases: Optional[Sequence[float]] = None,
) -> DataSet:
    """
    Sample the toy model whose states all lie on a closed curve.

    Args:
        n: state dimension, must be even
        n_samples: number of states N
        scales: one positive scale per coordinate, or a single scale for all
        seed: random seed for the phases
        phases: explicit phases; when given, n_samples must match and no
                random draw happens

    Returns:
        DataSet with targets equal to the states, n scalar sensors and the
        phase kept as the latent column "theta"

    Example:
        ds = generate_toy_circle(4, 1000, scales=(1, 1, 2, 2), seed=0)
    """
    if n < 2 or n % 2:
        raise InvalidArgumentError(f"n must be a positive even integer, got {n}")
    if n_samples < 2:
        raise InvalidArgumentError(f"need at least 2 samples, got {n_samples}")
    alpha = np.broadcast_to(np.asarray(scales, dtype=float), (n,)).copy()
    if np.any(alpha <= 0):
        raise InvalidArgumentError("every scale must be positive")

    if phases is None:
        rng = np.random.default_rng(seed)
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n_samples)
    else:
        theta = np.asarray(phases, dtype=float)
        if theta.shape != (n_samples,):
            raise InvalidArgumentError("phases must have one entry per sample")

    points = np.empty((n_samples, n))
    for k in range(1, n // 2 + 1):
        points[:, 2 * k - 2] = np.sqrt(2.0) * np.cos(k * theta)
        points[:, 2 * k - 1] = np.sqrt(2.0) * np.sin(k * theta)
    points *= alpha

    logger.info("toy circle: n=%d N=%d scales=%s", n, n_samples, alpha.tolist())
    return DataSet(
        points=points,
        targets=points.copy(),
        sensors=coordinate_sensors(points),
        name=f"toy-n{n}",
        latent=theta[:, None],
        latent_names=("theta",),
    )


def torus_point(theta1: np.ndarray, theta2: np.ndarray) -> np.ndarray:
    """Map angle pairs to ((5 + cos t2) cos t1, (5 + cos t2) sin t1, sin t2)."""
    radius = TORUS_MAJOR_RADIUS + np.cos(theta2)
    return np.column_stack([radius * np.cos(theta1), radius * np.sin(theta1), np.sin(theta2)])


def generate_torus(n_samples: int, seed: int = 0) -> DataSet:
    """
    Sample N points on the torus with i.i.d. uniform angles.

    The targets start with zero columns; assign_targets_from_embedding fills
    them in. The three coordinates are registered as scalar sensors and the
    angles are kept as latent columns "theta1" and "theta2".
    """
    if n_samples < 2:
        raise InvalidArgumentError(f"need at least 2 samples, got {n_samples}")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2.0 * np.pi, size=(n_samples, 2))
    points = torus_point(angles[:, 0], angles[:, 1])
    logger.info("torus: N=%d seed=%d", n_samples, seed)
    return DataSet(
        points=points,
        targets=np.zeros((n_samples, 0)),
        sensors=coordinate_sensors(points),
        name="torus",
        latent=angles,
        latent_names=("theta1", "theta2"),
    )


def build_epsilon_net(points: np.ndarray, radius: float) -> NetReport:
    """
    Greedy farthest-point cover of a point set.

    Starting from point 0, repeatedly add the point farthest from the current
    cover until every point is within ``radius`` of it (closed balls, so a
    radius of at least the diameter keeps point 0 alone).

    Example:
        net = build_epsilon_net(np.array([[0.0], [1.0], [2.0]]), 0.6)
        # net.cover_indices == (0, 2, 1)
    """
    if not radius > 0:
        raise InvalidArgumentError(f"radius must be positive, got {radius}")
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]

    distance = np.linalg.norm(points - points[0], axis=1)
    cover = [0]
    while True:
        farthest = int(np.argmax(distance))
        if distance[farthest] <= radius:
            break
        cover.append(farthest)
        distance = np.minimum(distance, np.linalg.norm(points - points[farthest], axis=1))

    logger.info("epsilon net: %d of %d points at radius %g", len(cover), len(points), radius)
    return NetReport(radius=float(radius), cover_indices=tuple(cover), max_distance=float(distance.max()))


def add_gaussian_noise(ds: DataSet, sigma: float, seed: int = 0) -> DataSet:
    """
    Add independent N(0, sigma^2) noise to every sensor entry and target entry.

    Points and latent columns are left alone. sigma = 0 returns an exact copy.
    """
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return ds.with_sensors(
            [SensorGroup(id=s.id, values=s.values.copy(), label=s.label) for s in ds.sensors]
        ).with_targets(ds.targets.copy())

    rng = np.random.default_rng(seed)
    sensors = [
        SensorGroup(id=s.id, values=s.values + rng.normal(0.0, sigma, s.values.shape), label=s.label)
        for s in ds.sensors
    ]
    targets = ds.targets + rng.normal(0.0, sigma, ds.targets.shape)
    logger.info("added noise sigma=%g to %d sensors and %d targets", sigma, len(sensors), ds.target_dim)
    return ds.with_sensors(sensors).with_targets(targets)


def smooth_targets(ds: DataSet, k: int) -> DataSet:
    """
    Replace every target by the mean target of its k nearest neighbors.

    Neighbors are found in the space of all sensor measurements stacked
    together, and each state counts as its own neighbor. Sensors are unchanged.
    """
    if not 1 <= k < ds.n_states:
        raise InvalidArgumentError(f"k must be in 1..{ds.n_states - 1}, got {k}")
    full = ds.measurements(range(ds.n_sensors))
    neighbors = NearestNeighbors(n_neighbors=k).fit(full).kneighbors(full, return_distance=False)
    smoothed = ds.targets[neighbors].mean(axis=1)
    return ds.with_targets(smoothed)
