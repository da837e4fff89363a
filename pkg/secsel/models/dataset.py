"""
DataSet Model - Sampled States, Targets and Grouped Sensors

This file defines the containers every other module works on.

Key concepts:
- points: the sampled states x_i, one per row (N x n)
- targets: the quantities g(x_i) we want to reconstruct (N x q)
- sensors: an ordered list of SensorGroup; sensor j measures m_j(x_i),
           a d_j-dimensional vector per state
- latent: optional hidden variables kept by the synthetic generators
          (the phase of the toy model, the two torus angles) for diagnostics

Row i of every matrix refers to the same state.
"""

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from secsel.exceptions import InvalidArgumentError


@dataclass(frozen=True, eq=False)
class SensorGroup:
    """
    One selectable sensor: an N x d_j block of measurements.

    Example:
        SensorGroup(id=0, values=np.array([[0.1], [0.4]]), label="x0")
    """

    id: int
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[1] < 1:
            raise InvalidArgumentError(f"sensor {self.id} needs an N x d matrix with d >= 1")
        object.__setattr__(self, "values", values)
        if not self.label:
            object.__setattr__(self, "label", f"s{self.id}")

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class DataSet:
    """
    N sampled states with their targets and grouped sensor measurements.

    Targets may have zero columns right after generate_torus, until manifold
    coordinates are assigned; every secant operation requires q >= 1.
    """

    points: np.ndarray
    targets: np.ndarray
    sensors: Tuple[SensorGroup, ...]
    name: str = "dataset"
    latent: Optional[np.ndarray] = None
    latent_names: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        targets = np.asarray(self.targets, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if targets.ndim == 1:
            targets = targets[:, None]
        n_states = points.shape[0]
        if n_states < 2:
            raise InvalidArgumentError(f"a DataSet needs N >= 2 states, got {n_states}")
        if targets.shape[0] != n_states:
            raise InvalidArgumentError(
                f"targets have {targets.shape[0]} rows, points have {n_states}"
            )
        sensors = tuple(self.sensors)
        for position, sensor in enumerate(sensors):
            if sensor.values.shape[0] != n_states:
                raise InvalidArgumentError(
                    f"sensor {sensor.id} has {sensor.values.shape[0]} rows, expected {n_states}"
                )
            if sensor.id != position:
                raise InvalidArgumentError(
                    f"sensor ids must be 0..M-1 in order, found id {sensor.id} at position {position}"
                )
        latent = self.latent
        if latent is not None:
            latent = np.asarray(latent, dtype=float)
            if latent.ndim == 1:
                latent = latent[:, None]
            if latent.shape[0] != n_states or latent.shape[1] != len(self.latent_names):
                raise InvalidArgumentError("latent columns do not match latent_names or N")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "sensors", sensors)
        object.__setattr__(self, "latent", latent)
        object.__setattr__(self, "latent_names", tuple(self.latent_names))

    @property
    def n_states(self) -> int:
        return self.points.shape[0]

    @property
    def n_sensors(self) -> int:
        return len(self.sensors)

    @property
    def target_dim(self) -> int:
        return self.targets.shape[1]

    def measurements(self, selection: Sequence[int]) -> np.ndarray:
        """Stack the selected sensors side by side into an N x d_S matrix."""
        self.check_selection(selection)
        if len(selection) == 0:
            return np.zeros((self.n_states, 0))
        return np.hstack([self.sensors[j].values for j in selection])

    def check_selection(self, selection: Sequence[int]) -> List[int]:
        indices = [int(j) for j in selection]
        for j in indices:
            if j < 0 or j >= self.n_sensors:
                raise InvalidArgumentError(f"sensor index {j} outside 0..{self.n_sensors - 1}")
        if len(set(indices)) != len(indices):
            raise InvalidArgumentError(f"selection {indices} repeats a sensor")
        return indices

    def with_targets(self, targets: np.ndarray) -> "DataSet":
        return replace(self, targets=targets)

    def with_sensors(self, sensors: Sequence[SensorGroup]) -> "DataSet":
        return replace(self, sensors=tuple(sensors))

    def subset(self, rows: Sequence[int], name: Optional[str] = None) -> "DataSet":
        """Keep only the given rows (used for hold-out splits and nets)."""
        rows = np.asarray(rows, dtype=int)
        return DataSet(
            points=self.points[rows],
            targets=self.targets[rows],
            sensors=tuple(
                SensorGroup(id=s.id, values=s.values[rows], label=s.label) for s in self.sensors
            ),
            name=name or self.name,
            latent=None if self.latent is None else self.latent[rows],
            latent_names=self.latent_names,
        )


def coordinate_sensors(points: np.ndarray, prefix: str = "x") -> Tuple[SensorGroup, ...]:
    """One scalar sensor per column of ``points``."""
    return tuple(
        SensorGroup(id=j, values=points[:, [j]].copy(), label=f"{prefix}{j}")
        for j in range(points.shape[1])
    )


@dataclass(frozen=True, eq=False)
class NetReport:
    """
    Result of build_epsilon_net.

    cover_indices index into the reference points; every reference point lies
    strictly closer than ``radius`` to some cover point, and ``max_distance``
    records the largest distance-to-cover actually observed.
    """

    radius: float
    cover_indices: Tuple[int, ...]
    max_distance: float

    @property
    def size(self) -> int:
        return len(self.cover_indices)
