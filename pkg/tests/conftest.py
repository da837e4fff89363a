"""
Shared fixtures: small random instances and the toy circle datasets.
"""

import numpy as np
import pytest

from secsel.controllers import dataset_controller, objective_controller
from secsel.models.dataset import DataSet, SensorGroup
from secsel.models.objective import ObjectiveSpec
from secsel.utils.parallel import configure_threads


def random_dataset(rng, n_states=30, n_sensors=8, target_dim=3, max_sensor_dim=2, name="random") -> DataSet:
    """Gaussian states, targets and sensor blocks of 1..max_sensor_dim columns."""
    sensors = [
        SensorGroup(id=j, values=rng.normal(size=(n_states, int(rng.integers(1, max_sensor_dim + 1)))))
        for j in range(n_sensors)
    ]
    return DataSet(
        points=rng.normal(size=(n_states, 5)),
        targets=rng.normal(size=(n_states, target_dim)),
        sensors=tuple(sensors),
        name=name,
    )


def all_specs():
    """One objective of each variant with thresholds that saturate part of the secants."""
    return [
        ObjectiveSpec.detectable_difference(gamma=1.0),
        ObjectiveSpec.separation(gamma=1.0, eps=1.5),
        ObjectiveSpec.amplification(lipschitz=1.5),
    ]


def unsaturated_specs():
    """Thresholds far from saturation, so marginal gains stay positive for several greedy steps."""
    return [
        ObjectiveSpec.detectable_difference(gamma=5.0),
        ObjectiveSpec.separation(gamma=5.0, eps=1.5),
        ObjectiveSpec.amplification(lipschitz=0.5),
    ]


@pytest.fixture(autouse=True)
def single_thread():
    configure_threads(1)
    yield
    configure_threads(1)


@pytest.fixture
def make_instance():
    """Factory: make_instance(seed, **sizes) -> (dataset, all secants)."""

    def build(seed, **sizes):
        ds = random_dataset(np.random.default_rng(seed), **sizes)
        return ds, objective_controller.build_secants_all(ds)

    return build


@pytest.fixture(scope="module")
def unit_toy():
    return dataset_controller.generate_toy_circle(4, 400, seed=3)


@pytest.fixture(scope="module")
def scaled_toy():
    return dataset_controller.generate_toy_circle(4, 1000, scales=(1.0, 1.0, 2.0, 2.0), seed=0)
