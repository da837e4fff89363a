import numpy as np
import pytest

from secsel.controllers import dataset_controller
from secsel.exceptions import InvalidArgumentError
from secsel.models.dataset import DataSet, SensorGroup
from secsel.utils.dataset_io import read_dataset, write_dataset, write_measurements, read_matrix


class TestToyCircle:
    def test_shapes_and_sensors(self):
        ds = dataset_controller.generate_toy_circle(6, 50, seed=1)
        assert ds.points.shape == (50, 6)
        assert np.array_equal(ds.targets, ds.points)
        assert ds.n_sensors == 6
        assert [s.label for s in ds.sensors] == ["x0", "x1", "x2", "x3", "x4", "x5"]
        assert ds.latent_names == ("theta",)

    def test_harmonic_pairs_lie_on_scaled_circles(self):
        ds = dataset_controller.generate_toy_circle(4, 200, scales=(1, 1, 2, 2), seed=2)
        x = ds.points
        assert np.allclose(x[:, 0] ** 2 + x[:, 1] ** 2, 2.0)
        assert np.allclose(x[:, 2] ** 2 + x[:, 3] ** 2, 8.0)

    def test_explicit_phases(self):
        phases = np.linspace(0, np.pi, 5)
        ds = dataset_controller.generate_toy_circle(2, 5, phases=phases)
        assert np.allclose(ds.points[:, 0], np.sqrt(2) * np.cos(phases))
        assert np.allclose(ds.latent[:, 0], phases)

    def test_same_seed_same_data(self):
        a = dataset_controller.generate_toy_circle(4, 30, seed=7)
        b = dataset_controller.generate_toy_circle(4, 30, seed=7)
        assert np.array_equal(a.points, b.points)

    @pytest.mark.parametrize("n", [0, 3, 5])
    def test_odd_or_zero_dimension_rejected(self, n):
        with pytest.raises(InvalidArgumentError):
            dataset_controller.generate_toy_circle(n, 10)

    def test_nonpositive_scale_rejected(self):
        with pytest.raises(InvalidArgumentError):
            dataset_controller.generate_toy_circle(4, 10, scales=(1, 1, 0, 1))


class TestTorus:
    def test_points_satisfy_torus_equation(self):
        ds = dataset_controller.generate_torus(300, seed=0)
        x, y, z = ds.points.T
        assert np.allclose((np.hypot(x, y) - 5.0) ** 2 + z**2, 1.0)

    def test_targets_start_empty(self):
        ds = dataset_controller.generate_torus(10, seed=0)
        assert ds.targets.shape == (10, 0)
        assert ds.n_sensors == 3
        assert ds.latent_names == ("theta1", "theta2")


class TestEpsilonNet:
    def test_line_example(self):
        net = dataset_controller.build_epsilon_net(np.array([[0.0], [1.0], [2.0]]), 0.6)
        assert net.cover_indices == (0, 2, 1)
        assert net.max_distance == 0.0

    def test_every_point_covered(self):
        points = np.random.default_rng(0).uniform(size=(400, 2))
        net = dataset_controller.build_epsilon_net(points, 0.1)
        gaps = np.linalg.norm(points[:, None, :] - points[list(net.cover_indices)][None, :, :], axis=2)
        assert gaps.min(axis=1).max() <= 0.1
        assert net.max_distance <= 0.1

    def test_radius_above_diameter_keeps_first_point(self):
        points = np.random.default_rng(1).uniform(size=(50, 3))
        net = dataset_controller.build_epsilon_net(points, 10.0)
        assert net.cover_indices == (0,)

    def test_radius_equal_to_diameter_keeps_first_point(self):
        net = dataset_controller.build_epsilon_net(np.array([[0.0], [1.0]]), 1.0)
        assert net.cover_indices == (0,)
        assert net.max_distance == 1.0

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(InvalidArgumentError):
            dataset_controller.build_epsilon_net(np.zeros((3, 1)), 0.0)


class TestNoiseAndSmoothing:
    def test_zero_noise_is_exact_copy(self, unit_toy):
        noisy = dataset_controller.add_gaussian_noise(unit_toy, 0.0)
        assert np.array_equal(noisy.targets, unit_toy.targets)
        assert noisy.targets is not unit_toy.targets
        assert all(np.array_equal(a.values, b.values) for a, b in zip(noisy.sensors, unit_toy.sensors))

    def test_noise_touches_sensors_and_targets_only(self, unit_toy):
        noisy = dataset_controller.add_gaussian_noise(unit_toy, 0.05, seed=3)
        assert np.array_equal(noisy.points, unit_toy.points)
        assert not np.array_equal(noisy.targets, unit_toy.targets)
        assert not np.array_equal(noisy.sensors[0].values, unit_toy.sensors[0].values)
        assert np.std(noisy.targets - unit_toy.targets) == pytest.approx(0.05, rel=0.1)

    def test_negative_sigma_rejected(self, unit_toy):
        with pytest.raises(InvalidArgumentError):
            dataset_controller.add_gaussian_noise(unit_toy, -0.1)

    def test_smoothing_with_k_one_is_identity(self, unit_toy):
        smoothed = dataset_controller.smooth_targets(unit_toy, 1)
        assert np.allclose(smoothed.targets, unit_toy.targets)

    @pytest.mark.parametrize("k", [0, 400, 401])
    def test_smoothing_k_out_of_range(self, unit_toy, k):
        with pytest.raises(InvalidArgumentError):
            dataset_controller.smooth_targets(unit_toy, k)


class TestDataSetValidation:
    def test_needs_two_states(self):
        with pytest.raises(InvalidArgumentError):
            DataSet(points=np.zeros((1, 2)), targets=np.zeros((1, 1)), sensors=())

    def test_sensor_ids_must_be_in_order(self):
        with pytest.raises(InvalidArgumentError):
            DataSet(
                points=np.zeros((3, 1)),
                targets=np.zeros((3, 1)),
                sensors=(SensorGroup(id=1, values=np.zeros(3)),),
            )

    def test_row_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            DataSet(points=np.zeros((3, 1)), targets=np.zeros((4, 1)), sensors=())

    def test_selection_checks(self, unit_toy):
        assert unit_toy.measurements([2, 0]).shape == (400, 2)
        with pytest.raises(InvalidArgumentError):
            unit_toy.measurements([0, 0])
        with pytest.raises(InvalidArgumentError):
            unit_toy.measurements([4])


class TestDatasetFiles:
    def test_toy_directory_round_trip(self, tmp_path):
        ds = dataset_controller.generate_toy_circle(4, 25, scales=(1, 1, 2, 2), seed=5)
        write_dataset(ds, str(tmp_path / "toy"))
        back = read_dataset(str(tmp_path / "toy"))
        assert back.name == ds.name
        assert np.array_equal(back.points, ds.points)
        assert np.array_equal(back.targets, ds.targets)
        assert [s.label for s in back.sensors] == [s.label for s in ds.sensors]
        assert np.array_equal(back.sensors[3].values, ds.sensors[3].values)
        assert np.array_equal(back.latent, ds.latent)

    def test_torus_without_targets(self, tmp_path):
        ds = dataset_controller.generate_torus(12, seed=1)
        write_dataset(ds, str(tmp_path / "torus"))
        assert not (tmp_path / "torus" / "targets.csv").exists()
        assert read_dataset(str(tmp_path / "torus")).targets.shape == (12, 0)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(InvalidArgumentError):
            read_dataset(str(tmp_path / "nope"))

    def test_measurements_file_has_latent_column(self, tmp_path):
        ds = dataset_controller.generate_toy_circle(4, 10, seed=0)
        path = str(tmp_path / "m.csv")
        write_measurements(ds, [0, 1], path)
        with open(path) as handle:
            assert handle.readline().strip() == "x0,x1,theta"
        assert read_matrix(path).shape == (10, 3)
