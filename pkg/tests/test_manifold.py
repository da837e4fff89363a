import numpy as np
import pytest

from secsel.controllers import dataset_controller, manifold_controller
from secsel.exceptions import GraphDisconnectedError, InvalidArgumentError
from secsel.utils.parallel import configure_threads


def circle(n_points, radius=1.0):
    t = 2 * np.pi * np.arange(n_points) / n_points
    return radius * np.column_stack([np.cos(t), np.sin(t)])


class TestWeightedPCA:
    def test_modes_orthonormal_in_weighted_inner_product(self):
        rng = np.random.default_rng(0)
        data = rng.normal(size=(60, 5)) @ rng.normal(size=(5, 5))
        weights = rng.uniform(0.5, 2.0, size=5)
        model = manifold_controller.weighted_pca(data, weights)
        gram = model.modes.T @ (weights[:, None] * model.modes)
        assert np.allclose(gram, np.eye(5), atol=1e-10)

    def test_full_rank_reconstructs_data(self):
        data = np.random.default_rng(1).normal(size=(40, 4))
        model = manifold_controller.weighted_pca(data)
        assert np.allclose(model.reconstruct(model.coefficients(data)), data)

    def test_coefficient_covariance_matches_sample_covariance(self):
        ds = dataset_controller.generate_toy_circle(4, 20000, scales=(1, 1, 2, 2), seed=0)
        model = manifold_controller.weighted_pca(ds.points)
        coefficients = model.coefficients(ds.points)
        empirical = coefficients.T @ coefficients / ds.n_states
        assert np.allclose(model.coefficient_covariance(), empirical, atol=0.05)
        assert np.allclose(np.sort(np.diag(model.coefficient_covariance())), [1, 1, 4, 4], atol=0.1)

    def test_unit_toy_singular_values_are_flat(self):
        ds = dataset_controller.generate_toy_circle(4, 100000, seed=1)
        model = manifold_controller.weighted_pca(ds.points)
        energy = model.singular_values**2 / ds.n_states
        assert np.allclose(energy, 1.0, rtol=0.02)

    def test_variance_fraction_bound_on_unit_toy(self):
        ds = dataset_controller.generate_toy_circle(10, 20000, seed=2)
        model = manifold_controller.weighted_pca(ds.points)
        assert manifold_controller.variance_fraction_bound(model, 2) == pytest.approx(0.2, abs=0.02)
        assert manifold_controller.variance_fraction_bound(model, 10) == pytest.approx(1.0)

    def test_variance_fraction_bound_on_scaled_toy(self):
        ds = dataset_controller.generate_toy_circle(4, 20000, scales=(1, 1, 2, 2), seed=3)
        model = manifold_controller.weighted_pca(ds.points)
        assert manifold_controller.variance_fraction_bound(model, 2) == pytest.approx(0.8, abs=0.02)

    @pytest.mark.parametrize("r", [0, 5])
    def test_rank_out_of_range(self, r):
        with pytest.raises(InvalidArgumentError):
            manifold_controller.weighted_pca(np.zeros((10, 4)), r=r)

    def test_nonpositive_weights(self):
        with pytest.raises(InvalidArgumentError):
            manifold_controller.weighted_pca(np.zeros((10, 2)), weights=np.array([1.0, 0.0]))

    def test_bound_d_out_of_range(self):
        model = manifold_controller.weighted_pca(np.random.default_rng(0).normal(size=(10, 3)))
        with pytest.raises(InvalidArgumentError):
            manifold_controller.variance_fraction_bound(model, 4)


class TestIsomap:
    def test_geodesics_on_a_circle(self):
        points = circle(100)
        distances = manifold_controller.geodesic_distances(points, 2)
        step = 2 * np.sin(np.pi / 100)
        assert np.allclose(distances, distances.T)
        assert distances[0, 50] == pytest.approx(50 * step)
        assert np.all(distances >= np.linalg.norm(points[:, None] - points[None], axis=2) - 1e-12)

    def test_circle_embedding(self):
        emb = manifold_controller.isomap(circle(200), k_neighbors=4, r=2)
        assert emb.rank == 2
        assert not emb.truncated
        assert emb.eigenvalues[1] == pytest.approx(emb.eigenvalues[0], rel=0.05)
        assert np.allclose(emb.coordinates.mean(axis=0), 0.0, atol=1e-8)
        radius = np.linalg.norm(emb.coordinates, axis=1)
        assert radius.std() < 0.05 * radius.mean()

    def test_sign_normalization(self):
        emb = manifold_controller.isomap(circle(60), k_neighbors=4, r=2)
        largest = np.argmax(np.abs(emb.coordinates), axis=0)
        assert np.all(emb.coordinates[largest, [0, 1]] > 0)

    def test_collinear_points_truncate(self):
        points = np.column_stack([np.arange(20.0), np.zeros(20)])
        emb = manifold_controller.isomap(points, k_neighbors=3, r=5)
        assert emb.truncated
        assert emb.rank == 1
        assert emb.requested_rank == 5

    def test_disconnected_graph(self):
        points = np.vstack([np.zeros((5, 2)), np.ones((5, 2)) * 100]) + np.arange(10)[:, None] * 1e-3
        with pytest.raises(GraphDisconnectedError) as info:
            manifold_controller.isomap(points, k_neighbors=2, r=2)
        assert info.value.code == "graph-disconnected"
        assert info.value.components == 2

    def test_iterative_solver_matches_dense(self, monkeypatch):
        points = circle(60) + np.random.default_rng(0).normal(scale=0.01, size=(60, 2))
        dense = manifold_controller.isomap(points, k_neighbors=4, r=3)
        monkeypatch.setattr(manifold_controller, "DENSE_EIGEN_LIMIT", 10)
        sparse = manifold_controller.isomap(points, k_neighbors=4, r=3)
        assert np.allclose(sparse.eigenvalues[:2], dense.eigenvalues[:2], rtol=1e-6)

    def test_thread_count_does_not_change_distances(self):
        points = np.random.default_rng(3).normal(size=(150, 3))
        one = manifold_controller.geodesic_distances(points, 8)
        configure_threads(4)
        many = manifold_controller.geodesic_distances(points, 8)
        assert np.array_equal(one, many)

    def test_double_center_rows_sum_to_zero(self):
        d2 = np.random.default_rng(0).uniform(size=(6, 6))
        gram = manifold_controller.double_center(d2 + d2.T)
        assert np.allclose(gram.sum(axis=0), 0.0)
        assert np.allclose(gram, gram.T)


class TestAssignTargets:
    def test_assign_and_register(self):
        ds = dataset_controller.generate_torus(200, seed=0)
        emb = manifold_controller.isomap(ds.points, k_neighbors=10, r=3)
        out = manifold_controller.assign_targets_from_embedding(ds, emb, [0, 2], register_sensors=True)
        assert out.targets.shape == (200, 2)
        assert [s.label for s in out.sensors] == ["phi1", "phi3"]
        assert np.array_equal(out.sensors[1].values[:, 0], emb.coordinates[:, 2])

    def test_bad_column(self):
        ds = dataset_controller.generate_torus(200, seed=0)
        emb = manifold_controller.isomap(ds.points, k_neighbors=10, r=2)
        with pytest.raises(InvalidArgumentError):
            manifold_controller.assign_targets_from_embedding(ds, emb, [2])
