import itertools
import math

import numpy as np
import pytest

from secsel.controllers import dataset_controller, greedy_controller, objective_controller, sampling_controller
from secsel.exceptions import InvalidArgumentError
from secsel.models.objective import ObjectiveSpec

from conftest import random_dataset


class TestSampledSecants:
    def test_pairs_are_valid_and_reproducible(self, unit_toy):
        a = sampling_controller.sample_secant_pairs(unit_toy, 500, seed=4)
        b = sampling_controller.sample_secant_pairs(unit_toy, 500, seed=4)
        assert len(a) == 500
        assert a.kind == "sampled-pairs"
        assert a.normalization == pytest.approx(1 / 500)
        assert np.all(a.left != a.right)
        assert np.array_equal(a.left, b.left) and np.array_equal(a.right, b.right)
        assert a.consistent_with(unit_toy.targets)

    def test_two_states_always_pair_up(self):
        ds = dataset_controller.generate_toy_circle(2, 2, seed=0)
        secants = sampling_controller.sample_secant_pairs(ds, 50, seed=1)
        assert set(zip(secants.left.tolist(), secants.right.tolist())) <= {(0, 1), (1, 0)}

    def test_base_points(self, unit_toy):
        secants = sampling_controller.sample_base_points(unit_toy, 3, seed=2)
        assert len(secants) == 3 * (unit_toy.n_states - 1)
        assert secants.kind == "base-by-all"
        assert secants.normalization == pytest.approx(1 / (3 * unit_toy.n_states))
        assert np.all(secants.left != secants.right)
        assert len(np.unique(secants.left)) <= 3

    def test_single_base_point(self, unit_toy):
        secants = sampling_controller.sample_base_points(unit_toy, 1, seed=0)
        assert len(secants) == unit_toy.n_states - 1
        assert len(np.unique(secants.right)) == unit_toy.n_states - 1

    @pytest.mark.parametrize("sampler", [sampling_controller.sample_secant_pairs, sampling_controller.sample_base_points])
    def test_zero_samples_rejected(self, unit_toy, sampler):
        with pytest.raises(InvalidArgumentError):
            sampler(unit_toy, 0)

    def test_amplification_on_base_points_is_unnormalized(self, unit_toy):
        secants = sampling_controller.sample_base_points(unit_toy, 2, seed=0)
        spec = ObjectiveSpec.amplification(1.0)
        assert objective_controller.effective_normalization(spec, secants) == 1.0
        dd = ObjectiveSpec.detectable_difference(1.0)
        assert objective_controller.effective_normalization(dd, secants) == secants.normalization

    def test_sampled_objective_is_unbiased(self):
        ds = random_dataset(np.random.default_rng(0), n_states=50)
        spec = ObjectiveSpec.detectable_difference(1.0)
        selection = [0, 3]
        full = objective_controller.build_secants_all(ds)
        expected = objective_controller.eval_objective(spec, ds, full, selection).value / len(full)

        estimates = np.array(
            [
                objective_controller.eval_objective(
                    spec, ds, sampling_controller.sample_secant_pairs(ds, 50, seed=seed), selection
                ).value
                for seed in range(200)
            ]
        )
        standard_error = estimates.std(ddof=1) / math.sqrt(len(estimates))
        assert abs(estimates.mean() - expected) < 4 * standard_error

    def test_uniform_accuracy_over_small_sets(self):
        """The pairs formula keeps every set of at most L sensors within eps, except with probability p."""
        rng = np.random.default_rng(3)
        ds = random_dataset(rng, n_states=40, n_sensors=8, target_dim=1, max_sensor_dim=1)
        ds = ds.with_targets(rng.uniform(0.0, 1.0, size=(40, 1)))
        spec = ObjectiveSpec.detectable_difference(0.5)
        full = objective_controller.build_secants_all(ds)
        diameter = sampling_controller.estimate_target_diameter(ds)
        eps, p, max_sensors = 0.05, 0.1, 2
        m = sampling_controller.pairs_sample_size(diameter, eps, max_sensors, ds.n_sensors, p).m

        small_sets = [list(s) for k in range(1, max_sensors + 1) for s in itertools.combinations(range(8), k)]
        exact = {
            tuple(s): objective_controller.eval_objective(spec, ds, full, s).value / len(full) for s in small_sets
        }
        failures = 0
        resamples = 500
        for seed in range(resamples):
            sample = sampling_controller.sample_secant_pairs(ds, m, seed=seed)
            worst = max(
                abs(objective_controller.eval_objective(spec, ds, sample, s).value - exact[tuple(s)])
                for s in small_sets
            )
            failures += worst >= eps
        assert failures / resamples <= p


class TestSampledGreedy:
    def test_greedy_on_sampled_pairs_keeps_its_guarantee(self):
        """Greedy on m sampled pairs meets the additive guarantee against the exact optimum, except with probability p."""
        rng = np.random.default_rng(11)
        ds = random_dataset(rng, n_states=40, n_sensors=8, target_dim=1, max_sensor_dim=1)
        ds = ds.with_targets(rng.uniform(0.0, 1.0, size=(40, 1)))
        spec = ObjectiveSpec.detectable_difference(0.5)
        full = objective_controller.build_secants_all(ds)
        diameter = sampling_controller.estimate_target_diameter(ds)
        eps, p, budget = 0.05, 0.1, 2
        m = sampling_controller.pairs_sample_size(diameter, eps, budget, ds.n_sensors, p).m

        def exact(selection):
            return objective_controller.eval_objective(spec, ds, full, selection).value / len(full)

        best = max(exact(list(s)) for s in itertools.combinations(range(ds.n_sensors), budget))
        factor, additive = greedy_controller.sampled_greedy_guarantee(budget, budget, eps)
        failures = 0
        resamples = 200
        for seed in range(resamples):
            sample = sampling_controller.sample_secant_pairs(ds, m, seed=seed)
            trace = greedy_controller.greedy_maximize(spec, ds, sample, budget)
            failures += exact(trace.chosen) < factor * best - additive
        assert failures / resamples <= p


class TestSampleSizes:
    def test_pairs_example(self):
        report = sampling_controller.pairs_sample_size(1.0, 0.1, 3, 10, 0.05)
        assert report.m == 496
        assert report.formula_id == "pairs-uniform"
        assert report.inputs["L"] == 3

    def test_pairs_single_sensor_has_no_factorial(self):
        report = sampling_controller.pairs_sample_size(1.0, 0.1, 1, 10, 0.05)
        assert report.exact == pytest.approx(50 * (math.log(10) - math.log(0.025)))

    def test_cover_example(self):
        assert sampling_controller.cover_sample_size(1.0, 0.2, 10, 0.05).m == 3103

    def test_base_examples(self):
        assert sampling_controller.base_sample_size(0.1, 20, 0.05).m == 843
        assert sampling_controller.base_sample_size(0.5, 1, 0.5).m == 3

    def test_diameter_scaling(self):
        one = sampling_controller.pairs_sample_size(1.0, 0.1, 3, 10, 0.05).exact
        two = sampling_controller.pairs_sample_size(2.0, 0.1, 3, 10, 0.05).exact
        assert two == pytest.approx(16 * one)

    def test_monotone_in_eps_and_sensors(self):
        sizes = [sampling_controller.cover_sample_size(1.0, eps, 10, 0.05).m for eps in (0.2, 0.3, 0.4)]
        assert sizes == sorted(sizes, reverse=True)
        bases = [sampling_controller.base_sample_size(0.1, m, 0.05).m for m in (1, 10, 100)]
        assert bases == sorted(bases)

    def test_cover_size_as_p_approaches_one(self):
        report = sampling_controller.cover_sample_size(1.0, 0.5, 4, 1 - 1e-12)
        assert report.exact == pytest.approx(4 * math.log(2) / (2 * 0.5**4), rel=1e-9)

    def test_empirical_diameter_flag(self):
        report = sampling_controller.cover_sample_size(1.0, 0.3, 10, 0.05, diameter_is_empirical=True)
        assert report.diameter_is_empirical

    @pytest.mark.parametrize(
        "call",
        [
            lambda: sampling_controller.pairs_sample_size(1.0, 0.1, 11, 10, 0.05),
            lambda: sampling_controller.pairs_sample_size(1.0, 0.0, 3, 10, 0.05),
            lambda: sampling_controller.cover_sample_size(1.0, 0.1, 10, 1.0),
            lambda: sampling_controller.base_sample_size(1.0, 10, 0.05),
            lambda: sampling_controller.base_sample_size(0.1, 0, 0.05),
        ],
    )
    def test_invalid_inputs(self, call):
        with pytest.raises(InvalidArgumentError):
            call()


class TestDiameter:
    def test_two_points(self):
        ds = dataset_controller.generate_toy_circle(2, 2, phases=[0.0, np.pi])
        assert sampling_controller.estimate_target_diameter(ds) == pytest.approx(2 * math.sqrt(2))

    def test_bounds_every_secant(self, unit_toy, monkeypatch):
        monkeypatch.setattr(sampling_controller, "DIAMETER_CHUNK", 64)
        diameter = sampling_controller.estimate_target_diameter(unit_toy)
        secants = sampling_controller.sample_secant_pairs(unit_toy, 2000, seed=0)
        assert diameter**2 >= secants.target_gap2.max() * (1 - 1e-12)
        assert diameter == pytest.approx(math.sqrt(12.5), rel=0.01)
