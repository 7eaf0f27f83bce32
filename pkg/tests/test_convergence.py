import numpy as np
import pytest
from scipy import integrate

from qistats.convergence import (
    DistanceCurve,
    cdf_bin_masses,
    fit_exponential_rate,
    fit_gaussian_rate,
    hellinger_sq,
    hellinger_sq_stderr,
    interference_distance,
    spacing_distance,
)
from qistats.spectral import Histogram, wigner_cdf, wigner_surmise
from qistats.streams import substream


def filled(bins, values, lower=0.0, upper=1.0):
    return Histogram(lower, upper, bins).add(values)


class TestHellinger:
    def test_identical_histograms(self):
        values = substream(90, 0).random(5000)
        a = filled(20, values)
        b = filled(20, values)
        assert hellinger_sq(a, b) < 1e-12

    def test_disjoint_supports(self):
        a = filled(4, [0.1] * 100)
        b = filled(4, [0.9] * 100)
        assert hellinger_sq(a, b) == 2.0

    def test_hand_evaluated_two_bin_case(self):
        # (1, 0) against (1/2, 1/2): 2 (1 - sqrt(1/2))
        value = hellinger_sq(np.array([1.0, 0.0]), np.array([0.5, 0.5]))
        assert value == pytest.approx(2 - np.sqrt(2.0), abs=1e-12)

    def test_half_overlapping_uniform_histograms(self):
        # uniform over bins {0,1} vs {1,2} on four bins: affinity 1/2
        p = np.array([0.5, 0.5, 0.0, 0.0])
        q = np.array([0.0, 0.5, 0.5, 0.0])
        assert hellinger_sq(p, q) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_and_bounded(self):
        for i in range(20):
            a = filled(15, substream(91, i, 0).random(400))
            b = filled(15, substream(91, i, 1).random(300) ** 2)
            f_ab = hellinger_sq(a, b)
            f_ba = hellinger_sq(b, a)
            assert f_ab == f_ba
            assert 0.0 <= f_ab <= 2.0

    def test_binning_mismatch_rejected(self):
        with pytest.raises(ValueError):
            hellinger_sq(filled(10, [0.5]), filled(11, [0.5]))
        with pytest.raises(ValueError):
            hellinger_sq(filled(10, [0.5]), filled(10, [0.5], upper=2.0))
        with pytest.raises(ValueError):
            hellinger_sq(np.full(4, 0.25), np.full(5, 0.2))

    def test_empty_histogram_rejected(self):
        with pytest.raises(ValueError):
            hellinger_sq(Histogram(0.0, 1.0, 5), filled(5, [0.5]))

    def test_stderr_shrinks_with_samples(self):
        q = cdf_bin_masses(wigner_cdf, np.linspace(0, 5, 101))
        small = filled(100, substream(92, 0).random(1000) * 3, upper=5.0)
        large = filled(100, substream(92, 1).random(100_000) * 3, upper=5.0)
        se_small = hellinger_sq_stderr(small.probabilities(), q, small.total)
        se_large = hellinger_sq_stderr(large.probabilities(), q, large.total)
        assert 0.0 < se_large < se_small


class TestSpacingDistance:
    def test_self_consistency_floor(self):
        # inverse-CDF sampling from the surmise itself
        grid = np.linspace(0.0, 6.0, 20_001)
        cdf = wigner_cdf(grid)
        draws = np.interp(substream(93, 0).random(1_000_000), cdf, grid)
        assert spacing_distance(draws) < 0.005

    def test_poisson_sample_matches_quadrature_gap(self):
        draws = substream(93, 1).exponential(size=1_000_000)
        expected_affinity, _ = integrate.quad(
            lambda s: np.sqrt(wigner_surmise(s) * np.exp(-s)), 0, np.inf
        )
        expected = 2.0 * (1.0 - expected_affinity)
        assert spacing_distance(draws) == pytest.approx(expected, abs=0.02)

    def test_constant_spacings_single_bin(self):
        values = np.ones(2000)
        edges = np.linspace(0.0, 5.0, 101)
        bin_index = np.searchsorted(edges, 1.0, side="right") - 1
        mass = wigner_cdf(edges[bin_index + 1]) - wigner_cdf(edges[bin_index])
        assert spacing_distance(values) == pytest.approx(2 * (1 - np.sqrt(mass)), abs=1e-12)

    def test_requires_enough_samples(self):
        with pytest.raises(ValueError):
            spacing_distance(np.ones(999))


class TestInterferenceDistance:
    def test_reference_against_itself(self):
        values = substream(94, 0).random(20_000) * 15
        assert interference_distance(filled(100, values, upper=15.0), filled(100, values, upper=15.0)) < 1e-12

    def test_uce_converges_toward_cue_reference(self, ensemble_batches):
        from qistats.circuits import CircuitEnsembleConfig, draw_circuit, realize_circuit
        from qistats.interference import interference

        reference = filled(100, 16.0 - ensemble_batches("cue", 16)["sum4"], upper=15.0)
        distances = {}
        for n_g in (10, 100):
            config = CircuitEnsembleConfig("uce", 4, n_g, 0.5)
            values = [
                interference(realize_circuit(draw_circuit(config, substream(95, n_g, i))))
                for i in range(800)
            ]
            distances[n_g] = interference_distance(filled(100, values, upper=15.0), reference)
        assert distances[100] < distances[10]


def exponential_curve(rate, amplitude, gate_counts):
    return DistanceCurve([(g, amplitude * np.exp(-rate * g)) for g in gate_counts])


class TestRateFits:
    def test_exact_exponential_recovery(self):
        curve = exponential_curve(0.1, 2.0, range(0, 30, 3))
        fit = fit_exponential_rate(curve)
        assert fit.kind == "exponential"
        assert fit.rate == pytest.approx(0.1, abs=1e-10)
        assert fit.intercept == pytest.approx(np.log(2.0), abs=1e-10)
        assert fit.residual < 1e-12
        assert fit.points_used == 10
        assert fit.window == (2.0, 0.1)

    def test_exact_gaussian_recovery(self):
        # gate counts start at 40 so every F = e^{1 - 2e-4 g^2} stays <= 2
        gate_counts = range(40, 101, 6)
        curve = DistanceCurve([(g, np.exp(1.0 - 2e-4 * g * g)) for g in gate_counts])
        fit = fit_gaussian_rate(curve)
        assert fit.kind == "gaussian"
        assert fit.rate == pytest.approx(2e-4, abs=1e-10)
        assert fit.intercept == pytest.approx(1.0, abs=1e-10)
        assert fit.window == (2.0, 0.01)

    def test_gaussian_decay_through_exponential_fitter_is_flagged_by_residual(self):
        curve = DistanceCurve([(g, np.exp(-1e-3 * g * g)) for g in range(10, 46, 5)])
        fit = fit_exponential_rate(curve)
        assert fit.rate > 0.0
        assert fit.residual > 0.02

    def test_saturation_floor_excluded_from_window(self):
        gate_counts = list(range(0, 40, 4))
        floor = 0.05
        points = [(g, max(2.0 * np.exp(-0.2 * g), floor)) for g in gate_counts]
        fit = fit_exponential_rate(DistanceCurve(points))
        assert fit.points_used == sum(1 for _, f in points if f >= 0.1)
        assert fit.rate == pytest.approx(0.2, abs=1e-10)

    def test_rate_invariant_under_rescaling(self):
        gate_counts = range(0, 36, 5)
        base = exponential_curve(0.05, 0.6, gate_counts)
        scaled = DistanceCurve([(g, 3.0 * f) for g, f in base.points])
        assert fit_exponential_rate(scaled).rate == pytest.approx(
            fit_exponential_rate(base).rate, abs=1e-12
        )

    def test_too_few_in_window_points(self):
        with pytest.raises(ValueError):
            fit_exponential_rate(DistanceCurve([(10, 0.05), (20, 0.01), (30, 0.005)]))

    def test_stderr_reflects_noise(self):
        gate_counts = list(range(0, 40, 2))
        noise = substream(96, 0).normal(0, 0.05, len(gate_counts))
        points = [
            (g, float(np.exp(np.log(1.5) - 0.08 * g + e))) for g, e in zip(gate_counts, noise)
        ]
        fit = fit_exponential_rate(DistanceCurve(points))
        assert fit.rate_stderr > 0.0
        assert abs(fit.rate - 0.08) < 5 * fit.rate_stderr


class TestDistanceCurve:
    def test_gate_counts_must_increase(self):
        with pytest.raises(ValueError):
            DistanceCurve([(10, 0.5), (10, 0.4)])
        with pytest.raises(ValueError):
            DistanceCurve([(20, 0.5), (10, 0.4)])

    def test_distance_bounds_enforced(self):
        with pytest.raises(ValueError):
            DistanceCurve([(10, 2.5)])
        with pytest.raises(ValueError):
            DistanceCurve([(10, -0.1)])

    def test_csv_round_trip(self, tmp_path):
        curve = DistanceCurve(
            [(10, 1.5), (20, 0.7), (40, 0.2)],
            {"ensemble": "uce", "qubits": "4"},
            [0.01, 0.008, 0.005],
        )
        path = tmp_path / "curve.csv"
        curve.to_csv(path)
        restored = DistanceCurve.from_csv(path)
        assert restored.points == curve.points
        assert restored.stderrs == curve.stderrs
        assert restored.metadata["ensemble"] == "uce"
