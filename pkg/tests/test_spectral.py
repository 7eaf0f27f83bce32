import numpy as np
import pytest
from scipy import integrate, stats

from qistats.circuits import CircuitEnsembleConfig, draw_circuit, realize_circuit
from qistats.convergence import spacing_distance
from qistats.spectral import (
    Histogram,
    eigenphases,
    poisson_law,
    spacings,
    wigner_cdf,
    wigner_surmise,
)
from qistats.streams import substream


class TestEigenphases:
    def test_identity(self):
        assert np.array_equal(eigenphases(np.eye(4)), np.zeros(4))

    def test_diagonal_phases(self):
        u = np.diag([1.0, 1j, -1.0, -1j])
        assert np.allclose(eigenphases(u), [0.0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=1e-12)

    def test_hadamard_has_phases_zero_and_pi(self):
        h = np.sqrt(0.5) * np.array([[1.0, 1.0], [1.0, -1.0]])
        assert np.allclose(eigenphases(h), [0.0, np.pi], atol=1e-12)

    def test_output_sorted_in_range(self):
        from qistats.haar import sample_cue

        for i in range(20):
            phases = eigenphases(sample_cue(16, substream(70, i)))
            assert np.all(np.diff(phases) >= 0)
            assert phases[0] >= 0.0 and phases[-1] < 2 * np.pi

    def test_similarity_invariance_under_permutation(self):
        from qistats.haar import sample_cue

        u = sample_cue(8, substream(71, 0))
        perm = np.eye(8)[substream(71, 1).permutation(8)]
        conjugated = perm @ u @ perm.T
        assert np.max(np.abs(eigenphases(conjugated) - eigenphases(u))) < 1e-8

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            eigenphases(2.0 * np.eye(3))


class TestSpacings:
    def test_equally_spaced_phases(self):
        n = 8
        phases = np.arange(n) * 2 * np.pi / n
        assert np.allclose(spacings(phases), 1.0, atol=1e-12)

    def test_sum_rule(self):
        from qistats.haar import sample_cue

        for i in range(10):
            s = spacings(eigenphases(sample_cue(12, substream(72, i))))
            assert s.size == 12
            assert abs(s.sum() - 12) < 1e-9
            assert np.all(s >= 0)

    def test_two_phase_hand_computation(self):
        # gaps pi/2 and 3pi/2, scaled by 2/(2 pi)
        assert np.allclose(spacings(np.array([0.0, np.pi / 2])), [0.5, 1.5], atol=1e-15)

    def test_needs_two_phases(self):
        with pytest.raises(ValueError):
            spacings(np.array([1.0]))


class TestReferenceLaws:
    def test_surmise_at_zero_and_one(self):
        assert wigner_surmise(0.0) == 0.0
        # 32/pi^2 * exp(-4/pi), frozen from a high-precision evaluation
        assert wigner_surmise(1.0) == pytest.approx(0.9075892109166814, rel=1e-12)

    def test_surmise_normalization_and_mean(self):
        norm, _ = integrate.quad(wigner_surmise, 0, np.inf)
        mean, _ = integrate.quad(lambda s: s * wigner_surmise(s), 0, np.inf)
        assert abs(norm - 1.0) < 1e-8
        assert abs(mean - 1.0) < 1e-8

    def test_cdf_is_antiderivative(self):
        for s in np.linspace(0.1, 3.5, 15):
            numeric, _ = integrate.quad(wigner_surmise, 0, s)
            assert abs(wigner_cdf(s) - numeric) < 1e-10
        assert wigner_cdf(0.0) == 0.0
        assert abs(wigner_cdf(50.0) - 1.0) < 1e-12

    def test_poisson_law(self):
        assert poisson_law(0.0) == 1.0
        assert poisson_law(2.0) == pytest.approx(np.exp(-2.0), rel=1e-14)

    def test_negative_arguments_rejected(self):
        for law in (wigner_surmise, wigner_cdf, poisson_law):
            with pytest.raises(ValueError):
                law(-0.5)


class TestHistogram:
    def test_counts_and_total(self):
        hist = Histogram(0.0, 1.0, 4)
        hist.add([0.1, 0.3, 0.6, 0.9, 1.0, 2.5])
        assert hist.counts.tolist() == [1, 1, 1, 2]  # 1.0 falls in the last bin
        assert hist.out_of_range == 1
        assert hist.total == 6

    def test_density_integrates_to_in_range_mass(self):
        hist = Histogram(0.0, 2.0, 8)
        hist.add([0.1, 0.5, 1.7, 3.0])
        integral = hist.densities().sum() * hist.bin_width
        assert integral == pytest.approx(0.75, rel=1e-12)

    def test_merge_is_commutative_and_adds(self):
        a = Histogram(0.0, 1.0, 10).add(substream(80, 0).random(1000))
        b = Histogram(0.0, 1.0, 10).add(substream(80, 1).random(500))
        ab = Histogram(0.0, 1.0, 10).merge(a).merge(b)
        ba = Histogram(0.0, 1.0, 10).merge(b).merge(a)
        assert np.array_equal(ab.counts, ba.counts)
        assert ab.total == 1500

    def test_merge_rejects_mismatched_binning(self):
        with pytest.raises(ValueError):
            Histogram(0.0, 1.0, 10).merge(Histogram(0.0, 1.0, 11))
        with pytest.raises(ValueError):
            Histogram(0.0, 1.0, 10).merge(Histogram(0.0, 2.0, 10))

    def test_empty_histogram_rejects_probabilities(self):
        with pytest.raises(ValueError):
            Histogram(0.0, 1.0, 4).probabilities()

    def test_csv_round_trip(self, tmp_path):
        hist = Histogram(0.0, 5.0, 25).add(substream(81, 0).random(2000) * 6)
        path = tmp_path / "hist.csv"
        hist.to_csv(path, {"source": "test"})
        restored = Histogram.from_csv(path)
        assert restored.same_binning(hist)
        assert np.array_equal(restored.counts, hist.counts)
        assert restored.out_of_range == hist.out_of_range

    def test_invalid_construction(self):
        with pytest.raises(ValueError):
            Histogram(1.0, 1.0, 4)
        with pytest.raises(ValueError):
            Histogram(0.0, 1.0, 0)


class TestSpectralStatistics:
    def test_cue_spacings_close_to_wigner_surmise(self, cue16_spacings):
        assert spacing_distance(cue16_spacings) < 0.02

    def test_uce_eigenphase_density_flat(self):
        # chi-squared uniformity test at the 1% level on 20 bins
        n_r, n_g = 1500, 12
        config = CircuitEnsembleConfig("uce", 4, n_g, 0.5)
        phases = np.concatenate(
            [
                eigenphases(realize_circuit(draw_circuit(config, substream(82, i))))
                for i in range(n_r)
            ]
        )
        counts, _ = np.histogram(phases, bins=20, range=(0.0, 2 * np.pi))
        result = stats.chisquare(counts)
        assert result.pvalue > 0.01

    def test_oce_eigenphase_peaks_decay_toward_orthogonal_level(self):
        # Real circuits carry extra weight at phi = 0 and pi (real
        # eigenvalues); a flat density is never reached, but the peak mass
        # must decay with the gate count toward the Haar-orthogonal level.
        from qistats.haar import sample_hoe

        def peak_mass(phase_rows):
            counts, _ = np.histogram(
                np.concatenate(phase_rows), bins=20, range=(0.0, 2 * np.pi)
            )
            return (counts[0] + counts[10]) / counts.sum()

        n_r = 800
        masses = []
        for n_g in (10, 40, 160):
            config = CircuitEnsembleConfig("oce", 4, n_g, 0.5)
            masses.append(
                peak_mass(
                    [
                        eigenphases(realize_circuit(draw_circuit(config, substream(83, n_g, i))))
                        for i in range(n_r)
                    ]
                )
            )
        hoe_level = peak_mass(
            [eigenphases(sample_hoe(16, substream(84, i))) for i in range(n_r)]
        )
        assert masses[0] > masses[1] > masses[2]
        assert masses[2] < 1.5 * hoe_level
