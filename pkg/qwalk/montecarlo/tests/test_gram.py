"""Tests for torus Gram sampling, Monte Carlo moments and spectra."""

import csv

import numpy as np
import pytest

from qwalk.freeprob import free_poisson_law
from qwalk.montecarlo import (
    gram_stream,
    histogram_csv,
    mc_moment,
    mc_spectrum,
    reference_law,
    sample_gram,
    spectrum_ks,
)


@pytest.fixture(scope="module")
def square_spectrum():
    return mc_spectrum(16, 16, samples=300, seed=3, bins=40)


class TestGramSampling:
    """A(q) = q q* for uniform q on the torus."""

    def test_diagonal_and_hermitian(self):
        """Test A_ii = N and A = A*."""
        A = sample_gram(4, 7, seed=1, counter=5).matrix
        assert np.allclose(np.diag(A), 7.0, atol=1e-10)
        assert np.allclose(A, A.conj().T, atol=1e-10)

    def test_single_row(self):
        """Test M = 1 gives A = [N]."""
        A = sample_gram(1, 5, seed=0).matrix
        assert A.shape == (1, 1)
        assert A[0, 0] == pytest.approx(5.0, abs=1e-10)

    def test_positive_semidefinite(self):
        """Test that eigenvalues are nonnegative and rank is at most N."""
        A = sample_gram(6, 3, seed=2).matrix
        eigs = np.linalg.eigvalsh(A)
        assert eigs.min() > -1e-10
        assert np.sum(eigs > 1e-8) == 3

    def test_offdiagonal_second_moment(self):
        """Test E|A_ij|^2 = N for i != j within 5%."""
        A = gram_stream(3, 4, seed=0, chunk=0, size=10_000)
        assert np.mean(np.abs(A[:, 0, 1]) ** 2) == pytest.approx(4.0, rel=0.05)

    def test_chunks_are_reproducible(self):
        """Test that a chunk is regenerated bit-identically."""
        assert np.array_equal(gram_stream(3, 3, 9, 4, 10), gram_stream(3, 3, 9, 4, 10))
        assert not np.array_equal(gram_stream(3, 3, 9, 4, 10), gram_stream(3, 3, 9, 5, 10))


class TestMcMoment:
    """Monte Carlo estimates of c_p."""

    def test_first_moment_is_exact(self):
        """Test p = 1 gives 1 with vanishing spread."""
        report = mc_moment(3, 5, 1, samples=100, seed=0)
        assert report.value == pytest.approx(1.0, abs=1e-12)
        assert report.uncertainty < 1e-12

    def test_second_moment_z2_z2(self):
        """Test M = N = 2, p = 2 gives 3 within 4 standard errors."""
        report = mc_moment(2, 2, 2, samples=100_000, seed=7)
        assert abs(report.value - 3.0) <= 4 * report.uncertainty
        assert report.method == "montecarlo"
        assert report.seed == 7

    def test_seeds_differ_but_agree(self):
        """Test that two seeds give different but compatible estimates."""
        a = mc_moment(2, 2, 2, samples=20_000, seed=1)
        b = mc_moment(2, 2, 2, samples=20_000, seed=2)
        assert a.value != b.value
        assert abs(a.value - b.value) <= 4 * np.hypot(a.uncertainty, b.uncertainty)

    def test_thread_independence(self):
        """Test bit-identical estimates for 1 and 4 threads."""
        a = mc_moment(3, 3, 3, samples=10_000, seed=5, threads=1, chunk_size=1000)
        b = mc_moment(3, 3, 3, samples=10_000, seed=5, threads=4, chunk_size=1000)
        assert a.value == b.value
        assert a.uncertainty == b.uncertainty

    def test_error_shrinks(self):
        """Test that quadrupling the samples roughly halves the error."""
        small = mc_moment(2, 3, 2, samples=5_000, seed=4)
        large = mc_moment(2, 3, 2, samples=20_000, seed=4)
        assert large.uncertainty == pytest.approx(small.uncertainty / 2, rel=0.2)

    def test_needs_two_samples(self):
        """Test that fewer than 2 samples raise."""
        with pytest.raises(ValueError):
            mc_moment(2, 2, 2, samples=1)


class TestMcSpectrum:
    """Pooled spectra of A/N."""

    def test_histogram_mass(self, square_spectrum):
        """Test that the density histogram has mass 1."""
        assert square_spectrum.mass == pytest.approx(1.0, abs=1e-9)
        assert square_spectrum.eigenvalues.size == 300 * 16

    def test_ks_to_free_poisson(self, square_spectrum):
        """Test KS distance to pi_1 at most 0.1 for M = N = 16."""
        assert spectrum_ks(square_spectrum, free_poisson_law(1.0)) <= 0.1

    def test_mean_eigenvalue(self):
        """Test that the mean eigenvalue of A/N is 1 within 2%."""
        hist = mc_spectrum(8, 16, samples=200, seed=0)
        assert hist.mean == pytest.approx(1.0, rel=0.02)

    def test_rectangular_reference(self):
        """Test KS to D_{M/N}(pi_{N/M}) for M = 8, N = 16."""
        hist = mc_spectrum(8, 16, samples=300, seed=1)
        assert spectrum_ks(hist, reference_law(8, 16)) <= 0.1

    def test_histogram_csv(self, tmp_path, square_spectrum):
        """Test the bin_left, bin_right, density table."""
        path = histogram_csv(square_spectrum, tmp_path / "spectrum.csv")
        with path.open() as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 40
        assert set(rows[0]) == {"bin_left", "bin_right", "density"}

    def test_needs_two_rows(self):
        """Test that M < 2 raises."""
        with pytest.raises(ValueError):
            mc_spectrum(1, 4, samples=10)
