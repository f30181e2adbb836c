"""Exact square-annulus statistics and the naive variance reference."""

from fractions import Fraction

import numpy as np
import pytest

from annulab.bodies import ball
from annulab.counting import Annulus, GridScheme, sample_moments
from annulab.fourier import parseval_variance
from annulab.oracle import (
    brute_force_counts,
    brute_force_variance,
    square_annulus,
    square_stats,
)


class TestSquareStats:
    def test_variant_a_exact(self):
        stats = square_stats("A", 3, 0.125)
        assert stats.mean == Fraction(3)
        assert stats.variance == Fraction(63, 2)
        assert float(stats.variance) == 31.5

    def test_variant_b_exact(self):
        stats = square_stats("B", 3, 0.125)
        assert stats.mean == Fraction(49, 16)
        assert float(stats.mean) == 3.0625
        assert stats.variance == Fraction(3759, 256)
        assert float(stats.variance) == 14.68359375

    def test_distribution_measures_sum_to_one(self):
        for variant in "AB":
            stats = square_stats(variant, 5, Fraction(1, 16))
            assert sum(m for _, m in stats.value_distribution) == 1

    def test_distribution_reproduces_closed_forms(self):
        stats = square_stats("B", 2, Fraction(3, 32))
        mean = sum(Fraction(v) * m for v, m in stats.value_distribution)
        var = sum(m * (Fraction(v) - mean) ** 2 for v, m in stats.value_distribution)
        assert mean == stats.mean
        assert var == stats.variance

    def test_thin_limit_variance_dwarfs_mean(self):
        # flat shells: variance/mean tends to 4n, never to 1
        for t in (Fraction(1, 100), Fraction(1, 1000)):
            stats = square_stats("A", 3, t)
            ratio = stats.variance / stats.mean
            assert abs(float(ratio) - 12.0) < 0.2

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            square_stats("A", 0, 0.125)
        with pytest.raises(ValueError):
            square_stats("A", 3, 0.5)
        with pytest.raises(ValueError):
            square_stats("C", 3, 0.125)


class TestBruteForce:
    def test_matches_grid_moments_exactly_box(self):
        an = square_annulus("A", 3, 0.125)
        table = sample_moments(an, GridScheme(64))
        assert brute_force_counts(an, 64) == table.histogram
        assert brute_force_variance(an, 64) == table.variance

    def test_matches_grid_moments_exactly_disk(self):
        an = Annulus(ball(1.0, 2), 2.5, 0.5)
        table = sample_moments(an, GridScheme(128))
        assert brute_force_variance(an, 128) == table.variance

    def test_variant_a_m1024_near_closed_form(self):
        value = brute_force_variance(square_annulus("A", 3, 0.125), 1024)
        assert value == pytest.approx(31.5, rel=2e-2)

    def test_variant_b_realization(self):
        stats = square_stats("B", 3, 0.125)
        hist = brute_force_counts(square_annulus("B", 3, 0.125), 64)
        total = 64 * 64
        measured = {v: Fraction(f, total) for v, f in hist.items()}
        assert measured == {v: m for v, m in stats.value_distribution}

    def test_disk_regression_snapshot(self):
        # frozen reference produced by this operation; regression anchor
        value = brute_force_variance(Annulus(ball(1.0, 2), 2.5, 0.5), 256)
        assert value == pytest.approx(3.630613472312689, rel=1e-12)


class TestCrossModule:
    def test_box_counts_take_flat_annulus_values(self):
        from annulab.counting import annulus_counts, scheme_translations

        an = square_annulus("A", 4, 0.125)
        counts = annulus_counts(an, scheme_translations(GridScheme(32), 2))
        assert set(np.unique(counts)) <= {0, 16, 32}

    def test_parseval_converges_to_oracle_variance(self):
        an = square_annulus("A", 3, 0.125)
        errs = [abs(parseval_variance(an, n).value - 31.5) for n in (64, 256, 512)]
        assert errs[2] < errs[0]
        assert errs[2] < 0.005 * 31.5
