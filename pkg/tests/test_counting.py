"""Enumeration counts, shell membership semantics, and empirical moments."""

import math

import numpy as np
import pytest

from annulab.bodies import ball, box, ellipsoid, perturbed_disk
from annulab.counting import (
    Annulus,
    GridScheme,
    RandomScheme,
    annulus_count,
    annulus_counts,
    annulus_volume,
    count_samples,
    dilate_count,
    dilate_counts,
    sample_moments,
    scheme_translations,
)

DISK = ball(1.0, 2)
BOX = box([1.0, 1.0])


class TestDilateCount:
    def test_disk_r1(self):
        assert dilate_count(DISK, 1.0, [0.0, 0.0]) == 5

    def test_disk_r25_enumeration_oracle(self):
        # brute membership over the 7x7 candidate box
        k = np.arange(-3, 4)
        k1, k2 = np.meshgrid(k, k, indexing="ij")
        expected = int(np.sum(k1 * k1 + k2 * k2 <= 2.5 ** 2))
        assert expected == 21
        assert dilate_count(DISK, 2.5, [0.0, 0.0]) == 21

    def test_box_chebyshev_ball(self):
        assert dilate_count(BOX, 3.0, [0.0, 0.0]) == 49

    def test_ball3(self):
        k = np.arange(-2, 3)
        g = np.stack(np.meshgrid(k, k, k, indexing="ij"), -1).reshape(-1, 3)
        expected = int(np.sum(np.sum(g * g, axis=1) <= 4))
        assert dilate_count(ball(1.0, 3), 2.0, [0.0, 0.0, 0.0]) == expected

    def test_monotone_in_r(self):
        X = np.random.default_rng(0).random((20, 2))
        prev = np.zeros(20, dtype=np.int64)
        for rho in (0.5, 1.0, 1.7, 2.3, 3.0):
            cur = dilate_counts(DISK, rho, X)
            assert np.all(cur >= prev)
            prev = cur

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            dilate_count(DISK, -1.0, [0.0, 0.0])
        with pytest.raises(ValueError):
            dilate_count(ball(1.0, 3), 1.0, [0.0, 0.0])


class TestAnnulusCount:
    def test_disk_thin_shell(self):
        # shell (0.75, 1.25]: exactly the four unit points
        assert annulus_count(Annulus(DISK, 1.0, 0.5), [0.0, 0.0]) == 4

    def test_empty_shell(self):
        assert annulus_count(Annulus(DISK, 1.0, 0.0), [0.3, 0.4]) == 0

    def test_square_annulus_value(self):
        # centered square shell around an integer radius catches 8n points
        assert annulus_count(Annulus(BOX, 3.0, 0.1), [0.0, 0.0]) == 24

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            Annulus(DISK, 1.0, -0.1)
        with pytest.raises(ValueError):
            Annulus(DISK, 1.0, 2.5)

    def test_additivity_exact(self):
        X = np.random.default_rng(1).random((60, 2))
        for body in (DISK, ellipsoid([2.0, 1.0]), BOX, perturbed_disk(1.0, [(2, 0.05, 0.3)])):
            an = Annulus(body, 2.75, 0.5)
            lhs = annulus_counts(an, X)
            rhs = dilate_counts(body, an.outer, X) - dilate_counts(body, an.inner, X)
            assert np.array_equal(lhs, rhs)

    def test_periodicity_exact(self):
        an = Annulus(DISK, 2.0, 0.25)
        X = np.array([[0.125, 0.625], [0.5, 0.25]])
        base = annulus_counts(an, X)
        for shift in ([1.0, 0.0], [0.0, 1.0], [2.0, -1.0]):
            assert np.array_equal(annulus_counts(an, X + shift), base)

    def test_generic_path_matches_closed_path(self):
        # a perturbed disk with no perturbation is the unit disk
        plain = perturbed_disk(1.0, [])
        X = np.random.default_rng(2).random((40, 2))
        got = annulus_counts(Annulus(plain, 2.5, 0.5), X)
        want = annulus_counts(Annulus(DISK, 2.5, 0.5), X)
        assert np.array_equal(got, want)

    def test_box_count_values_match_flat_annulus_structure(self):
        # variant-A square shell counts land on {0, 4n, 8n} only
        an = Annulus(BOX, 3.0, 0.125)
        counts = annulus_counts(an, scheme_translations(GridScheme(64), 2))
        assert set(np.unique(counts)) <= {0, 12, 24}


class TestAnnulusVolume:
    def test_disk_exact_polynomial(self):
        assert annulus_volume(Annulus(DISK, 10.0, 0.1)) == pytest.approx(2.0 * math.pi, rel=1e-14)

    def test_zero_thickness(self):
        assert annulus_volume(Annulus(DISK, 3.0, 0.0)) == 0.0

    def test_ball3(self):
        v = annulus_volume(Annulus(ball(1.0, 3), 5.0, 0.2))
        assert v == pytest.approx((5.1 ** 3 - 4.9 ** 3) * 4.0 * math.pi / 3.0, rel=1e-14)


class TestSchemes:
    def test_grid_offset_nodes(self):
        X = scheme_translations(GridScheme(4), 2)
        assert X.shape == (16, 2)
        assert np.min(X) == pytest.approx(0.125)
        assert np.max(X) == pytest.approx(0.875)

    def test_random_reproducible_counter_based(self):
        a = scheme_translations(RandomScheme(1000, 7), 2)
        b = scheme_translations(RandomScheme(1000, 7), 2)
        assert np.array_equal(a, b)
        assert np.all((a >= 0.0) & (a < 1.0))

    def test_scheme_validation(self):
        with pytest.raises(ValueError):
            GridScheme(1)
        with pytest.raises(ValueError):
            RandomScheme(1, 0)


class TestSampleMoments:
    def test_flat_square_annulus_grid_moments(self):
        # dyadic thickness, power-of-two offset grid: the three count plateaus
        # are resolved exactly, so the moments hit the closed forms exactly
        table = sample_moments(Annulus(BOX, 3.0, 0.125), GridScheme(256))
        assert table.mean == pytest.approx(3.0, rel=2e-2)
        assert table.variance == pytest.approx(31.5, rel=2e-2)
        assert table.histogram == {0: 50176, 12: 14336, 24: 1024}

    def test_zero_thickness_all_moments_vanish(self):
        table = sample_moments(Annulus(DISK, 2.0, 0.0), GridScheme(8))
        assert table.mean == 0.0
        assert table.variance == 0.0
        assert table.histogram == {0: 64}

    def test_grid_mean_tracks_volume_as_grid_refines(self):
        an = Annulus(DISK, 2.5, 0.5)
        errs = [
            abs(sample_moments(an, GridScheme(m)).mean - an.volume())
            for m in (16, 32, 64, 128)
        ]
        assert errs[-1] < errs[0]

    def test_random_variance_near_frequency_route(self):
        from annulab.fourier import parseval_variance

        an = Annulus(DISK, 8.0, 0.05)
        table = sample_moments(an, RandomScheme(50_000, 42))
        res = parseval_variance(an, 80)
        combined = math.sqrt(table.variance_se ** 2 + res.tail.bound ** 2)
        assert abs(table.variance - res.value) < 3.0 * combined

    def test_workers_do_not_change_results(self):
        an = Annulus(DISK, 3.0, 0.25)
        one = sample_moments(an, RandomScheme(20_000, 5), workers=1)
        many = sample_moments(an, RandomScheme(20_000, 5), workers=4)
        assert one == many

    def test_count_samples_shapes(self):
        an = Annulus(DISK, 2.0, 0.5)
        samples = count_samples(an, GridScheme(8))
        assert samples.translations.shape == (64, 2)
        assert samples.counts.shape == (64,)
        assert sum(samples.histogram().values()) == 64


class TestHlawkaDiagnostic:
    def test_dilate_discrepancy_stays_bounded(self):
        # difference body of the ellipse (2,1); the normalized discrepancy
        # max_x |count - r^2 |A|| / r^{2/3} measured 3.62 -> 1.37 over the
        # doubling sweep, bounded and trending down
        A = ellipsoid([4.0, 2.0])
        X = np.random.default_rng(123).random((100, 2))
        ratios = []
        for r in (4, 8, 16, 32, 64, 128):
            counts = dilate_counts(A, float(r), X)
            dev = float(np.max(np.abs(counts - r * r * A.volume())))
            ratios.append(dev / r ** (2.0 / 3.0))
        assert max(ratios) < 4.0
        assert ratios[-1] <= ratios[0]
