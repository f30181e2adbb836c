"""Exact ground truth for flat square annuli, and a naive variance reference.

Square annuli around an integer radius n have boundary segments with zero
curvature, and their translated lattice counts concentrate on a few values
whose measures are polynomials in the thickness.  Everything here is exact
rational arithmetic so the values can anchor acceptance tests without
floating-point caveats.

Variant A is the centered shell  n - t/2 < max(|x1|, |x2|) <= n + t/2,
variant B the one-sided shell    n       < max(|x1|, |x2|) <= n + t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bodies import ConvexBody
from .counting import Annulus, moments_from_histogram

__all__ = [
    "SquareAnnulusStats",
    "square_stats",
    "square_annulus",
    "brute_force_counts",
    "brute_force_variance",
]


@dataclass(frozen=True)
class SquareAnnulusStats:
    variant: str
    n: int
    t: Fraction
    mean: Fraction
    variance: Fraction
    value_distribution: tuple[tuple[int, Fraction], ...]

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "n": self.n,
            "t": float(self.t),
            "mean": float(self.mean),
            "variance": float(self.variance),
            "distribution": [[v, float(m)] for v, m in self.value_distribution],
        }


def square_stats(variant: str, n: int, t) -> SquareAnnulusStats:
    """Exact count distribution, mean and variance for a square annulus.

    The translated count takes one large value on a small square of
    translations (both coordinates near-integer), a half-size value on two
    slabs (one coordinate near-integer), and zero elsewhere:

    * variant A: 8n on measure t^2, 4n on 2t - 2t^2, mean 8nt,
      variance 32 n^2 t - 32 n^2 t^2
    * variant B: 4n+1 on measure 4t^2, 2n on 4t - 8t^2, mean 8nt + 4t^2,
      variance 16n^2 t - 32n^2 t^2 + 32n t^2 - 64n t^3 + 4t^2 - 16t^4

    Exactness is self-checked: the closed forms must equal the moments of the
    returned distribution in rational arithmetic.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    t = Fraction(t)
    if not (0 < t < Fraction(1, 2)):
        raise ValueError("thickness must lie in (0, 1/2)")
    if variant == "A":
        dist = [
            (8 * n, t * t),
            (4 * n, 2 * t - 2 * t * t),
            (0, 1 - t * t - (2 * t - 2 * t * t)),
        ]
        mean = 8 * n * t
        variance = 32 * n * n * t - 32 * n * n * t * t
    elif variant == "B":
        dist = [
            (4 * n + 1, 4 * t * t),
            (2 * n, 4 * t - 8 * t * t),
            (0, 1 - 4 * t * t - (4 * t - 8 * t * t)),
        ]
        mean = 8 * n * t + 4 * t * t
        variance = (
            16 * n * n * t
            - 32 * n * n * t * t
            + 32 * n * t * t
            - 64 * n * t ** 3
            + 4 * t * t
            - 16 * t ** 4
        )
    else:
        raise ValueError("variant must be 'A' or 'B'")
    total = sum(m for _, m in dist)
    dist_mean = sum(v * m for v, m in dist)
    dist_var = sum(m * (Fraction(v) - mean) ** 2 for v, m in dist)
    if total != 1 or dist_mean != mean or dist_var != variance:
        raise AssertionError("distribution moments disagree with closed forms")
    return SquareAnnulusStats(
        variant=variant, n=n, t=t, mean=mean, variance=variance,
        value_distribution=tuple(dist),
    )


def square_annulus(variant: str, n: int, t: float) -> Annulus:
    """The Annulus object whose counts realize square_stats."""
    from .bodies import box

    if variant == "A":
        return Annulus(box([1.0, 1.0]), float(n), float(t))
    if variant == "B":
        # one-sided shell (n, n+t] is the centered shell around n + t/2
        return Annulus(box([1.0, 1.0]), n + 0.5 * float(t), float(t))
    raise ValueError("variant must be 'A' or 'B'")


def brute_force_counts(annulus: Annulus, m: int) -> dict[int, int]:
    """Count histogram over the offset m^d grid by direct membership testing.

    Every candidate lattice point in a fixed bounding box is tested against
    the gauge for every translation; no interval or row tricks, no shared
    code with the optimized enumeration.  Single-threaded reference path.
    """
    body = annulus.body
    d = body.dimension
    outer = annulus.outer
    ranges = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        hi = int(np.ceil(outer * body.support(e))) + 1
        lo = -int(np.ceil(outer * body.support(-e))) - 2
        ranges.append(np.arange(lo, hi + 1))
    mesh = np.meshgrid(*ranges, indexing="ij")
    candidates = np.stack(mesh, axis=-1).reshape(-1, d).astype(np.float64)

    axis = (np.arange(m) + 0.5) / m
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    X = np.stack(grids, axis=-1).reshape(-1, d)

    hist: dict[int, int] = {}
    chunk = max(1, (1 << 22) // candidates.shape[0])
    for i0 in range(0, X.shape[0], chunk):
        pts = X[i0 : i0 + chunk, None, :] + candidates[None, :, :]
        g = body.gauge_batch(pts.reshape(-1, d)).reshape(-1, candidates.shape[0])
        counts = np.sum((g <= annulus.outer) & (g > annulus.inner), axis=1)
        values, freq = np.unique(counts, return_counts=True)
        for v, f in zip(values, freq):
            hist[int(v)] = hist.get(int(v), 0) + int(f)
    return dict(sorted(hist.items()))


def brute_force_variance(annulus: Annulus, m: int) -> float:
    """Population variance of the count over the offset m^d grid, by the
    naive algorithm; the reference for derived values elsewhere."""
    hist = brute_force_counts(annulus, m)
    _, _, central = moments_from_histogram(hist, 2)
    return float(central[2])
