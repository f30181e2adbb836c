"""annulab: variance of lattice point counts in thin annuli of convex bodies.

Three independent routes to the same number: exact enumeration over torus
translations, the frequency-side (Parseval) sum of squared shell transform
coefficients, and the stationary-phase series decomposition, plus exact
square-annulus oracles at desk scale.
"""

__version__ = "0.1.0"

from .bodies import (
    BodyPointData,
    ConvexBody,
    CurvatureSignError,
    NonSmoothBodyError,
    ball,
    body_from_json,
    body_to_json,
    box,
    curvature_finite_difference,
    curvature_volume_integral,
    ellipsoid,
    perturbed_disk,
)
from .bessel import bessel_j
from .counting import (
    Annulus,
    CountSampleSet,
    GridScheme,
    MomentTable,
    RandomScheme,
    annulus_count,
    annulus_counts,
    annulus_volume,
    count_samples,
    dilate_count,
    dilate_counts,
    sample_moments,
)
from .decomposition import (
    DecompositionResult,
    SweepConfig,
    SweepTable,
    decompose,
    main_term,
    residue_integral_check,
    theorem_sweep,
    x_series,
    y_series,
)
from .fourier import (
    FourierCoefficient,
    ParsevalResult,
    TailEstimate,
    annulus_main_ft,
    ft_annulus,
    ft_ball,
    ft_body,
    ft_body_quadrature,
    ft_box,
    parseval_variance,
    stationary_amplitude,
)
from .oracle import SquareAnnulusStats, brute_force_variance, square_annulus, square_stats

__all__ = [name for name in dir() if not name.startswith("_")]
