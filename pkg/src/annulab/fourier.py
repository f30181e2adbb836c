"""Fourier transforms of bodies and annuli, and the Parseval variance.

Convention: hat(f)(xi) = integral f(x) exp(-2 pi i xi . x) dx, frequencies are
plain integer vectors.  Closed forms cover balls (Bessel), ellipsoids (affine
image of the ball) and boxes (products of sinc-type factors); other smooth
bodies go through an oscillatory boundary quadrature parameterized by the
Gauss map.  The exact variance of the translated lattice count equals the sum
of |hat(chi)(n)|^2 over nonzero integer frequencies; `parseval_variance`
truncates that sum and reports an envelope-based tail majorant next to it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._reduction import fsum, parallel_map
from .bessel import bessel_j
from .bodies import ConvexBody, NonSmoothBodyError, sphere_surface_measure
from .counting import Annulus
from .lattice import half_lattice_blocks

__all__ = [
    "FourierCoefficient",
    "TailEstimate",
    "ParsevalResult",
    "QuadratureBudgetError",
    "ft_ball",
    "ft_ball_radial",
    "ft_box",
    "ft_body",
    "ft_body_quadrature",
    "ft_annulus",
    "stationary_amplitude",
    "annulus_main_ft",
    "annulus_ft_remainder",
    "parseval_variance",
    "coefficients",
    "envelope_bound",
]

# Hard cap on boundary-quadrature nodes; exceeding it raises instead of
# silently degrading.
NODE_BUDGET = 2_000_000

QUADRATURE_NODES_PER_WAVE = 8
MIN_NODES_2D = 256
MIN_NODES_3D = 64  # polar count; azimuthal is twice this


class QuadratureBudgetError(RuntimeError):
    """Oscillatory quadrature would need more nodes than the budget allows."""


@dataclass(frozen=True)
class FourierCoefficient:
    frequency: tuple[int, ...]
    value: complex
    method: str  # closed_form | quadrature | asymptotic


@dataclass(frozen=True)
class TailEstimate:
    """Majorant for the omitted part of a frequency-side series.

    ``bound`` majorizes the sum of omitted |coefficient|^2 terms using the
    size envelope C r^{(d-1)/2} |n|^{-(d+1)/2} min(1, t|n|); the constant is
    fitted on the outer computed shells, never assumed.
    """

    cutoff_radius: float
    bound: float
    envelope_constant: float

    def as_dict(self) -> dict:
        return {
            "cutoff_radius": self.cutoff_radius,
            "bound": self.bound,
            "envelope_constant": self.envelope_constant,
        }


@dataclass(frozen=True)
class ParsevalResult:
    value: float
    tail: TailEstimate
    terms: int
    quadrature_error: float
    flagged: bool


# ------------------------------------------------------------ closed forms


def ft_ball_radial(d: int, radius: float, rho) -> np.ndarray:
    """Transform of the radius-R ball at frequency magnitude rho:
    R^d (R rho)^{-d/2} J_{d/2}(2 pi R rho), with the volume as the rho -> 0
    limit (evaluated by series to avoid the 0/0 form)."""
    rho = np.atleast_1d(np.asarray(rho, dtype=np.float64))
    nu = d / 2.0
    z = 2.0 * math.pi * radius * rho
    out = np.empty_like(rho)
    small = z < 0.5
    if np.any(small):
        # volume * [ Gamma(nu+1) (z/2)^{-nu} J_nu(z) ] via the power series
        zs = z[small]
        acc = np.ones_like(zs)
        term = np.ones_like(zs)
        for k in range(1, 10):
            term = term * (-(zs * zs) / 4.0) / (k * (nu + k))
            acc += term
        vol = math.pi ** nu / math.gamma(nu + 1.0) * radius ** d
        out[small] = vol * acc
    big = ~small
    if np.any(big):
        rb = rho[big]
        out[big] = radius ** d * (radius * rb) ** (-nu) * bessel_j(nu, z[big])
    return out


def ft_ball(d: int, radius: float, xi) -> float:
    xi = np.asarray(xi, dtype=np.float64)
    return float(ft_ball_radial(d, radius, np.linalg.norm(xi))[0])


def _ft_box_batch(halfsides, scale: float, U: np.ndarray) -> np.ndarray:
    # transform of the box with halfsides scale*s at integer frequencies U;
    # zero components contribute their side length 2*scale*s_i
    out = np.ones(U.shape[0])
    for i, s in enumerate(halfsides):
        k = U[:, i].astype(np.float64)
        zero = k == 0.0
        safe = np.where(zero, 1.0, k)
        out = out * np.where(zero, 2.0 * scale * s, np.sin(2.0 * math.pi * scale * s * k) / (math.pi * safe))
    return out


def ft_box(halfsides, xi) -> float:
    xi = np.atleast_2d(np.asarray(xi, dtype=np.float64))
    out = np.ones(xi.shape[0])
    for i, s in enumerate(halfsides):
        k = xi[:, i]
        zero = k == 0.0
        safe = np.where(zero, 1.0, k)
        out = out * np.where(zero, 2.0 * s, np.sin(2.0 * math.pi * s * k) / (math.pi * safe))
    return float(out[0])


# ------------------------------------------------- oscillatory quadrature


def _body_width(body: ConvexBody) -> float:
    from .bodies import unit_directions

    dirs = unit_directions(body.dimension, 64)
    return float(np.max(body.zeta_batch(dirs)))


def ft_body_quadrature(body: ConvexBody, xi, nodes: int | None = None):
    """Boundary quadrature of the transform for a smooth body.

    The divergence theorem turns the volume integral into a surface one;
    parameterizing the boundary by the Gauss map gives

        hat(chi)(xi) = -(2 pi i |xi|)^{-1}
                       int_{S^{d-1}} (xi_hat . u) exp(-2 pi i xi . sigma(u)) / K(sigma(u)) du.

    Node counts are auto-raised to at least QUADRATURE_NODES_PER_WAVE nodes
    per oscillation wavelength estimated from |xi| times the body width.
    Returns (value, error_estimate); the estimate compares against the
    half-resolution rule embedded in the same node set.
    """
    if not body.is_smooth:
        raise NonSmoothBodyError("boundary quadrature needs a smooth body")
    xi = np.asarray(xi, dtype=np.float64)
    norm = float(np.linalg.norm(xi))
    if norm == 0.0:
        raise ValueError("frequency must be nonzero; the zero value is the volume")
    d = body.dimension
    waves = norm * _body_width(body)
    if d == 2:
        m = nodes or max(MIN_NODES_2D, 2 * (int(QUADRATURE_NODES_PER_WAVE * waves / 2) + 8))
        if m > NODE_BUDGET:
            raise QuadratureBudgetError(f"{m} nodes exceed budget {NODE_BUDGET}")
        phi = np.linspace(0.0, 2.0 * math.pi, m, endpoint=False)
        dirs = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        sigma = body.support_point_batch(dirs)
        kappa = body.curvature_batch(dirs)
        unit = xi / norm
        f = (dirs @ unit) * np.exp(-2.0j * math.pi * (sigma @ xi)) / kappa
        full = np.mean(f) * 2.0 * math.pi
        half = np.mean(f[::2]) * 2.0 * math.pi
    elif d == 3:
        n_mu = nodes or max(MIN_NODES_3D, int(QUADRATURE_NODES_PER_WAVE * waves / 2) + 8)
        if 2 * n_mu * n_mu > NODE_BUDGET:
            raise QuadratureBudgetError(f"{2 * n_mu * n_mu} nodes exceed budget {NODE_BUDGET}")
        mu, w = np.polynomial.legendre.leggauss(n_mu)
        n_phi = 2 * n_mu
        phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        mu_g, phi_g = np.meshgrid(mu, phi, indexing="ij")
        s = np.sqrt(1.0 - mu_g ** 2)
        dirs = np.stack([s * np.cos(phi_g), s * np.sin(phi_g), mu_g], axis=-1).reshape(-1, 3)
        sigma = body.support_point_batch(dirs)
        kappa = body.curvature_batch(dirs)
        unit = xi / norm
        f = ((dirs @ unit) * np.exp(-2.0j * math.pi * (sigma @ xi)) / kappa).reshape(n_mu, n_phi)
        full = complex(np.sum(w * np.mean(f, axis=1))) * 2.0 * math.pi
        half = complex(np.sum(w * np.mean(f[:, ::2], axis=1))) * 2.0 * math.pi
    else:
        raise ValueError("quadrature supports d = 2 and d = 3")
    pref = -1.0 / (2.0j * math.pi * norm)
    value = pref * full
    err = abs(pref * (full - half))
    return complex(value), float(err)


def ft_body(body: ConvexBody, xi) -> FourierCoefficient:
    """Transform of the body's indicator at one frequency, with method tag."""
    xi_arr = np.asarray(xi, dtype=np.float64)
    freq = tuple(int(round(v)) if float(v).is_integer() else float(v) for v in xi_arr)
    if not np.any(xi_arr):
        return FourierCoefficient(freq, complex(body.volume()), "closed_form")
    if body.kind == "ball":
        return FourierCoefficient(freq, complex(ft_ball(body.dimension, body.radius, xi_arr)), "closed_form")
    if body.kind == "ellipsoid":
        stretched = np.asarray(body.semiaxes) * xi_arr
        val = float(np.prod(body.semiaxes)) * float(
            ft_ball_radial(body.dimension, 1.0, np.linalg.norm(stretched))[0]
        )
        return FourierCoefficient(freq, complex(val), "closed_form")
    if body.kind == "box":
        return FourierCoefficient(freq, complex(ft_box(body.halfsides, xi_arr)), "closed_form")
    val, _ = ft_body_quadrature(body, xi_arr)
    return FourierCoefficient(freq, val, "quadrature")


def ft_annulus(annulus: Annulus, xi) -> FourierCoefficient:
    """Transform of the shell indicator: the scaling difference of the body
    transform at the two shell radii."""
    xi_arr = np.asarray(xi, dtype=np.float64)
    freq = tuple(int(round(v)) if float(v).is_integer() else float(v) for v in xi_arr)
    if annulus.t == 0.0:
        return FourierCoefficient(freq, 0.0j, "closed_form")
    if not np.any(xi_arr):
        return FourierCoefficient(freq, complex(annulus.volume()), "closed_form")
    body = annulus.body
    d = body.dimension
    rp, rm = annulus.outer, annulus.inner
    if body.kind in ("ball", "ellipsoid", "box"):
        val = complex(_annulus_ft_sq_closed(annulus, xi_arr[None, :], values=True)[0])
        return FourierCoefficient(freq, val, "closed_form")
    vp, _ = ft_body_quadrature(body, rp * xi_arr)
    vm, _ = ft_body_quadrature(body, rm * xi_arr) if rm > 0 else (0.0j, 0.0)
    return FourierCoefficient(freq, rp ** d * vp - rm ** d * vm, "quadrature")


def _annulus_ft_sq_closed(annulus: Annulus, U: np.ndarray, values: bool = False) -> np.ndarray:
    """Vectorized closed-form annulus coefficients for ball/ellipsoid/box.

    Returns coefficient values (real) when ``values`` is set, |c|^2 otherwise.
    """
    body = annulus.body
    d = body.dimension
    rp, rm = annulus.outer, annulus.inner
    Uf = np.asarray(U, dtype=np.float64)
    if body.kind == "box":
        c = _ft_box_batch(body.halfsides, rp, U)
        if rm > 0:
            c = c - _ft_box_batch(body.halfsides, rm, U)
    else:
        if body.kind == "ball":
            rho = body.radius * np.sqrt(np.sum(Uf * Uf, axis=-1))
            factor = 1.0
        else:
            rho = np.sqrt(np.sum((np.asarray(body.semiaxes) * Uf) ** 2, axis=-1))
            factor = float(np.prod(body.semiaxes))
        c = rp ** d * ft_ball_radial(d, 1.0, rp * rho)
        if rm > 0:
            c = c - rm ** d * ft_ball_radial(d, 1.0, rm * rho)
        c = factor * c
    return c if values else c * c


# ------------------------------------------------- stationary-phase terms


def stationary_amplitude(body: ConvexBody, xi) -> complex:
    """Leading two-point amplitude of the body transform at large frequency:
    hat(chi)(xi) = a(xi) |xi|^{-(d+1)/2} + O(|xi|^{-(d+3)/2}).

    Built from the two boundary points whose normals are +-xi and the
    Gaussian curvatures there.
    """
    xi = np.asarray(xi, dtype=np.float64)
    d = body.dimension
    h_plus = body.support(xi)  # sigma(xi) . xi
    h_minus = -body.support(-xi)  # sigma(-xi) . xi
    k_plus = body.curvature(xi)
    k_minus = body.curvature(-xi)
    quarter = math.pi * (d - 1) / 4.0
    term_minus = cmath.exp(-2.0j * math.pi * h_minus - 1.0j * quarter) / math.sqrt(k_minus)
    term_plus = cmath.exp(-2.0j * math.pi * h_plus + 1.0j * quarter) / math.sqrt(k_plus)
    return (term_minus - term_plus) / (2.0j * math.pi)


def annulus_main_ft(annulus: Annulus, xi) -> complex:
    """Stationary-phase main term of the shell transform.

    The scaling difference of the amplitude terms collapses into sine factors
    of the shell thickness; the remainder (see ``annulus_ft_remainder``) is
    O(r^{(d-3)/2} t |xi|^{-(d+1)/2}) for r|xi| >= 1, t <= r.
    """
    xi = np.asarray(xi, dtype=np.float64)
    body = annulus.body
    d = body.dimension
    r, t = annulus.r, annulus.t
    norm = float(np.linalg.norm(xi))
    if norm == 0.0:
        raise ValueError("frequency must be nonzero")
    h_plus = body.support(xi)
    h_minus = -body.support(-xi)
    k_plus = body.curvature(xi)
    k_minus = body.curvature(-xi)
    quarter = math.pi * (d - 1) / 4.0
    pref = r ** ((d - 1) / 2.0) * norm ** (-(d + 1) / 2.0) / math.pi
    term_minus = (
        cmath.exp(-2.0j * math.pi * r * h_minus - 1.0j * quarter)
        / math.sqrt(k_minus)
        * math.sin(math.pi * t * h_minus)
    )
    term_plus = (
        cmath.exp(-2.0j * math.pi * r * h_plus + 1.0j * quarter)
        / math.sqrt(k_plus)
        * math.sin(math.pi * t * h_plus)
    )
    return pref * (term_plus - term_minus)


def annulus_ft_remainder(annulus: Annulus, xi) -> complex:
    """Exact shell transform minus its stationary-phase main term."""
    return complex(ft_annulus(annulus, xi).value) - annulus_main_ft(annulus, xi)


# -------------------------------------------------------------- enveloping


def _envelope_shape(annulus: Annulus, norms: np.ndarray) -> np.ndarray:
    d = annulus.body.dimension
    return (
        annulus.r ** ((d - 1) / 2.0)
        * norms ** (-(d + 1) / 2.0)
        * np.minimum(1.0, annulus.t * norms)
    )


def envelope_bound(annulus: Annulus, envelope_constant: float, cutoff: float) -> float:
    """Integral-comparison majorant of sum_{|n| > cutoff} of the squared
    envelope C r^{(d-1)/2} |n|^{-(d+1)/2} min(1, t|n|)."""
    d = annulus.body.dimension
    t = annulus.t
    if t == 0.0:
        return 0.0
    shifted = max(cutoff - math.sqrt(d), 1e-9)
    if t * shifted >= 1.0:
        radial = 1.0 / shifted
    else:
        radial = 2.0 * t - t * t * shifted
    return envelope_constant ** 2 * annulus.r ** (d - 1) * sphere_surface_measure(d) * radial


# ------------------------------------------------------- Parseval variance


def parseval_variance(annulus: Annulus, cutoff: int, workers: int = 1) -> ParsevalResult:
    """Truncated frequency-side variance sum_{0 < |n| <= cutoff} |c(n)|^2.

    Coefficients at n and -n are conjugate, so each representative pair
    contributes twice its squared modulus.  The tail estimate fits the size
    envelope on the outer 20% of computed shells and integrates it past the
    cutoff.  For quadrature-backed bodies the per-coefficient error reports
    are aggregated; the result is flagged when they exceed 1% of the sum.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    body = annulus.body
    if annulus.t == 0.0:
        tail = TailEstimate(cutoff_radius=float(cutoff), bound=0.0, envelope_constant=0.0)
        return ParsevalResult(0.0, tail, 0, 0.0, False)
    closed = body.kind in ("ball", "ellipsoid", "box")
    outer_from = 0.8 * cutoff

    def block_stats(U: np.ndarray):
        norms = np.sqrt(np.sum(U.astype(np.float64) ** 2, axis=-1))
        if closed:
            sq = _annulus_ft_sq_closed(annulus, U)
            qerr = 0.0
        else:
            vals = np.empty(U.shape[0], dtype=complex)
            errs = np.empty(U.shape[0])
            d = body.dimension
            for i, n in enumerate(U):
                nf = n.astype(np.float64)
                vp, ep = ft_body_quadrature(body, annulus.outer * nf)
                val = annulus.outer ** d * vp
                err = annulus.outer ** d * ep
                if annulus.inner > 0:
                    vm, em = ft_body_quadrature(body, annulus.inner * nf)
                    val -= annulus.inner ** d * vm
                    err += annulus.inner ** d * em
                vals[i] = val
                errs[i] = err
            sq = np.abs(vals) ** 2
            qerr = float(np.sum(2.0 * (2.0 * np.abs(vals) * errs + errs * errs)))
        total = 2.0 * float(np.sum(sq))
        outer = norms >= outer_from
        cmax = 0.0
        if np.any(outer):
            shape = _envelope_shape(annulus, norms[outer])
            cmax = float(np.max(np.sqrt(sq[outer]) / shape))
        return total, cmax, U.shape[0], qerr

    blocks = list(half_lattice_blocks(body.dimension, cutoff))
    stats = parallel_map(block_stats, blocks, workers)
    value = fsum(s[0] for s in stats)
    constant = max((s[1] for s in stats), default=0.0)
    terms = 2 * sum(s[2] for s in stats)
    qerr = fsum(s[3] for s in stats)
    tail = TailEstimate(
        cutoff_radius=float(cutoff),
        bound=envelope_bound(annulus, constant, float(cutoff)),
        envelope_constant=constant,
    )
    flagged = qerr > 0.01 * value if value > 0 else False
    return ParsevalResult(value, tail, terms, qerr, flagged)


def coefficients(annulus: Annulus, cutoff: int) -> list[FourierCoefficient]:
    """All shell coefficients with 0 < |n| <= cutoff (both signs), suitable
    for dumps; intended for small cutoffs."""
    out: list[FourierCoefficient] = []
    for block in half_lattice_blocks(annulus.body.dimension, cutoff):
        for n in block:
            coeff = ft_annulus(annulus, n.astype(np.float64))
            out.append(coeff)
            out.append(
                FourierCoefficient(
                    tuple(-int(v) for v in n),
                    complex(coeff.value).conjugate(),
                    coeff.method,
                )
            )
    return out
