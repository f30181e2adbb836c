"""Convex bodies represented through their support function.

A body is a compact convex set containing the origin in its interior.  All
geometry flows from the support function ``h(xi) = sup_{y in body} y . xi``:
the boundary contact point ``sigma(xi)`` (gradient of h), the Gaussian
curvature at that point, the gauge (Minkowski functional), volumes, and
Minkowski sums (which become additions of support functions).

Supported kinds:

* ``ball(radius, dimension)``         -- any dimension >= 2
* ``ellipsoid(semiaxes)``             -- d = 2 or 3 (closed forms)
* ``perturbed_disk(base, coeffs)``    -- d = 2, radial function
  ``rho(theta) = base + sum a_k cos(k theta + phase_k)``, validated for
  strictly positive curvature at construction
* ``box(halfsides)``                  -- non-smooth; admitted for counting and
  oracle work only, curvature-dependent operations reject it
* ``support_sum``                     -- internal kind produced by
  ``difference_body`` when no closed form exists (d = 2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "ConvexBody",
    "BodyPointData",
    "NonSmoothBodyError",
    "CurvatureSignError",
    "ball",
    "ellipsoid",
    "perturbed_disk",
    "box",
    "body_from_json",
    "body_to_json",
    "curvature_finite_difference",
    "curvature_volume_integral",
    "unit_ball_volume",
    "unit_directions",
    "sphere_surface_measure",
]


class NonSmoothBodyError(ValueError):
    """Operation needs a smooth boundary with unique normals (box rejected)."""


class CurvatureSignError(ValueError):
    """Computed Gaussian curvature is not strictly positive."""


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def sphere_surface_measure(d: int) -> float:
    """Surface measure of the unit sphere S^{d-1}."""
    return d * unit_ball_volume(d)


# Number of angles used to validate perturbed-disk curvature at construction.
VALIDATION_ANGLES = 4096

# Finite-difference step for the generic curvature fallback; one Richardson
# extrapolation level is applied on top (see curvature_finite_difference).
FD_STEP = 1e-5


@dataclass(frozen=True)
class BodyPointData:
    """Boundary contact data for a direction: the support point sigma(xi),
    the Gaussian curvature there, and the unit normal xi/|xi|."""

    sigma: np.ndarray
    curvature: float
    normal: np.ndarray


@dataclass(frozen=True)
class ConvexBody:
    kind: str
    dimension: int
    radius: float = 0.0
    semiaxes: tuple[float, ...] = ()
    halfsides: tuple[float, ...] = ()
    base: float = 0.0
    cosine_coeffs: tuple[tuple[int, float, float], ...] = ()
    inner: "ConvexBody | None" = None

    # ------------------------------------------------------------------ basic

    @property
    def is_smooth(self) -> bool:
        return self.kind != "box"

    @property
    def is_symmetric(self) -> bool:
        """True when the body is centrally symmetric (h(xi) == h(-xi))."""
        if self.kind in ("ball", "ellipsoid", "box", "support_sum"):
            return True
        return all(a == 0.0 for _, a, _ in self.cosine_coeffs) or self._symmetric_series()

    def _symmetric_series(self) -> bool:
        # rho(theta) = rho(theta + pi) iff only even harmonics are present
        return all(k % 2 == 0 for k, a, _ in self.cosine_coeffs if a != 0.0)

    # ------------------------------------------------------------ radial data

    def _rho_eval(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Radial function of a perturbed disk with first two derivatives."""
        rho = np.full_like(theta, self.base, dtype=np.float64)
        drho = np.zeros_like(rho)
        ddrho = np.zeros_like(rho)
        for k, a, ph in self.cosine_coeffs:
            arg = k * theta + ph
            rho += a * np.cos(arg)
            drho += -a * k * np.sin(arg)
            ddrho += -a * k * k * np.cos(arg)
        return rho, drho, ddrho

    def _contact_angle(self, phi: np.ndarray) -> np.ndarray:
        """Boundary parameter theta* maximizing rho(theta) cos(theta - phi).

        Coarse 256-point scan (the objective is unimodal on the circle for a
        convex radial function, so the scan brackets the maximum to one cell)
        followed by a fixed 60-round golden-section shrink to ~1e-14.  Raw
        Newton steps are avoided: at coefficient choices near the convexity
        threshold the second derivative of the objective can vanish and a
        clipped Newton step may run the wrong way.  The iteration count is
        fixed per lane, so results do not depend on batch composition.
        """
        phi = np.asarray(phi, dtype=np.float64)
        shape = phi.shape
        phi = phi.ravel()
        grid = np.linspace(0.0, 2.0 * math.pi, 256, endpoint=False)
        rho_g, _, _ = self._rho_eval(grid)
        obj = rho_g[None, :] * np.cos(grid[None, :] - phi[:, None])
        theta0 = grid[np.argmax(obj, axis=1)]
        spacing = grid[1]

        def val(theta: np.ndarray) -> np.ndarray:
            rho, _, _ = self._rho_eval(theta)
            return rho * np.cos(theta - phi)

        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        a = theta0 - spacing
        b = theta0 + spacing
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = val(c), val(d)
        for _ in range(60):
            left = fc > fd
            b = np.where(left, d, b)
            a = np.where(left, a, c)
            c = b - invphi * (b - a)
            d = a + invphi * (b - a)
            fc, fd = val(c), val(d)
        return (0.5 * (a + b)).reshape(shape)

    # ---------------------------------------------------------------- support

    def support_batch(self, xi: np.ndarray) -> np.ndarray:
        """h(xi) for an (m, d) array of directions (rows may not be zero)."""
        xi = np.asarray(xi, dtype=np.float64)
        if self.kind == "ball":
            return self.radius * np.sqrt(np.sum(xi * xi, axis=-1))
        if self.kind == "ellipsoid":
            a = np.asarray(self.semiaxes)
            return np.sqrt(np.sum((a * xi) ** 2, axis=-1))
        if self.kind == "box":
            s = np.asarray(self.halfsides)
            return np.sum(s * np.abs(xi), axis=-1)
        if self.kind == "perturbed_disk":
            norm = np.sqrt(np.sum(xi * xi, axis=-1))
            phi = np.arctan2(xi[..., 1], xi[..., 0])
            theta = self._contact_angle(phi)
            rho, _, _ = self._rho_eval(theta)
            return norm * rho * np.cos(theta - phi)
        if self.kind == "support_sum":
            return self.inner.support_batch(xi) + self.inner.support_batch(-xi)
        raise ValueError(f"unknown body kind {self.kind!r}")

    def support(self, xi: Sequence[float]) -> float:
        xi = np.asarray(xi, dtype=np.float64)
        if not np.any(xi):
            raise ValueError("support direction must be nonzero")
        return float(self.support_batch(xi[None, :])[0])

    # ---------------------------------------------------------- support point

    def support_point_batch(self, xi: np.ndarray) -> np.ndarray:
        """sigma(xi): the boundary point with outward normal xi/|xi|.

        Homogeneous of degree zero and equal to the gradient of the support
        function."""
        xi = np.asarray(xi, dtype=np.float64)
        if self.kind == "ball":
            n = np.sqrt(np.sum(xi * xi, axis=-1, keepdims=True))
            return self.radius * xi / n
        if self.kind == "ellipsoid":
            a2 = np.asarray(self.semiaxes) ** 2
            w = np.sqrt(np.sum(a2 * xi * xi, axis=-1, keepdims=True))
            return a2 * xi / w
        if self.kind == "perturbed_disk":
            phi = np.arctan2(xi[..., 1], xi[..., 0])
            theta = self._contact_angle(phi)
            rho, _, _ = self._rho_eval(theta)
            return np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=-1)
        if self.kind == "support_sum":
            return self.inner.support_point_batch(xi) - self.inner.support_point_batch(-xi)
        if self.kind == "box":
            raise NonSmoothBodyError("box boundaries have non-unique normals at edges")
        raise ValueError(f"unknown body kind {self.kind!r}")

    def support_point(self, xi: Sequence[float]) -> BodyPointData:
        xi = np.asarray(xi, dtype=np.float64)
        if not np.any(xi):
            raise ValueError("support direction must be nonzero")
        sigma = self.support_point_batch(xi[None, :])[0]
        kappa = self.curvature(xi)
        return BodyPointData(sigma=sigma, curvature=kappa, normal=xi / np.linalg.norm(xi))

    # -------------------------------------------------------------- curvature

    def curvature_batch(self, xi: np.ndarray) -> np.ndarray:
        """Gaussian curvature of the boundary at sigma(xi)."""
        xi = np.asarray(xi, dtype=np.float64)
        if self.kind == "ball":
            shape = xi.shape[:-1]
            return np.full(shape, self.radius ** -(self.dimension - 1))
        if self.kind == "ellipsoid":
            # product of principal curvature radii = (prod a_i^2) / |D u|^{d+1}
            # for the unit normal u; K is the reciprocal.
            a = np.asarray(self.semiaxes)
            n2 = np.sum(xi * xi, axis=-1)
            w2 = np.sum((a * xi) ** 2, axis=-1)
            prod_a2 = float(np.prod(a * a))
            return (w2 / n2) ** ((self.dimension + 1) / 2.0) / prod_a2
        if self.kind == "perturbed_disk":
            phi = np.arctan2(xi[..., 1], xi[..., 0])
            theta = self._contact_angle(phi)
            rho, drho, ddrho = self._rho_eval(theta)
            num = rho * rho + 2.0 * drho * drho - rho * ddrho
            return num / (rho * rho + drho * drho) ** 1.5
        if self.kind == "support_sum":
            # d = 2: principal curvature radii add along a common normal.
            inv = 1.0 / self.inner.curvature_batch(xi) + 1.0 / self.inner.curvature_batch(-xi)
            return 1.0 / inv
        if self.kind == "box":
            raise NonSmoothBodyError("box boundaries carry no Gaussian curvature")
        raise ValueError(f"unknown body kind {self.kind!r}")

    def curvature(self, xi: Sequence[float]) -> float:
        xi = np.asarray(xi, dtype=np.float64)
        if not np.any(xi):
            raise ValueError("direction must be nonzero")
        k = float(self.curvature_batch(xi[None, :])[0])
        if not k > 0.0:
            raise CurvatureSignError(f"nonpositive curvature {k!r} at direction {xi.tolist()}")
        return k

    # ------------------------------------------------------------------ gauge

    def gauge_batch(self, x: np.ndarray) -> np.ndarray:
        """Minkowski functional inf{lambda > 0 : x in lambda * body}; gauge(0) = 0."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "ball":
            return np.sqrt(np.sum(x * x, axis=-1)) / self.radius
        if self.kind == "ellipsoid":
            a = np.asarray(self.semiaxes)
            return np.sqrt(np.sum((x / a) ** 2, axis=-1))
        if self.kind == "box":
            s = np.asarray(self.halfsides)
            return np.max(np.abs(x) / s, axis=-1)
        if self.kind == "perturbed_disk":
            theta = np.arctan2(x[..., 1], x[..., 0])
            rho, _, _ = self._rho_eval(theta)
            return np.sqrt(np.sum(x * x, axis=-1)) / rho
        if self.kind == "support_sum":
            return self._gauge_support_sum(x)
        raise ValueError(f"unknown body kind {self.kind!r}")

    def _gauge_support_sum(self, x: np.ndarray) -> np.ndarray:
        # gauge(x) = max over unit directions u of (x . u) / h(u); d = 2 only.
        # Coarse scan plus golden-section refinement around the best angle.
        x = np.atleast_2d(x)
        grid = np.linspace(0.0, 2.0 * math.pi, 512, endpoint=False)
        dirs = np.stack([np.cos(grid), np.sin(grid)], axis=-1)
        h = self.support_batch(dirs)
        vals = (x @ dirs.T) / h[None, :]
        best = np.argmax(vals, axis=1)
        lo = grid[best] - grid[1]
        hi = grid[best] + grid[1]

        def ratio(ang: np.ndarray) -> np.ndarray:
            d = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
            return np.sum(x * d, axis=-1) / self.support_batch(d)

        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        c = b - invphi * (b - a)
        d_ = a + invphi * (b - a)
        fc, fd = ratio(c), ratio(d_)
        for _ in range(70):
            take_left = fc > fd
            b = np.where(take_left, d_, b)
            a = np.where(take_left, a, c)
            c = b - invphi * (b - a)
            d_ = a + invphi * (b - a)
            fc, fd = ratio(c), ratio(d_)
        out = np.maximum(fc, fd)
        return np.maximum(out, 0.0)

    def gauge(self, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=np.float64)
        if not np.any(x):
            return 0.0
        return float(self.gauge_batch(x[None, :])[0])

    # ----------------------------------------------------------------- volume

    def volume(self) -> float:
        if self.kind == "ball":
            return unit_ball_volume(self.dimension) * self.radius ** self.dimension
        if self.kind == "ellipsoid":
            return unit_ball_volume(self.dimension) * float(np.prod(self.semiaxes))
        if self.kind == "box":
            return float(np.prod(2.0 * np.asarray(self.halfsides)))
        if self.kind == "perturbed_disk":
            # (1/2) integral of rho^2; the trapezoid rule on a trigonometric
            # polynomial of degree < VALIDATION_ANGLES/2 is exact.
            theta = np.linspace(0.0, 2.0 * math.pi, VALIDATION_ANGLES, endpoint=False)
            rho, _, _ = self._rho_eval(theta)
            return 0.5 * float(np.mean(rho * rho)) * 2.0 * math.pi
        if self.kind == "support_sum":
            # planar area from the support function: (1/2) int (h^2 - h'^2);
            # h'(phi) is the tangential component of sigma(phi), which stays
            # bounded even where the curvature degenerates.
            n = VALIDATION_ANGLES
            phi = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
            dirs = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
            tang = np.stack([-np.sin(phi), np.cos(phi)], axis=-1)
            h = self.support_batch(dirs)
            hp = np.sum(self.support_point_batch(dirs) * tang, axis=-1)
            return 0.5 * float(np.mean(h * h - hp * hp)) * 2.0 * math.pi
        raise ValueError(f"unknown body kind {self.kind!r}")

    # ------------------------------------------------------- difference body

    def difference_body(self) -> "ConvexBody":
        """The centrally symmetric body with support h(xi) + h(-xi),
        i.e. the Minkowski sum of the body and its reflection."""
        if self.kind == "ball":
            return ball(2.0 * self.radius, self.dimension)
        if self.kind == "ellipsoid":
            return ellipsoid([2.0 * a for a in self.semiaxes])
        if self.kind == "box":
            return box([2.0 * s for s in self.halfsides])
        if self.kind in ("perturbed_disk", "support_sum"):
            return ConvexBody(kind="support_sum", dimension=self.dimension, inner=self)
        raise ValueError(f"unknown body kind {self.kind!r}")

    # ------------------------------------------------------------------- zeta

    def zeta_batch(self, x: np.ndarray) -> np.ndarray:
        """Width phase (sigma(x) - sigma(-x)) . x == h(x) + h(-x)."""
        if self.is_symmetric:
            return 2.0 * self.support_batch(x)
        return self.support_batch(x) + self.support_batch(-np.asarray(x))

    def zeta(self, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=np.float64)
        if not np.any(x):
            raise ValueError("direction must be nonzero")
        return float(self.zeta_batch(x[None, :])[0])

    # ----------------------------------------------------- measured extremes

    def support_range(self, samples: int = 4096) -> tuple[float, float]:
        """Measured (min, max) of h over unit directions.

        The constants bounding sigma(n) . n are never assumed; they are
        measured on a dense direction sample."""
        dirs = unit_directions(self.dimension, samples)
        h = self.support_batch(dirs)
        return float(np.min(h)), float(np.max(h))

    def curvature_range(self, samples: int = 4096) -> tuple[float, float]:
        dirs = unit_directions(self.dimension, samples)
        k = self.curvature_batch(dirs)
        return float(np.min(k)), float(np.max(k))


# ------------------------------------------------------------- constructors


def ball(radius: float, dimension: int = 2) -> ConvexBody:
    if radius <= 0:
        raise ValueError("ball radius must be positive")
    if dimension < 2:
        raise ValueError("dimension must be >= 2")
    return ConvexBody(kind="ball", dimension=dimension, radius=float(radius))


def ellipsoid(semiaxes: Sequence[float]) -> ConvexBody:
    axes = tuple(float(a) for a in semiaxes)
    if len(axes) < 2:
        raise ValueError("ellipsoid needs at least two semiaxes")
    if any(a <= 0 for a in axes):
        raise ValueError("semiaxes must be positive")
    return ConvexBody(kind="ellipsoid", dimension=len(axes), semiaxes=axes)


def box(halfsides: Sequence[float]) -> ConvexBody:
    sides = tuple(float(s) for s in halfsides)
    if len(sides) < 2:
        raise ValueError("box needs at least two halfsides")
    if any(s <= 0 for s in sides):
        raise ValueError("halfsides must be positive")
    return ConvexBody(kind="box", dimension=len(sides), halfsides=sides)


def perturbed_disk(base: float, cosine_coeffs: Sequence[Sequence[float]]) -> ConvexBody:
    """Planar body with radial function base + sum a_k cos(k theta + phase_k).

    Construction validates strict positivity of both the radial function and
    the boundary curvature on a dense angle grid and fails loudly otherwise.
    """
    if base <= 0:
        raise ValueError("base radius must be positive")
    coeffs = []
    for entry in cosine_coeffs:
        k, a, ph = (list(entry) + [0.0])[:3] if len(entry) == 2 else entry
        k = int(k)
        if k < 1:
            raise ValueError("harmonic indices must be >= 1")
        coeffs.append((k, float(a), float(ph)))
    body = ConvexBody(
        kind="perturbed_disk", dimension=2, base=float(base),
        cosine_coeffs=tuple(coeffs),
    )
    # Offset angle nodes: coefficient choices at the exact convexity threshold
    # have isolated zero-curvature angles on the aligned grid; the gate is
    # meant to reject genuinely nonconvex radial functions.
    theta = (np.arange(VALIDATION_ANGLES) + 0.5) * (2.0 * math.pi / VALIDATION_ANGLES)
    rho, drho, ddrho = body._rho_eval(theta)
    if np.min(rho) <= 0.0:
        bad = theta[int(np.argmin(rho))]
        raise ValueError(f"radial function nonpositive at theta={bad:.6f}")
    kappa = (rho * rho + 2.0 * drho * drho - rho * ddrho) / (rho * rho + drho * drho) ** 1.5
    if np.min(kappa) <= 0.0:
        bad = theta[int(np.argmin(kappa))]
        raise CurvatureSignError(
            f"perturbed disk has nonpositive curvature at theta={bad:.6f}; "
            "reduce the cosine coefficients"
        )
    return body


# ------------------------------------------------------------------ JSON io


def body_from_json(spec: dict) -> ConvexBody:
    """Build a body from its JSON description.

    Schema: {"type": "ball", "radius": R, "dimension": d}
          | {"type": "ellipsoid", "semiaxes": [...]}
          | {"type": "perturbed_disk", "base": R, "cosine_coeffs": [[k, a_k, phase_k], ...]}
          | {"type": "box", "halfsides": [...]}
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValueError("body spec must be an object with a 'type' field")
    kind = spec["type"]
    if kind == "ball":
        return ball(spec["radius"], int(spec.get("dimension", 2)))
    if kind == "ellipsoid":
        return ellipsoid(spec["semiaxes"])
    if kind == "perturbed_disk":
        return perturbed_disk(spec["base"], spec.get("cosine_coeffs", []))
    if kind == "box":
        return box(spec["halfsides"])
    raise ValueError(f"unknown body type {kind!r}")


def body_to_json(body: ConvexBody) -> dict:
    if body.kind == "ball":
        return {"type": "ball", "radius": body.radius, "dimension": body.dimension}
    if body.kind == "ellipsoid":
        return {"type": "ellipsoid", "semiaxes": list(body.semiaxes)}
    if body.kind == "box":
        return {"type": "box", "halfsides": list(body.halfsides)}
    if body.kind == "perturbed_disk":
        return {
            "type": "perturbed_disk",
            "base": body.base,
            "cosine_coeffs": [list(c) for c in body.cosine_coeffs],
        }
    raise ValueError(f"body kind {body.kind!r} has no JSON form")


# ------------------------------------------------------ generic derivations


def unit_directions(d: int, samples: int) -> np.ndarray:
    """Deterministic dense direction sample: uniform angles (d=2) or a
    polar-azimuthal product grid (d=3)."""
    if d == 2:
        t = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
        return np.stack([np.cos(t), np.sin(t)], axis=-1)
    if d == 3:
        m = max(int(math.isqrt(samples)), 8)
        mu = (np.arange(m) + 0.5) / m * 2.0 - 1.0  # cos(polar), midpoint nodes
        phi = np.linspace(0.0, 2.0 * math.pi, 2 * m, endpoint=False)
        mu_g, phi_g = np.meshgrid(mu, phi, indexing="ij")
        s = np.sqrt(1.0 - mu_g ** 2)
        return np.stack(
            [s * np.cos(phi_g), s * np.sin(phi_g), mu_g], axis=-1
        ).reshape(-1, 3)
    raise ValueError("direction sampling supports d = 2 and d = 3")


def curvature_finite_difference(body: ConvexBody, xi: Sequence[float]) -> float:
    """Generic curvature via the tangential Hessian of the support function.

    The principal curvature radii at sigma(u) are the tangential eigenvalues
    of the Hessian of the 1-homogeneous extension of h at the unit vector u;
    their product is 1/K.  Central differences with step FD_STEP and one
    Richardson extrapolation level.
    """
    if not body.is_smooth:
        raise NonSmoothBodyError("finite-difference curvature needs a smooth body")
    u = np.asarray(xi, dtype=np.float64)
    u = u / np.linalg.norm(u)
    d = body.dimension

    def hess(step: float) -> np.ndarray:
        H = np.empty((d, d))
        for i in range(d):
            for j in range(i, d):
                ei = np.zeros(d)
                ej = np.zeros(d)
                ei[i] = step
                ej[j] = step
                if i == j:
                    val = (
                        body.support(u + ei) - 2.0 * body.support(u) + body.support(u - ei)
                    ) / step ** 2
                else:
                    val = (
                        body.support(u + ei + ej)
                        - body.support(u + ei - ej)
                        - body.support(u - ei + ej)
                        + body.support(u - ei - ej)
                    ) / (4.0 * step ** 2)
                H[i, j] = H[j, i] = val
        return H

    H = (4.0 * hess(FD_STEP / 2.0) - hess(FD_STEP)) / 3.0
    # orthonormal completion of u; columns 1..d-1 span the tangent space
    basis = np.linalg.qr(np.column_stack([u, np.eye(d)]))[0][:, 1:d]
    radii = np.linalg.det(basis.T @ H @ basis)
    if not radii > 0.0:
        raise CurvatureSignError(f"nonpositive curvature radii product {radii!r}")
    return 1.0 / radii


def curvature_volume_integral(body: ConvexBody, nodes: int = 2048) -> float:
    """Quadrature of h(u) / K(sigma(u)) over unit directions.

    For a smooth convex body this integral equals d times the volume (the
    inverse curvature is the surface Jacobian of the Gauss map and h is the
    cone height over the surface element).
    """
    if not body.is_smooth:
        raise NonSmoothBodyError("curvature integral needs a smooth body")
    d = body.dimension
    if d == 2:
        t = np.linspace(0.0, 2.0 * math.pi, nodes, endpoint=False)
        dirs = np.stack([np.cos(t), np.sin(t)], axis=-1)
        vals = body.support_batch(dirs) / body.curvature_batch(dirs)
        return float(np.mean(vals)) * 2.0 * math.pi
    if d == 3:
        n_mu = max(64, int(math.isqrt(nodes)))
        mu, w = np.polynomial.legendre.leggauss(n_mu)
        n_phi = 2 * n_mu
        phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        mu_g, phi_g = np.meshgrid(mu, phi, indexing="ij")
        s = np.sqrt(1.0 - mu_g ** 2)
        dirs = np.stack([s * np.cos(phi_g), s * np.sin(phi_g), mu_g], axis=-1).reshape(-1, 3)
        vals = (body.support_batch(dirs) / body.curvature_batch(dirs)).reshape(n_mu, n_phi)
        return float(np.sum(w * np.mean(vals, axis=1))) * 2.0 * math.pi
    raise ValueError("curvature integral supports d = 2 and d = 3")
