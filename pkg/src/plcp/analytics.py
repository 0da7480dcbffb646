"""Closed-form statistics of the Poisson line Cox process, evaluated numerically.

Covers the nearest-distance CDFs under the stationary and Palm measures, the
Laplace functional (general, radial, and Palm variants), the facet densities
of the Cox-Voronoi tessellation, the point density, and the limiting
cell-length law. Isotropic orientation only; the Manhattan case is sampled
but has no analytics here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import QuadratureSpec, integrate
from .sampler import ModelParams

__all__ = [
    "UnsupportedAnalyticsError",
    "RadialFunction",
    "PlanarFunction",
    "gaussian_radial",
    "gaussian_planar",
    "path_loss_radial",
    "hard_wall_radial",
    "hard_wall_planar",
    "to_planar",
    "nn_cdf",
    "nn_cdf_palm",
    "laplace_functional",
    "laplace_functional_radial",
    "typical_line_factor",
    "typical_line_factor_radial",
    "laplace_palm",
    "laplace_palm_radial",
    "facet_densities",
    "point_density",
    "cell_length_cdf",
    "curve_table",
]

DEFAULT_QUAD = QuadratureSpec()


class UnsupportedAnalyticsError(ValueError):
    """Raised for parameter regimes with no closed form here (Manhattan lines)."""


@dataclass(frozen=True)
class RadialFunction:
    """Nonnegative function of the radius, negligible beyond support_radius.

    breakpoint_radii mark radii where the evaluator is not smooth, so the
    quadrature can split panels there.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    support_radius: float
    breakpoint_radii: tuple = ()

    def __post_init__(self):
        if not (math.isfinite(self.support_radius) and self.support_radius > 0):
            raise ValueError("support_radius must be finite and positive")


@dataclass(frozen=True)
class PlanarFunction:
    """Nonnegative function of (x, y), negligible outside the support disk."""

    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    support_radius: float
    breakpoint_radii: tuple = ()

    def __post_init__(self):
        if not (math.isfinite(self.support_radius) and self.support_radius > 0):
            raise ValueError("support_radius must be finite and positive")


def gaussian_radial(scale: float = 1.0, tail: float = 1e-12) -> RadialFunction:
    """f(rho) = scale * exp(-rho^2)."""
    support = math.sqrt(math.log(max(scale, 1.0) / tail))
    return RadialFunction(lambda rho: scale * np.exp(-np.square(rho)), support)


def gaussian_planar(scale: float = 1.0, tail: float = 1e-12) -> PlanarFunction:
    support = math.sqrt(math.log(max(scale, 1.0) / tail))
    return PlanarFunction(
        lambda x, y: scale * np.exp(-(np.square(x) + np.square(y))), support
    )


def path_loss_radial(
    s: float = 1.0, alpha: float = 4.0, rho0: float = 0.1, support_radius: float = 10.0
) -> RadialFunction:
    """Regularized power-law path loss s*rho^-alpha, capped below rho0 and
    truncated to zero beyond support_radius (the simulable instance)."""
    if rho0 <= 0:
        raise ValueError("rho0 must be positive (origin singularity)")

    def f(rho):
        rho = np.asarray(rho, dtype=float)
        return np.where(
            rho <= support_radius, s * np.power(np.maximum(rho, rho0), -alpha), 0.0
        )

    return RadialFunction(f, support_radius, breakpoint_radii=(rho0, support_radius))


def hard_wall_radial(height: float, wall_radius: float) -> RadialFunction:
    """Constant `height` on the disk of radius wall_radius, zero outside."""
    return RadialFunction(
        lambda rho: np.where(np.asarray(rho) <= wall_radius, height, 0.0),
        wall_radius,
        breakpoint_radii=(wall_radius,),
    )


def hard_wall_planar(height: float, wall_radius: float) -> PlanarFunction:
    return to_planar(hard_wall_radial(height, wall_radius))


def to_planar(f: RadialFunction) -> PlanarFunction:
    return PlanarFunction(
        lambda x, y: f.evaluator(np.hypot(x, y)),
        f.support_radius,
        f.breakpoint_radii,
    )


# --- nearest-distance CDFs ---------------------------------------------------

def _require_isotropic(params: ModelParams):
    if params.orientation != "isotropic":
        raise UnsupportedAnalyticsError(
            "closed-form statistics are available for the isotropic model only"
        )


def nn_cdf(r: float, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """CDF of the distance from a fixed location to the nearest process point.

    The inner integral int_0^r (1 - exp(-2 mu sqrt(r^2-u^2))) du is evaluated
    after u = r sin(phi), which removes the square-root singularity at u = r.
    """
    _require_isotropic(params)
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return 0.0
    mu = params.mu

    def g(phi):
        c = np.cos(phi)
        return r * c * -np.expm1(-2.0 * mu * r * c)

    inner = integrate(g, 0.0, math.pi / 2.0, quad)
    return -math.expm1(-2.0 * params.lambda_l * inner)


def nn_cdf_palm(
    r: float, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Nearest-distance CDF from the typical vehicle (Palm distribution)."""
    _require_isotropic(params)
    if r < 0:
        raise ValueError("r must be nonnegative")
    return 1.0 - (1.0 - nn_cdf(r, params, quad)) * math.exp(-2.0 * params.mu * r)


# --- Laplace functionals ------------------------------------------------------

def _scalar_loop(fn):
    def wrapped(xs):
        xs = np.atleast_1d(xs)
        return np.array([fn(float(x)) for x in xs])

    return wrapped


def laplace_functional(
    f: PlanarFunction, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """E[exp(-sum f(X))] for a general nonnegative f with bounded support.

    The per-line arc integral runs over the full line (both signs of the arc
    coordinate), matching the conditional Laplace functional of a PPP on the
    whole line; for symmetric f this equals twice the half-line integral.
    """
    _require_isotropic(params)
    S = f.support_radius
    mu, lam = params.mu, params.lambda_l

    def arc_integral(r: float, theta: float) -> float:
        T2 = S * S - r * r
        if T2 <= 0:
            return 0.0
        T = math.sqrt(T2)
        c, s = math.cos(theta), math.sin(theta)

        def g(t):
            return -np.expm1(-f.evaluator(t * c - r * s, t * s + r * c))

        bps = []
        for b in f.breakpoint_radii:
            if abs(r) < b <= S:
                cut = math.sqrt(b * b - r * r)
                bps += [-cut, cut]
        return integrate(g, -T, T, quad, breakpoints=bps)

    def theta_integrand(r: float):
        return _scalar_loop(
            lambda theta: -math.expm1(-mu * arc_integral(r, theta))
        )

    def r_integrand(r: float) -> float:
        return integrate(theta_integrand(r), 0.0, math.pi, quad)

    outer = integrate(_scalar_loop(r_integrand), -S, S, quad, breakpoints=(0.0,))
    return math.exp(-(lam / math.pi) * outer)


def laplace_functional_radial(
    f: RadialFunction, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Laplace functional for a radially symmetric f; the angle integral drops out."""
    _require_isotropic(params)
    S = f.support_radius
    mu, lam = params.mu, params.lambda_l

    def arc_integral(r: float) -> float:
        T2 = S * S - r * r
        if T2 <= 0:
            return 0.0

        def g(t):
            return -np.expm1(-f.evaluator(np.sqrt(t * t + r * r)))

        bps = [math.sqrt(b * b - r * r) for b in f.breakpoint_radii if r < b <= S]
        return integrate(g, 0.0, math.sqrt(T2), quad, breakpoints=bps)

    def r_integrand(r: float) -> float:
        return -math.expm1(-2.0 * mu * arc_integral(r))

    outer = integrate(
        _scalar_loop(r_integrand), 0.0, S, quad, breakpoints=f.breakpoint_radii
    )
    return math.exp(-2.0 * lam * outer)


def typical_line_factor(
    f: PlanarFunction, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Angle-averaged contribution of the points on the typical road."""
    S = f.support_radius
    mu = params.mu

    def arc_integral(theta: float) -> float:
        c, s = math.cos(theta), math.sin(theta)

        def g(t):
            return -np.expm1(-f.evaluator(t * c, t * s))

        bps = [x for b in f.breakpoint_radii if b <= S for x in (-b, b)]
        return integrate(g, -S, S, quad, breakpoints=bps)

    vals = _scalar_loop(lambda theta: math.exp(-mu * arc_integral(theta)))
    return integrate(vals, 0.0, math.pi, quad) / math.pi


def typical_line_factor_radial(
    f: RadialFunction, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> float:
    S = f.support_radius

    def g(t):
        return -np.expm1(-f.evaluator(t))

    arc = integrate(g, 0.0, S, quad, breakpoints=f.breakpoint_radii)
    return math.exp(-2.0 * params.mu * arc)


def laplace_palm(
    f: PlanarFunction, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Palm Laplace functional: stationary value times the typical-road factor.

    Reduced convention: the atom at the origin is not part of the sum.
    """
    _require_isotropic(params)
    return laplace_functional(f, params, quad) * typical_line_factor(f, params, quad)


def laplace_palm_radial(
    f: RadialFunction, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD
) -> float:
    _require_isotropic(params)
    return laplace_functional_radial(f, params, quad) * typical_line_factor_radial(
        f, params, quad
    )


# --- tessellation and cell-length laws ---------------------------------------

def facet_densities(params: ModelParams) -> tuple[float, float, float]:
    """Densities of the (vertices, edges, cells) of the Cox-Voronoi tessellation."""
    d = params.mu * params.lambda_l
    return (2.0 * d, 3.0 * d, d)


def point_density(params: ModelParams) -> float:
    return params.mu * params.lambda_l


def cell_length_cdf(l: float, lambda_l: float) -> float:
    """CDF of the limiting typical-cell length: Erlang(2, 2*lambda_l)."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    x = 2.0 * lambda_l * l
    return 1.0 - math.exp(-x) * (1.0 + x)


def curve_table(fn: Callable[[float], float], grid) -> np.ndarray:
    """(abscissa, value) pairs for a scalar function on a grid."""
    grid = np.asarray(grid, dtype=float)
    return np.column_stack([grid, [fn(float(x)) for x in grid]])
