"""Monte Carlo counterparts of the analytic quantities, plus goodness-of-fit
machinery (ECDFs, KS distance, DKW thresholds).

All estimators take a ``SeedSpec``; replication i uses the stream
(master_seed, base_index + i), so results are reproducible and independent
of execution order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.stats import ks_2samp

from .analytics import PlanarFunction
from .rng import SeedSpec
from .sampler import (
    ModelParams,
    Realization,
    default_buffer,
    densify,
    extend_window,
    rotate_to_x_axis,
    sample_palm,
    sample_stationary,
)
from .tessellation import (
    CellExtent,
    UnboundedCellError,
    build_voronoi,
    facet_counts,
    typical_cell_extent,
)

__all__ = [
    "Ecdf",
    "MonteCarloEstimate",
    "FacetDensityEstimates",
    "CellLawResult",
    "dkw_epsilon",
    "ks_distance",
    "interpolated_cdf",
    "empirical_nn_cdf",
    "empirical_nn_cdf_palm",
    "empirical_laplace",
    "empirical_intensity",
    "empirical_facet_densities",
    "empirical_cell_law",
    "empirical_width_sweep",
    "count_in_ball",
    "stationarity_ks",
]


@dataclass(frozen=True)
class Ecdf:
    """Empirical CDF over a sorted sample."""

    values: np.ndarray
    n: int

    @classmethod
    def from_samples(cls, samples) -> "Ecdf":
        v = np.sort(np.asarray(samples, dtype=float))
        return cls(v, len(v))

    def evaluate(self, x) -> np.ndarray:
        return np.searchsorted(self.values, x, side="right") / self.n


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    n: int
    master_seed: int

    def within(self, target: float, k_sigma: float = 3.0) -> bool:
        return abs(self.mean - target) <= k_sigma * self.stderr


def _estimate(samples: np.ndarray, seed: SeedSpec) -> MonteCarloEstimate:
    n = len(samples)
    mean = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MonteCarloEstimate(mean, stderr, n, seed.master_seed)


def dkw_epsilon(n: int, confidence: float = 0.99) -> float:
    """Uniform ECDF deviation bound at the given confidence level."""
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n))


def ks_distance(ecdf: Ecdf, cdf) -> float:
    """sup_x |ECDF(x) - CDF(x)|, evaluated at both one-sided limits of every
    sample point."""
    if ecdf.n == 0:
        raise ValueError("empty sample")
    try:
        fv = np.asarray(cdf(ecdf.values), dtype=float)
        if fv.shape != ecdf.values.shape:
            raise TypeError
    except TypeError:
        fv = np.array([cdf(float(x)) for x in ecdf.values])
    i = np.arange(1, ecdf.n + 1)
    upper = np.max(i / ecdf.n - fv)
    lower = np.max(fv - (i - 1) / ecdf.n)
    return float(max(upper, lower))


def interpolated_cdf(fn, x_max: float, num: int = 513):
    """Monotone interpolant of a scalar CDF on [0, x_max], for cheap bulk
    evaluation against large samples."""
    grid = np.linspace(0.0, x_max, num)
    vals = np.array([fn(float(x)) for x in grid])
    interp = PchipInterpolator(grid, vals)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        return np.clip(interp(np.minimum(x, x_max)), 0.0, 1.0)

    return cdf


# --- nearest-distance experiments ---------------------------------------------

def _nearest_distance(
    params: ModelParams, obs_radius: float, seed: SeedSpec, palm: bool
) -> float:
    """Distance from the origin to the nearest point (excluding the Palm atom).

    Exact as long as the simulation window is nonempty: every unsampled point
    lies beyond the simulation radius, hence farther than any sampled point.
    Empty windows (probability < e^-8) are *extended*, not redrawn, so the
    tail of the distance law is not biased.
    """
    buffer = default_buffer(params, obs_radius)
    real = (sample_palm if palm else sample_stationary)(params, obs_radius, buffer, seed)
    for attempt in range(8):
        x = real.point_x[1:] if palm else real.point_x
        y = real.point_y[1:] if palm else real.point_y
        if len(x):
            return math.sqrt(float(np.min(x * x + y * y)))
        real = extend_window(real, 2.0 * real.sim_radius, seed.substream(attempt))
    raise RuntimeError("no point found after repeated window enlargement")


def empirical_nn_cdf(
    params: ModelParams, obs_radius: float, n: int, seed: SeedSpec
) -> Ecdf:
    """ECDF of the distance from a fixed location to its nearest point,
    one probe per independent realization."""
    d = [
        _nearest_distance(params, obs_radius, seed.replication(seed.replication_index + i), False)
        for i in range(n)
    ]
    return Ecdf.from_samples(d)


def empirical_nn_cdf_palm(
    params: ModelParams, obs_radius: float, n: int, seed: SeedSpec
) -> Ecdf:
    """ECDF of the distance from the typical vehicle to its nearest neighbor."""
    d = [
        _nearest_distance(params, obs_radius, seed.replication(seed.replication_index + i), True)
        for i in range(n)
    ]
    return Ecdf.from_samples(d)


# --- Laplace functional --------------------------------------------------------

def empirical_laplace(
    f: PlanarFunction,
    params: ModelParams,
    obs_radius: float,
    n: int,
    seed: SeedSpec,
    palm: bool = False,
    include_origin_atom: bool = False,
) -> MonteCarloEstimate:
    """Mean of exp(-sum f(X)) over independent realizations."""
    if f.support_radius > obs_radius:
        warnings.warn(
            f"f support radius {f.support_radius} exceeds obs_radius {obs_radius}; "
            "tail mass is truncated",
            stacklevel=2,
        )
    vals = np.empty(n)
    for i in range(n):
        s = seed.replication(seed.replication_index + i)
        real = (sample_palm if palm else sample_stationary)(params, obs_radius, 0.0, s)
        x, y = real.point_x, real.point_y
        if palm and not include_origin_atom:
            x, y = x[1:], y[1:]
        total = float(np.sum(f.evaluator(x, y))) if len(x) else 0.0
        vals[i] = math.exp(-total)
    return _estimate(vals, seed)


# --- density and facets ---------------------------------------------------------

def count_in_ball(real: Realization, center, radius: float) -> int:
    dx = real.point_x - center[0]
    dy = real.point_y - center[1]
    return int(np.count_nonzero(dx * dx + dy * dy <= radius * radius))


def empirical_intensity(
    params: ModelParams, n: int, seed: SeedSpec, obs_radius: float = 1.0
) -> MonteCarloEstimate:
    """Points per unit area in the observation ball, averaged over replications."""
    area = math.pi * obs_radius * obs_radius
    buffer = default_buffer(params)
    counts = np.empty(n)
    for i in range(n):
        real = sample_stationary(
            params, obs_radius, buffer, seed.replication(seed.replication_index + i)
        )
        counts[i] = count_in_ball(real, (0.0, 0.0), obs_radius) / area
    return _estimate(counts, seed)


@dataclass(frozen=True)
class FacetDensityEstimates:
    vertices: MonteCarloEstimate
    edges: MonteCarloEstimate
    cells: MonteCarloEstimate
    euler: MonteCarloEstimate  # vertices - edges + cells, should be ~0


def empirical_facet_densities(
    params: ModelParams,
    n: int,
    seed: SeedSpec,
    obs_radius: float = 10.0,
    buffer: float | None = None,
    counting_radius: float | None = None,
) -> FacetDensityEstimates:
    """Minus-sampled facet density estimates of the Cox-Voronoi tessellation."""
    if buffer is None:
        buffer = default_buffer(params)
    if counting_radius is None:
        margin = 2.0 / math.sqrt(math.pi * params.mu * params.lambda_l)
        counting_radius = obs_radius - margin
    if counting_radius <= 0:
        raise ValueError("counting radius must be positive; enlarge obs_radius")
    area = math.pi * counting_radius * counting_radius
    dens = np.empty((n, 3))
    for i in range(n):
        real = sample_stationary(
            params, obs_radius, buffer, seed.replication(seed.replication_index + i)
        )
        tess = build_voronoi(real)
        fc = facet_counts(tess, counting_radius)
        dens[i] = (fc.n_vertices / area, fc.n_edges / area, fc.n_cells / area)
    euler = dens[:, 0] - dens[:, 1] + dens[:, 2]
    return FacetDensityEstimates(
        _estimate(dens[:, 0], seed),
        _estimate(dens[:, 1], seed),
        _estimate(dens[:, 2], seed),
        _estimate(euler, seed),
    )


# --- typical cell ----------------------------------------------------------------

@dataclass(frozen=True)
class CellLawResult:
    total_length: Ecdf  # |S| = s_plus + s_minus
    s_plus: Ecdf
    width: MonteCarloEstimate
    area: MonteCarloEstimate


def _palm_cell_extent(
    params: ModelParams, obs_radius: float, seed: SeedSpec, max_retries: int = 3
) -> CellExtent:
    buffer = default_buffer(params)
    real = sample_palm(params, obs_radius, buffer, seed)
    for attempt in range(max_retries + 1):
        try:
            return typical_cell_extent(rotate_to_x_axis(real))
        except UnboundedCellError:
            real = extend_window(real, 2.0 * real.sim_radius, seed.substream(16 + attempt))
    raise UnboundedCellError(
        f"typical cell unbounded after {max_retries} window extensions"
    )


def empirical_cell_law(
    params: ModelParams,
    n: int,
    seed: SeedSpec,
    obs_radius: float | None = None,
) -> CellLawResult:
    """Extent statistics of the typical cell over independent Palm realizations."""
    if obs_radius is None:
        obs_radius = 4.0 / params.lambda_l
    s_tot = np.empty(n)
    s_pl = np.empty(n)
    widths = np.empty(n)
    areas = np.empty(n)
    for i in range(n):
        ext = _palm_cell_extent(
            params, obs_radius, seed.replication(seed.replication_index + i)
        )
        s_tot[i] = ext.s_plus + ext.s_minus
        s_pl[i] = ext.s_plus
        widths[i] = ext.width
        areas[i] = ext.area
    return CellLawResult(
        Ecdf.from_samples(s_tot),
        Ecdf.from_samples(s_pl),
        _estimate(widths, seed),
        _estimate(areas, seed),
    )


def empirical_width_sweep(
    params: ModelParams,
    mus: list[float],
    n: int,
    seed: SeedSpec,
    obs_radius: float | None = None,
) -> dict[float, MonteCarloEstimate]:
    """Typical-cell width under coupled densification: the same base
    realization is superposed with independent increments for each larger mu,
    so widths are pathwise nonincreasing in mu."""
    mus = sorted(mus)
    base_params = ModelParams(params.lambda_l, mus[0], params.orientation)
    if obs_radius is None:
        obs_radius = 4.0 / params.lambda_l
    buffer = default_buffer(base_params)
    widths = {mu: np.empty(n) for mu in mus}
    for i in range(n):
        rep = seed.replication(seed.replication_index + i)
        base = sample_palm(base_params, obs_radius, buffer, rep)
        for attempt in range(4):
            try:
                exts = {}
                current = rotate_to_x_axis(base)
                exts[mus[0]] = typical_cell_extent(current)
                for k, mu in enumerate(mus[1:], start=1):
                    current = densify(current, mu, rep.substream(64 + k))
                    exts[mu] = typical_cell_extent(current)
                break
            except UnboundedCellError:
                base = extend_window(
                    base, 2.0 * base.sim_radius, rep.substream(32 + attempt)
                )
        else:
            raise UnboundedCellError("width sweep: cell unbounded after retries")
        for mu in mus:
            widths[mu][i] = exts[mu].width
    return {mu: _estimate(w, seed) for mu, w in widths.items()}


# --- stationarity ----------------------------------------------------------------

def stationarity_ks(
    params: ModelParams,
    n: int,
    seed: SeedSpec,
    shift=(2.0, 0.0),
    ball_radius: float = 1.0,
) -> tuple[float, float]:
    """Two-sample KS between point counts in a ball at the origin and in a
    shifted ball, over independent replication batches. Returns (stat, p)."""
    shift_norm = math.hypot(*shift)
    obs = shift_norm + ball_radius
    buffer = default_buffer(params)
    at_origin = np.empty(n)
    at_shift = np.empty(n)
    seed_b = seed.substream(7)
    for i in range(n):
        r0 = sample_stationary(params, obs, buffer, seed.replication(i))
        at_origin[i] = count_in_ball(r0, (0.0, 0.0), ball_radius)
        r1 = sample_stationary(params, obs, buffer, seed_b.replication(i))
        at_shift[i] = count_in_ball(r1, shift, ball_radius)
    res = ks_2samp(at_origin, at_shift)
    return float(res.statistic), float(res.pvalue)
