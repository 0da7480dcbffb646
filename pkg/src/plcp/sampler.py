"""Samplers for the Poisson line process and the Poisson line Cox point process.

Realizations are drawn in a simulation disk that is larger than the
observation disk by an edge-effect buffer, under either the stationary or
the Palm distribution. All randomness comes from a single per-replication
stream (see :mod:`plcp.rng`), so a fixed ``SeedSpec`` reproduces the
realization bit for bit.

Storage is array-based for speed; ``Realization.lines`` / ``.points``
expose the per-object view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Literal

import numpy as np

from .geometry import LineParams, Point2, line_point
from .rng import GENERATOR_NAME, SeedSpec

__all__ = [
    "ModelParams",
    "CoxPoint",
    "Realization",
    "default_buffer",
    "sample_plp",
    "sample_cox",
    "sample_stationary",
    "sample_palm",
    "extend_window",
    "densify",
    "rotate_to_x_axis",
    "realization_sections",
    "write_realization_csv",
    "read_realization_csv",
]


@dataclass(frozen=True)
class ModelParams:
    """Line intensity (per unit length), on-line point intensity, orientation law."""

    lambda_l: float
    mu: float
    orientation: Literal["isotropic", "manhattan"] = "isotropic"

    def __post_init__(self):
        if not self.lambda_l > 0:
            raise ValueError(f"lambda_l must be positive, got {self.lambda_l}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.orientation not in ("isotropic", "manhattan"):
            raise ValueError(f"unknown orientation {self.orientation!r}")


@dataclass(frozen=True)
class CoxPoint:
    """A point of the Cox process with its line provenance."""

    position: Point2
    line_index: int
    t: float


@dataclass
class Realization:
    """One sample of the line process plus the points living on the lines."""

    line_r: np.ndarray
    line_theta: np.ndarray
    point_x: np.ndarray
    point_y: np.ndarray
    point_line: np.ndarray
    point_t: np.ndarray
    sim_radius: float
    obs_radius: float
    palm: bool
    params: ModelParams
    seed: SeedSpec | None = field(default=None, repr=False)

    @property
    def n_lines(self) -> int:
        return len(self.line_r)

    @property
    def n_points(self) -> int:
        return len(self.point_x)

    @property
    def lines(self) -> list[LineParams]:
        return [LineParams(r, th) for r, th in zip(self.line_r, self.line_theta)]

    @property
    def points(self) -> list[CoxPoint]:
        return [
            CoxPoint(Point2(x, y), int(i), t)
            for x, y, i, t in zip(self.point_x, self.point_y, self.point_line, self.point_t)
        ]

    def positions(self) -> np.ndarray:
        """(n, 2) array of point coordinates."""
        return np.column_stack([self.point_x, self.point_y])

    def __iter__(self) -> Iterator[CoxPoint]:
        return iter(self.points)


def default_buffer(params: ModelParams, r_max_query: float = 0.0) -> float:
    """Edge-effect buffer: the nearest line/point to any observed location lies
    outside the simulation window with probability < e^-8."""
    return max(
        r_max_query,
        4.0 / (2.0 * params.lambda_l),
        4.0 / math.sqrt(math.pi * params.mu * params.lambda_l),
    )


def _draw_plp(params: ModelParams, R: float, rng: np.random.Generator):
    if not R > 0:
        raise ValueError(f"simulation radius must be positive, got {R}")
    n = rng.poisson(2.0 * params.lambda_l * R)
    r = rng.uniform(-R, R, n)
    if params.orientation == "manhattan":
        theta = rng.integers(0, 2, n) * (math.pi / 2.0)
        theta = theta.astype(float)
    else:
        theta = rng.uniform(0.0, math.pi, n)
    return r, theta


def _draw_points_on_lines(line_r, mu: float, R: float, rng: np.random.Generator):
    """Poisson(mu) points on each line's chord inside the disk of radius R."""
    half = np.sqrt(np.maximum(R * R - line_r * line_r, 0.0))
    counts = rng.poisson(2.0 * mu * half)
    total = int(counts.sum())
    t = rng.uniform(-1.0, 1.0, total) * np.repeat(half, counts)
    idx = np.repeat(np.arange(len(line_r)), counts)
    return idx, t


def _positions(line_r, line_theta, point_line, point_t):
    c = np.cos(line_theta[point_line]) if len(point_line) else np.empty(0)
    s = np.sin(line_theta[point_line]) if len(point_line) else np.empty(0)
    r = line_r[point_line] if len(point_line) else np.empty(0)
    return point_t * c - r * s, point_t * s + r * c


def sample_plp(params: ModelParams, R: float, seed: SeedSpec) -> list[LineParams]:
    """Lines of a PLP restricted to |r| <= R; count ~ Poisson(2*lambda_l*R)."""
    r, theta = _draw_plp(params, R, seed.rng())
    return [LineParams(ri, thi) for ri, thi in zip(r, theta)]


def sample_cox(lines: list[LineParams], mu: float, R: float, seed: SeedSpec) -> list[CoxPoint]:
    """Conditionally independent PPP(mu) on each line's chord in the disk of radius R."""
    line_r = np.array([ln.r for ln in lines])
    line_theta = np.array([ln.theta for ln in lines])
    if np.any(np.abs(line_r) > R):
        raise ValueError("all lines must satisfy |r| <= R")
    idx, t = _draw_points_on_lines(line_r, mu, R, seed.rng())
    x, y = _positions(line_r, line_theta, idx, t)
    return [
        CoxPoint(Point2(xi, yi), int(i), ti) for xi, yi, i, ti in zip(x, y, idx, t)
    ]


def _check_window(obs_radius: float, buffer: float):
    if not obs_radius > 0:
        raise ValueError(f"obs_radius must be positive, got {obs_radius}")
    if buffer < 0:
        raise ValueError(f"buffer must be nonnegative, got {buffer}")


def sample_stationary(
    params: ModelParams, obs_radius: float, buffer: float, seed: SeedSpec
) -> Realization:
    """Stationary realization in a disk of radius obs_radius + buffer."""
    _check_window(obs_radius, buffer)
    R = obs_radius + buffer
    rng = seed.rng()
    line_r, line_theta = _draw_plp(params, R, rng)
    idx, t = _draw_points_on_lines(line_r, params.mu, R, rng)
    x, y = _positions(line_r, line_theta, idx, t)
    return Realization(
        line_r, line_theta, x, y, idx, t,
        sim_radius=R, obs_radius=obs_radius, palm=False, params=params, seed=seed,
    )


def sample_palm(
    params: ModelParams, obs_radius: float, buffer: float, seed: SeedSpec
) -> Realization:
    """Palm realization: stationary sample plus the typical road through the
    origin (uniform angle), an independent PPP(mu) on it, and the typical
    vehicle at the origin. lines[0] is the typical road, points[0] the origin atom."""
    _check_window(obs_radius, buffer)
    R = obs_radius + buffer
    rng = seed.rng()
    # typical-road material first, then the stationary part, all on one stream
    if params.orientation == "manhattan":
        theta0 = float(rng.integers(0, 2)) * (math.pi / 2.0)
    else:
        theta0 = rng.uniform(0.0, math.pi)
    n0 = rng.poisson(2.0 * params.mu * R)
    t0 = rng.uniform(-R, R, n0)
    base_r, base_theta = _draw_plp(params, R, rng)
    base_line, base_t = _draw_points_on_lines(base_r, params.mu, R, rng)
    base_x, base_y = _positions(base_r, base_theta, base_line, base_t)
    base = Realization(
        base_r, base_theta, base_x, base_y, base_line, base_t,
        sim_radius=R, obs_radius=obs_radius, palm=False, params=params, seed=seed,
    )

    line_r = np.concatenate([[0.0], base.line_r])
    line_theta = np.concatenate([[theta0], base.line_theta])
    c0, s0 = math.cos(theta0), math.sin(theta0)
    t_all = np.concatenate([[0.0], t0, base.point_t])
    idx_all = np.concatenate(
        [np.zeros(1 + n0, dtype=int), base.point_line + 1]
    )
    x_all = np.concatenate([t0 * c0, base.point_x])
    y_all = np.concatenate([t0 * s0, base.point_y])
    x_all = np.concatenate([[0.0], x_all])
    y_all = np.concatenate([[0.0], y_all])
    return Realization(
        line_r, line_theta, x_all, y_all, idx_all, t_all,
        sim_radius=R, obs_radius=obs_radius, palm=True, params=params, seed=seed,
    )


def extend_window(real: Realization, sim_radius: float, seed: SeedSpec) -> Realization:
    """Enlarge the simulation window in place of a fresh draw.

    Superposes the independent complement: the lines with |r| in the annulus
    (old radius, new radius], their points, and the extension of every
    existing chord to the larger disk. The result is distributed exactly as
    a realization drawn in the larger window from the start, conditioned on
    the current one -- the right way to retry when a window turns out to be
    too small (a fresh unconditional draw would bias the tail).
    """
    R0, R1 = real.sim_radius, sim_radius
    if R1 <= R0:
        raise ValueError(f"new radius {R1} must exceed current radius {R0}")
    params = real.params
    rng = seed.rng()

    # lines whose distance falls in the annulus, with their full chords
    n = rng.poisson(2.0 * params.lambda_l * (R1 - R0))
    mag = rng.uniform(R0, R1, n)
    new_r = mag * (2.0 * rng.integers(0, 2, n) - 1.0)
    if params.orientation == "manhattan":
        new_theta = rng.integers(0, 2, n).astype(float) * (math.pi / 2.0)
    else:
        new_theta = rng.uniform(0.0, math.pi, n)
    new_idx, new_t = _draw_points_on_lines(new_r, params.mu, R1, rng)

    # chord extensions of the existing lines
    r_old = real.line_r
    half0 = np.sqrt(np.maximum(R0 * R0 - r_old * r_old, 0.0))
    half1 = np.sqrt(np.maximum(R1 * R1 - r_old * r_old, 0.0))
    counts = rng.poisson(2.0 * params.mu * (half1 - half0))
    total = int(counts.sum())
    t_mag = rng.uniform(np.repeat(half0, counts), np.repeat(half1, counts))
    ext_t = t_mag * (2.0 * rng.integers(0, 2, total) - 1.0)
    ext_idx = np.repeat(np.arange(len(r_old)), counts)

    line_r = np.concatenate([r_old, new_r])
    line_theta = np.concatenate([real.line_theta, new_theta])
    idx_all = np.concatenate([real.point_line, ext_idx, new_idx + len(r_old)])
    t_all = np.concatenate([real.point_t, ext_t, new_t])
    add_idx = np.concatenate([ext_idx, new_idx + len(r_old)])
    add_t = np.concatenate([ext_t, new_t])
    add_x, add_y = _positions(line_r, line_theta, add_idx, add_t)
    return replace(
        real,
        line_r=line_r,
        line_theta=line_theta,
        point_x=np.concatenate([real.point_x, add_x]),
        point_y=np.concatenate([real.point_y, add_y]),
        point_line=idx_all,
        point_t=t_all,
        sim_radius=R1,
    )


def densify(real: Realization, mu_new: float, seed: SeedSpec) -> Realization:
    """Coupled densification: superpose an independent PPP(mu_new - mu) on the
    existing lines, yielding a valid realization at intensity mu_new."""
    if mu_new < real.params.mu:
        raise ValueError("mu_new must be >= current mu")
    dmu = mu_new - real.params.mu
    rng = seed.rng()
    idx, t = _draw_points_on_lines(real.line_r, dmu, real.sim_radius, rng)
    x, y = _positions(real.line_r, real.line_theta, idx, t)
    return replace(
        real,
        params=replace(real.params, mu=mu_new),
        point_x=np.concatenate([real.point_x, x]),
        point_y=np.concatenate([real.point_y, y]),
        point_line=np.concatenate([real.point_line, idx]),
        point_t=np.concatenate([real.point_t, t]),
    )


def rotate_to_x_axis(real: Realization) -> Realization:
    """Rotate a Palm realization so the typical road is the x-axis.

    Valid for rotation-invariant statistics (the isotropic model only).
    """
    if not real.palm:
        raise ValueError("rotate_to_x_axis requires a Palm realization")
    theta0 = real.line_theta[0]
    c0, s0 = math.cos(theta0), math.sin(theta0)
    x = real.point_x * c0 + real.point_y * s0
    y = -real.point_x * s0 + real.point_y * c0
    theta = real.line_theta - theta0
    r = real.line_r.copy()
    t = real.point_t.copy()
    wrapped = theta < 0
    theta[wrapped] += math.pi
    r[wrapped] = -r[wrapped]
    flip = wrapped[real.point_line]
    t[flip] = -t[flip]
    return replace(real, line_r=r, line_theta=theta, point_x=x, point_y=y, point_t=t)


# --- serialization -----------------------------------------------------------

def realization_sections(real: Realization) -> str:
    """Line and point sections of the realization CSV (no metadata header)."""
    rows = ["section,lines", "line_index,r,theta"]
    for i, (r, th) in enumerate(zip(real.line_r, real.line_theta)):
        rows.append(f"{i},{float(r)!r},{float(th)!r}")
    rows.append("section,points")
    rows.append("point_index,line_index,t,x,y")
    for j in range(real.n_points):
        rows.append(
            f"{j},{int(real.point_line[j])},{float(real.point_t[j])!r},"
            f"{float(real.point_x[j])!r},{float(real.point_y[j])!r}"
        )
    return "\n".join(rows) + "\n"


def write_realization_csv(real: Realization, path) -> None:
    """Two-section CSV: lines (line_index,r,theta), points (point_index,line_index,t,x,y)."""
    with open(path, "w", newline="") as fh:
        fh.write("# plcp-realization\n")
        fh.write(f"# generator={GENERATOR_NAME}\n")
        fh.write(f"# lambda_l={real.params.lambda_l!r}\n")
        fh.write(f"# mu={real.params.mu!r}\n")
        fh.write(f"# orientation={real.params.orientation}\n")
        fh.write(f"# sim_radius={real.sim_radius!r}\n")
        fh.write(f"# obs_radius={real.obs_radius!r}\n")
        fh.write(f"# palm={real.palm}\n")
        if real.seed is not None:
            fh.write(f"# master_seed={real.seed.master_seed}\n")
            fh.write(f"# replication_index={real.seed.replication_index}\n")
        fh.write(realization_sections(real))


def read_realization_csv(path) -> Realization:
    meta: dict[str, str] = {}
    line_rows: list[tuple[float, float]] = []
    point_rows: list[tuple[int, float, float, float]] = []
    section = None
    with open(path) as fh:
        for raw in fh:
            raw = raw.strip()
            if not raw:
                continue
            if raw.startswith("#"):
                body = raw.lstrip("# ")
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            if raw.startswith("section,"):
                section = raw.split(",", 1)[1]
                continue
            if section == "lines":
                if raw.startswith("line_index"):
                    continue
                _, r, th = raw.split(",")
                line_rows.append((float(r), float(th)))
            elif section == "points":
                if raw.startswith("point_index"):
                    continue
                _, li, t, x, y = raw.split(",")
                point_rows.append((int(li), float(t), float(x), float(y)))
    params = ModelParams(
        float(meta["lambda_l"]), float(meta["mu"]), meta.get("orientation", "isotropic")
    )
    seed = None
    if "master_seed" in meta:
        seed = SeedSpec(int(meta["master_seed"]), int(meta.get("replication_index", 0)))
    lr = np.array([r for r, _ in line_rows])
    lt = np.array([t for _, t in line_rows])
    pl = np.array([li for li, *_ in point_rows], dtype=int)
    pt = np.array([t for _, t, *_ in point_rows])
    px = np.array([x for *_, x, _ in point_rows])
    py = np.array([y for *_, y in point_rows])
    return Realization(
        lr, lt, px, py, pl, pt,
        sim_radius=float(meta["sim_radius"]),
        obs_radius=float(meta["obs_radius"]),
        palm=meta.get("palm", "False") == "True",
        params=params,
        seed=seed,
    )
