"""Cox-Voronoi tessellation: construction, edge-corrected facet counts,
degeneracy census, and typical-cell extraction.

Construction is delegated to Qhull (scipy.spatial); topology-sensitive
checks (cocircularity census, Delaunay validation) use the exact predicates
from :mod:`plcp.predicates`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import Delaunay, QhullError, Voronoi

from .predicates import incircle_sign, incircle_with_scale, orient2d_sign
from .sampler import Realization

__all__ = [
    "DegenerateInputError",
    "UnboundedCellError",
    "Edge",
    "Cell",
    "Tessellation",
    "FacetCounts",
    "CellExtent",
    "build_voronoi",
    "facet_counts",
    "gqp_census",
    "delaunay_violations",
    "typical_cell_polygon",
    "typical_cell_extent",
]


class DegenerateInputError(ValueError):
    """Input the tessellation cannot handle (duplicates, collinear sets)."""


class UnboundedCellError(RuntimeError):
    """The typical cell is not certifiably bounded inside the simulation window."""


@dataclass(frozen=True)
class Edge:
    """Voronoi edge. Bounded: both vertex ids set. Unbounded: v2 is None and
    direction is the outgoing unit vector from vertex v1."""

    v1: Optional[int]
    v2: Optional[int]
    direction: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class Cell:
    """Voronoi cell: generator point index plus ordered boundary vertex ids
    (-1 marks the unbounded part, as in the underlying Qhull regions)."""

    generator: int
    vertex_ids: tuple[int, ...]
    bounded: bool


@dataclass
class Tessellation:
    vertices: np.ndarray  # (m, 2)
    edges: list[Edge]
    cells: list[Cell]
    generators: np.ndarray  # (n, 2)
    obs_radius: Optional[float] = None


@dataclass(frozen=True)
class FacetCounts:
    n_vertices: int
    n_edges: int
    n_cells: int
    counting_radius: float


@dataclass(frozen=True)
class CellExtent:
    s_plus: float
    s_minus: float
    width: float
    area: float


def _as_points(real) -> np.ndarray:
    if isinstance(real, Realization):
        return real.positions()
    return np.asarray(real, dtype=float)


def build_voronoi(real) -> Tessellation:
    """Voronoi tessellation of the realization's points (or an (n,2) array)."""
    pts = _as_points(real)
    if len(pts) < 1:
        raise ValueError("need at least one point")
    obs = real.obs_radius if isinstance(real, Realization) else None
    if len(np.unique(pts, axis=0)) != len(pts):
        raise DegenerateInputError("duplicate generator points")
    if len(pts) == 1:
        return Tessellation(
            np.empty((0, 2)), [], [Cell(0, (), False)], pts, obs
        )
    if len(pts) == 2:
        d = pts[1] - pts[0]
        n = np.array([-d[1], d[0]]) / np.hypot(*d)
        return Tessellation(
            np.empty((0, 2)),
            [Edge(None, None, (float(n[0]), float(n[1])))],
            [Cell(0, (), False), Cell(1, (), False)],
            pts,
            obs,
        )
    try:
        vor = Voronoi(pts)
    except QhullError as exc:
        raise DegenerateInputError(f"Qhull rejected the input: {exc}") from exc

    center = pts.mean(axis=0)
    edges: list[Edge] = []
    for (p1, p2), (v1, v2) in zip(vor.ridge_points, vor.ridge_vertices):
        if v1 >= 0 and v2 >= 0:
            edges.append(Edge(int(v1), int(v2)))
            continue
        v = v2 if v1 < 0 else v1
        tangent = pts[p2] - pts[p1]
        tangent /= np.hypot(*tangent)
        normal = np.array([-tangent[1], tangent[0]])
        midpoint = 0.5 * (pts[p1] + pts[p2])
        if np.dot(midpoint - center, normal) < 0:
            normal = -normal
        edges.append(Edge(int(v), None, (float(normal[0]), float(normal[1]))))

    cells = []
    for gen, region_idx in enumerate(vor.point_region):
        region = vor.regions[region_idx]
        cells.append(Cell(gen, tuple(region), bool(region) and -1 not in region))
    return Tessellation(vor.vertices, edges, cells, pts, obs)


def facet_counts(tess: Tessellation, counting_radius: float) -> FacetCounts:
    """Minus-sampling counts inside the disk of radius counting_radius.

    Vertices and generators are counted when strictly inside; bounded edges
    by their midpoint; unbounded edges never.
    """
    if tess.obs_radius is not None and counting_radius > tess.obs_radius:
        raise ValueError(
            f"counting_radius {counting_radius} exceeds obs_radius {tess.obs_radius}"
        )
    cr2 = counting_radius * counting_radius
    nv = 0
    if len(tess.vertices):
        nv = int(np.count_nonzero(np.einsum("ij,ij->i", tess.vertices, tess.vertices) < cr2))
    ne = 0
    for e in tess.edges:
        if e.v1 is None or e.v2 is None:
            continue
        mid = 0.5 * (tess.vertices[e.v1] + tess.vertices[e.v2])
        if mid[0] * mid[0] + mid[1] * mid[1] < cr2:
            ne += 1
    nc = int(
        np.count_nonzero(
            np.einsum("ij,ij->i", tess.generators, tess.generators) < cr2
        )
    )
    return FacetCounts(nv, ne, nc, counting_radius)


def _delaunay_certificates(pts: np.ndarray):
    """Yield (a, b, c, d) for every interior Delaunay ridge, once per ridge."""
    tri = Delaunay(pts)
    for i, simplex in enumerate(tri.simplices):
        for k in range(3):
            j = tri.neighbors[i, k]
            if j < i:  # visit each shared ridge once; skips hull (-1) too
                continue
            opposite = [v for v in tri.simplices[j] if v not in simplex]
            if len(opposite) != 1:
                continue
            a, b, c = pts[simplex]
            d = pts[opposite[0]]
            yield a, b, c, d


def gqp_census(real) -> int:
    """Number of exactly cocircular quadruples among the Delaunay certificates.

    Almost surely zero for sampled realizations; positive for crafted
    degenerate inputs.
    """
    pts = _as_points(real)
    if len(pts) < 4:
        return 0
    try:
        certificates = list(_delaunay_certificates(pts))
    except QhullError:
        return 0
    return sum(1 for a, b, c, d in certificates if incircle_sign(a, b, c, d) == 0)


def delaunay_violations(real, rel_tol: float = 1e-9) -> int:
    """Certificates where the fourth point lies inside the circumcircle by
    more than rel_tol relative to the determinant scale.

    Qhull merges near-cocircular configurations within its own tolerance
    (~1e-13 relative flips occur on sampled data), so topology validation
    uses a relative tie band; the exact census is :func:`gqp_census`.
    """
    pts = _as_points(real)
    if len(pts) < 4:
        return 0
    count = 0
    for a, b, c, d in _delaunay_certificates(pts):
        det, scale = incircle_with_scale(a, b, c, d)
        # incircle sign convention assumes ccw triangle; flip for cw
        if orient2d_sign(a, b, c) < 0:
            det = -det
        if det > rel_tol * scale:
            count += 1
    return count


def _clip_halfplane(poly: np.ndarray, px: float, py: float) -> np.ndarray:
    """Clip polygon to {q : q . (px,py) <= (px^2+py^2)/2} (bisector of origin
    and the point (px,py), origin side)."""
    bound = 0.5 * (px * px + py * py)
    dots = poly[:, 0] * px + poly[:, 1] * py
    inside = dots <= bound
    if inside.all():
        return poly
    out = []
    n = len(poly)
    for i in range(n):
        j = (i + 1) % n
        if inside[i]:
            out.append(poly[i])
        if inside[i] != inside[j]:
            frac = (bound - dots[i]) / (dots[j] - dots[i])
            out.append(poly[i] + frac * (poly[j] - poly[i]))
    return np.array(out) if out else np.empty((0, 2))


def typical_cell_polygon(real: Realization) -> np.ndarray:
    """Polygon of the typical cell (Voronoi cell of the origin atom) of a
    Palm realization, via incremental nearest-first half-plane clipping."""
    if not real.palm:
        raise ValueError("typical cell requires a Palm realization")
    x = real.point_x[1:]
    y = real.point_y[1:]
    if len(x) == 0:
        raise UnboundedCellError("no points besides the origin atom")
    norm2 = x * x + y * y
    order = np.argsort(norm2)
    L = real.sim_radius
    poly = np.array([[-L, -L], [L, -L], [L, L], [-L, L]], dtype=float)
    max2 = 2.0 * L * L
    for idx in order:
        if norm2[idx] > 4.0 * max2:  # bisector cannot reach the current cell
            break
        poly = _clip_halfplane(poly, x[idx], y[idx])
        if len(poly) == 0:
            raise UnboundedCellError("typical cell clipped to nothing (numeric)")
        max2 = float(np.max(poly[:, 0] ** 2 + poly[:, 1] ** 2))
    if 4.0 * max2 > L * L:
        raise UnboundedCellError(
            "typical cell may extend past half the simulation radius; enlarge buffer"
        )
    return poly


def typical_cell_extent(real: Realization) -> CellExtent:
    """Extent statistics of the typical cell for a Palm realization that has
    been rotated so the typical road is the x-axis."""
    if not real.palm:
        raise ValueError("typical cell requires a Palm realization")
    if abs(real.line_theta[0]) > 1e-9:
        raise ValueError("realization must be rotated so the typical road is the x-axis")
    poly = typical_cell_polygon(real)

    x = real.point_x[1:]
    y = real.point_y[1:]
    up = y > 0
    down = y < 0
    if not up.any() or not down.any():
        raise UnboundedCellError("no half-plane constraints on one side of the road")
    # cell boundary along the y-axis: min over bisector intercepts
    s_plus = float(np.min((x[up] ** 2 + y[up] ** 2) / (2.0 * y[up])))
    s_minus = float(np.min((x[down] ** 2 + y[down] ** 2) / (-2.0 * y[down])))
    if 2.0 * max(s_plus, s_minus) > real.sim_radius:
        raise UnboundedCellError("cell axis extent too close to the window; enlarge buffer")

    width = float(poly[:, 0].max() - poly[:, 0].min())
    xs, ys = poly[:, 0], poly[:, 1]
    area = 0.5 * abs(float(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))))
    return CellExtent(s_plus, s_minus, width, area)
