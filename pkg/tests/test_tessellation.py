import math

import numpy as np
import pytest

from plcp.rng import SeedSpec
from plcp.sampler import ModelParams, Realization, densify, rotate_to_x_axis, sample_palm, sample_stationary
from plcp.tessellation import (
    DegenerateInputError,
    UnboundedCellError,
    build_voronoi,
    delaunay_violations,
    facet_counts,
    gqp_census,
    typical_cell_extent,
    typical_cell_polygon,
)

P11 = ModelParams(1.0, 1.0)


def _sample(seed=0, obs=4.0, buffer=1.0, params=P11):
    return sample_stationary(params, obs, buffer, SeedSpec(1000, seed))


def test_three_generators_have_the_circumcenter_as_only_vertex():
    tess = build_voronoi(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert tess.vertices.shape == (1, 2)
    assert np.allclose(tess.vertices[0], [0.5, 0.5])
    assert len(tess.edges) == 3
    assert all(e.v2 is None and e.direction is not None for e in tess.edges)
    assert all(not c.bounded for c in tess.cells)


def test_single_and_pair_of_generators():
    one = build_voronoi(np.array([[1.0, 2.0]]))
    assert len(one.cells) == 1 and not one.cells[0].bounded
    two = build_voronoi(np.array([[0.0, 0.0], [2.0, 0.0]]))
    assert len(two.edges) == 1
    direction = two.edges[0].direction
    # the single bisector edge is vertical
    assert abs(direction[0]) < 1e-12 and abs(abs(direction[1]) - 1.0) < 1e-12


def test_duplicate_generators_are_rejected():
    with pytest.raises(DegenerateInputError):
        build_voronoi(np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0]]))


def test_vertices_are_equidistant_from_three_nearest_generators():
    real = _sample(3)
    tess = build_voronoi(real)
    assert len(tess.vertices) > 10
    gen = tess.generators
    for v in tess.vertices:
        d = np.hypot(gen[:, 0] - v[0], gen[:, 1] - v[1])
        dmin = d.min()
        # at least three generators achieve the minimum distance, and no
        # generator is closer: the defining property of a Voronoi vertex
        assert np.count_nonzero(d <= dmin * (1.0 + 1e-9) + 1e-12) >= 3


def test_bounded_cells_contain_their_generator():
    real = _sample(4)
    tess = build_voronoi(real)
    gen = tess.generators
    checked = 0
    for cell in tess.cells:
        if not cell.bounded:
            continue
        poly = tess.vertices[list(cell.vertex_ids)]
        g = gen[cell.generator]
        # the generator is closer to itself than to any other generator at
        # every vertex of its cell boundary, by convexity of the cell
        others = np.delete(gen, cell.generator, axis=0)
        for v in poly:
            dg = math.hypot(v[0] - g[0], v[1] - g[1])
            dmin = np.hypot(others[:, 0] - v[0], others[:, 1] - v[1]).min()
            assert dg <= dmin * (1.0 + 1e-9)
        checked += 1
    assert checked > 0


def test_facet_counts_on_the_triangle_example():
    tess = build_voronoi(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    fc = facet_counts(tess, 1.0)
    assert (fc.n_vertices, fc.n_edges, fc.n_cells) == (1, 0, 1)
    # enlarging the window picks up the other two generators
    fc2 = facet_counts(tess, 1.5)
    assert fc2.n_cells == 3


def test_facet_counts_respect_the_observation_window():
    real = _sample(5)
    tess = build_voronoi(real)
    with pytest.raises(ValueError):
        facet_counts(tess, real.obs_radius + 1.0)
    small = facet_counts(tess, 1.0)
    big = facet_counts(tess, real.obs_radius)
    assert small.n_vertices <= big.n_vertices
    assert small.n_edges <= big.n_edges
    assert small.n_cells <= big.n_cells


def test_gqp_census_zero_on_sampled_points():
    for i in range(20):
        assert gqp_census(_sample(100 + i)) == 0


def test_gqp_census_detects_crafted_cocircularity():
    square = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    assert gqp_census(square) >= 1
    # embedding the degenerate square among points in general position
    extra = np.array([[3.0, 0.3], [-2.7, 1.9], [0.4, -3.1]])
    assert gqp_census(np.vstack([square, extra])) >= 1


def test_gqp_census_small_inputs():
    assert gqp_census(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])) == 0


def test_delaunay_has_no_violations_on_sampled_points():
    for i in range(10):
        assert delaunay_violations(_sample(200 + i)) == 0


def _manual_palm(points, sim_radius=10.0, mu=1.0):
    """Palm realization with prescribed off-origin points, all parked on the
    typical road's normal coordinates for extent testing."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    # every auxiliary point is attributed to a dummy second road
    line_r = np.array([0.0, 1.0])
    line_theta = np.array([0.0, 0.5])
    x = np.concatenate([[0.0], pts[:, 0]])
    y = np.concatenate([[0.0], pts[:, 1]])
    line = np.concatenate([[0], np.ones(n, dtype=int)])
    t = np.zeros(n + 1)
    return Realization(
        line_r, line_theta, x, y, line, t,
        sim_radius=sim_radius, obs_radius=sim_radius, palm=True,
        params=ModelParams(1.0, mu), seed=None,
    )


def test_typical_cell_of_a_crafted_square_configuration():
    real = _manual_palm([[2.0, 0.0], [-2.0, 0.0], [0.0, 2.0], [0.0, -2.0]])
    poly = typical_cell_polygon(real)
    assert sorted(map(tuple, np.round(poly, 9).tolist())) == sorted(
        [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
    )
    ext = typical_cell_extent(real)
    assert ext.s_plus == pytest.approx(1.0)
    assert ext.s_minus == pytest.approx(1.0)
    assert ext.width == pytest.approx(2.0)
    assert ext.area == pytest.approx(4.0)


def test_typical_cell_requires_palm_and_rotation():
    stationary = sample_stationary(P11, 2.0, 2.0, SeedSpec(30))
    with pytest.raises(ValueError):
        typical_cell_polygon(stationary)
    unrotated = sample_palm(P11, 2.0, 4.0, SeedSpec(31))
    if abs(unrotated.line_theta[0]) > 1e-9:
        with pytest.raises(ValueError):
            typical_cell_extent(unrotated)


def test_unbounded_cell_is_reported():
    # all constraints on one side of the road: the cell escapes downward
    real = _manual_palm([[0.0, 2.0], [1.0, 3.0], [-1.0, 2.5]])
    with pytest.raises(UnboundedCellError):
        typical_cell_extent(real)
    # too small a window to certify boundedness
    tight = _manual_palm(
        [[2.0, 0.0], [-2.0, 0.0], [0.0, 2.0], [0.0, -2.0]], sim_radius=2.5
    )
    with pytest.raises(UnboundedCellError):
        typical_cell_polygon(tight)


def test_extent_agrees_with_the_clipped_polygon():
    params = ModelParams(1.0, 10.0)
    for i in range(25):
        real = rotate_to_x_axis(sample_palm(params, 4.0, 4.0, SeedSpec(500, i)))
        try:
            ext = typical_cell_extent(real)
        except UnboundedCellError:
            continue
        poly = typical_cell_polygon(real)
        # the polygon's intersection with the y-axis is [-s_minus, s_plus]
        ys = []
        n = len(poly)
        for k in range(n):
            p, q = poly[k], poly[(k + 1) % n]
            if (p[0] - 0.0) * (q[0] - 0.0) <= 0.0 and p[0] != q[0]:
                ys.append(p[1] + (0.0 - p[0]) * (q[1] - p[1]) / (q[0] - p[0]))
        assert ys
        assert max(ys) == pytest.approx(ext.s_plus, rel=1e-6, abs=1e-9)
        assert min(ys) == pytest.approx(-ext.s_minus, rel=1e-6, abs=1e-9)
        assert ext.width == pytest.approx(poly[:, 0].max() - poly[:, 0].min())


def test_densification_shrinks_the_typical_cell():
    params = ModelParams(1.0, 5.0)
    shrunk = 0
    for i in range(15):
        real = rotate_to_x_axis(sample_palm(params, 4.0, 4.0, SeedSpec(600, i)))
        denser = densify(real, 50.0, SeedSpec(601, i))
        try:
            a = typical_cell_extent(real)
            b = typical_cell_extent(denser)
        except UnboundedCellError:
            continue
        assert b.area <= a.area + 1e-12
        assert b.width <= a.width + 1e-12
        assert b.s_plus <= a.s_plus + 1e-12
        if b.area < a.area:
            shrunk += 1
    assert shrunk > 0
