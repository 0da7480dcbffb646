from fractions import Fraction

import numpy as np
import pytest

from plcp.predicates import (
    incircle,
    incircle_sign,
    incircle_with_scale,
    orient2d,
    orient2d_sign,
)


def test_orientation_basic():
    a, b = (0.0, 0.0), (1.0, 0.0)
    assert orient2d_sign(a, b, (0.0, 1.0)) == 1
    assert orient2d_sign(a, b, (0.0, -1.0)) == -1
    assert orient2d_sign(a, b, (2.0, 0.0)) == 0
    assert orient2d(a, b, (0.0, 1.0)) == pytest.approx(1.0)


def test_orientation_exact_on_collinear_near_ties():
    # collinear triples whose float determinant underflows the naive filter
    a = (0.5, 0.5)
    b = (12.0, 12.0)
    c = (24.0, 24.0)
    assert orient2d_sign(a, b, c) == 0
    # one-ulp vertical perturbation must flip the sign deterministically
    up = (24.0, np.nextafter(24.0, np.inf))
    down = (24.0, np.nextafter(24.0, -np.inf))
    assert orient2d_sign(a, b, up) == 1
    assert orient2d_sign(a, b, down) == -1


def test_orientation_sign_matches_rational_arithmetic():
    rng = np.random.default_rng(3)
    for _ in range(300):
        pts = rng.uniform(-1, 1, size=(3, 2))
        a, b, c = (tuple(p) for p in pts)
        exact = (Fraction(a[0]) - Fraction(c[0])) * (Fraction(b[1]) - Fraction(c[1])) - (
            Fraction(a[1]) - Fraction(c[1])
        ) * (Fraction(b[0]) - Fraction(c[0]))
        want = (exact > 0) - (exact < 0)
        assert orient2d_sign(a, b, c) == want


def test_incircle_basic():
    # unit circle through three points, counterclockwise
    a, b, c = (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)
    assert incircle_sign(a, b, c, (0.0, 0.0)) == 1
    assert incircle_sign(a, b, c, (2.0, 0.0)) == -1
    assert incircle_sign(a, b, c, (0.0, -1.0)) == 0
    assert incircle(a, b, c, (0.0, 0.0)) > 0


def test_incircle_exact_zero_on_rational_cocircular_points():
    # 3-4-5 lattice points on the circle of radius 5
    a, b, c = (5.0, 0.0), (0.0, 5.0), (-5.0, 0.0)
    for d in ((3.0, -4.0), (4.0, -3.0), (-3.0, -4.0), (0.0, -5.0)):
        assert incircle_sign(a, b, c, d) == 0


def test_incircle_one_ulp_perturbation():
    a, b, c = (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)
    inside = (0.0, np.nextafter(-1.0, 0.0))
    outside = (0.0, np.nextafter(-1.0, -np.inf))
    assert incircle_sign(a, b, c, inside) == 1
    assert incircle_sign(a, b, c, outside) == -1


def test_incircle_sign_matches_rational_arithmetic():
    rng = np.random.default_rng(4)
    for _ in range(200):
        pts = rng.uniform(-1, 1, size=(4, 2))
        a, b, c, d = (tuple(p) for p in pts)
        ax, ay = Fraction(a[0]) - Fraction(d[0]), Fraction(a[1]) - Fraction(d[1])
        bx, by = Fraction(b[0]) - Fraction(d[0]), Fraction(b[1]) - Fraction(d[1])
        cx, cy = Fraction(c[0]) - Fraction(d[0]), Fraction(c[1]) - Fraction(d[1])
        exact = (
            (ax * ax + ay * ay) * (bx * cy - by * cx)
            + (bx * bx + by * by) * (cx * ay - cy * ax)
            + (cx * cx + cy * cy) * (ax * by - ay * bx)
        )
        want = (exact > 0) - (exact < 0)
        assert incircle_sign(a, b, c, d) == want


def test_incircle_with_scale():
    a, b, c = (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)
    det, scale = incircle_with_scale(a, b, c, (0.0, 0.0))
    assert det == pytest.approx(incircle(a, b, c, (0.0, 0.0)))
    assert scale > 0
    det0, _ = incircle_with_scale(a, b, c, (0.0, -1.0))
    assert det0 == 0.0
