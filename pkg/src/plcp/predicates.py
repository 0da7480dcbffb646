"""Robust orientation and in-circle predicates.

Each predicate first evaluates the determinant in floating point with a
forward error bound; only when the magnitude falls inside the uncertainty
band does it fall back to exact rational arithmetic (every float is a dyadic
rational, so Fraction arithmetic is exact).
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "orient2d",
    "incircle",
    "orient2d_sign",
    "incircle_sign",
    "incircle_with_scale",
]

_EPS = 2.0 ** -53
# conservative forward-error coefficients for the 2x2 / 4x4 determinant schemes
_ORIENT_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_INCIRCLE_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _sign(x) -> int:
    return int(x > 0) - int(x < 0)


def orient2d(a, b, c) -> float:
    """Twice the signed area of triangle abc; positive if counterclockwise.

    Exact sign; the magnitude is the floating-point value when the filter
    accepts, else the (possibly clamped) exact value.
    """
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    if abs(det) > _ORIENT_BOUND * detsum:
        return det
    return float(_orient2d_exact(a, b, c))


def orient2d_sign(a, b, c) -> int:
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    if abs(det) > _ORIENT_BOUND * (abs(detleft) + abs(detright)):
        return _sign(det)
    return _sign(_orient2d_exact(a, b, c))


def _orient2d_exact(a, b, c) -> Fraction:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    return (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)


def incircle(a, b, c, d) -> float:
    """In-circle determinant; positive iff d lies inside the circle through
    a, b, c taken counterclockwise. Zero iff the four points are cocircular."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    bxcy, bycx = bdx * cdy, bdy * cdx
    cxay, cyax = cdx * ady, cdy * adx
    axby, aybx = adx * bdy, ady * bdx
    det = alift * (bxcy - bycx) + blift * (cxay - cyax) + clift * (axby - aybx)
    permanent = (
        alift * (abs(bxcy) + abs(bycx))
        + blift * (abs(cxay) + abs(cyax))
        + clift * (abs(axby) + abs(aybx))
    )
    if abs(det) > _INCIRCLE_BOUND * permanent:
        return det
    return float(_incircle_exact(a, b, c, d))


def incircle_sign(a, b, c, d) -> int:
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    bxcy, bycx = bdx * cdy, bdy * cdx
    cxay, cyax = cdx * ady, cdy * adx
    axby, aybx = adx * bdy, ady * bdx
    det = alift * (bxcy - bycx) + blift * (cxay - cyax) + clift * (axby - aybx)
    permanent = (
        alift * (abs(bxcy) + abs(bycx))
        + blift * (abs(cxay) + abs(cyax))
        + clift * (abs(axby) + abs(aybx))
    )
    if abs(det) > _INCIRCLE_BOUND * permanent:
        return _sign(det)
    exact = _incircle_exact(a, b, c, d)
    return _sign(exact)


def incircle_with_scale(a, b, c, d) -> tuple[float, float]:
    """(determinant, magnitude scale) for the in-circle test.

    The determinant sign is exact (rational fallback inside the filter band);
    the scale (the permanent of the determinant scheme) lets callers apply a
    relative tie tolerance.
    """
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    bxcy, bycx = bdx * cdy, bdy * cdx
    cxay, cyax = cdx * ady, cdy * adx
    axby, aybx = adx * bdy, ady * bdx
    det = alift * (bxcy - bycx) + blift * (cxay - cyax) + clift * (axby - aybx)
    permanent = (
        alift * (abs(bxcy) + abs(bycx))
        + blift * (abs(cxay) + abs(cyax))
        + clift * (abs(axby) + abs(aybx))
    )
    if abs(det) <= _INCIRCLE_BOUND * permanent:
        det = float(_incircle_exact(a, b, c, d))
    return det, permanent


def _incircle_exact(a, b, c, d) -> Fraction:
    ax, ay = Fraction(a[0]) - Fraction(d[0]), Fraction(a[1]) - Fraction(d[1])
    bx, by = Fraction(b[0]) - Fraction(d[0]), Fraction(b[1]) - Fraction(d[1])
    cx, cy = Fraction(c[0]) - Fraction(d[0]), Fraction(c[1]) - Fraction(d[1])
    al = ax * ax + ay * ay
    bl = bx * bx + by * by
    cl = cx * cx + cy * cy
    return (
        al * (bx * cy - by * cx)
        + bl * (cx * ay - cy * ax)
        + cl * (ax * by - ay * bx)
    )
