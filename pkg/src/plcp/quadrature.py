"""Adaptive panel quadrature with fixed-order Gauss-Legendre rules.

Panels are bisected until the two-half refinement changes the panel value by
less than its share of the global tolerance. Infinite upper limits are
handled by a doubling search that stops when a whole doubling segment
contributes less than the tail bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = ["QuadratureSpec", "QuadratureError", "integrate", "integrate_halfline"]

_NODES, _WEIGHTS = leggauss(15)


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 4000
    trunc_tail: float = 1e-10

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.trunc_tail > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def halved(self) -> "QuadratureSpec":
        return QuadratureSpec(
            self.abs_tol / 2, self.rel_tol / 2, self.max_subdivisions, self.trunc_tail
        )


def _panel(f, a: float, b: float) -> float:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(_WEIGHTS, f(mid + half * _NODES)))


def integrate(f, a: float, b: float, spec: QuadratureSpec, breakpoints=()) -> float:
    """Integral of a vectorized f over [a, b], split at any interior breakpoints."""
    if b <= a:
        return 0.0
    cuts = sorted({a, b} | {float(x) for x in breakpoints if a < x < b})
    segments = [(lo, hi, _panel(f, lo, hi)) for lo, hi in zip(cuts, cuts[1:])]
    total = 0.0
    length = b - a
    rough = sum(abs(v) for *_, v in segments) + spec.abs_tol
    n_splits = 0
    stack = segments[::-1]
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid)
        right = _panel(f, mid, hi)
        err = abs(left + right - whole)
        budget = max(spec.abs_tol, spec.rel_tol * rough) * (hi - lo) / length
        if err <= budget or (hi - lo) < 1e-14 * length:
            total += left + right
            continue
        n_splits += 1
        if n_splits > spec.max_subdivisions:
            raise QuadratureError(
                f"subdivision limit {spec.max_subdivisions} exceeded on [{a}, {b}]"
            )
        stack.append((mid, hi, right))
        stack.append((lo, mid, left))
    return total


def integrate_halfline(f, spec: QuadratureSpec, scale: float = 1.0) -> float:
    """Integral of f over [0, inf) for f with an integrable tail.

    Integrates doubling segments [0,s], [s,2s], ... and stops once a segment
    contributes less than trunc_tail in absolute value.
    """
    total = 0.0
    lo, hi = 0.0, scale
    for _ in range(128):
        part = integrate(f, lo, hi, spec)
        total += part
        if abs(part) < spec.trunc_tail and lo > 0:
            return total
        lo, hi = hi, 2 * hi
    raise QuadratureError("half-line truncation did not converge in 128 doublings")
