import math

import numpy as np
import pytest

from plcp.quadrature import (
    QuadratureError,
    QuadratureSpec,
    integrate,
    integrate_halfline,
)

SPEC = QuadratureSpec()


def test_polynomial_is_exact():
    assert integrate(lambda x: x * x, 0.0, 1.0, SPEC) == pytest.approx(1.0 / 3.0, abs=1e-13)
    assert integrate(lambda x: x**7 - 2 * x, -1.0, 2.0, SPEC) == pytest.approx(
        (2.0**8 - 1.0) / 8.0 - (4.0 - 1.0), abs=1e-12
    )


def test_sine_over_a_period():
    assert integrate(np.sin, 0.0, math.pi, SPEC) == pytest.approx(2.0, rel=1e-12)
    assert integrate(np.sin, 0.0, 2.0 * math.pi, SPEC) == pytest.approx(0.0, abs=1e-10)


def test_sharp_gaussian_peak():
    # int exp(-a (x - 1/2)^2) over [0, 1] = sqrt(pi/a) * erf(sqrt(a)/2)
    a = 1000.0
    exact = math.sqrt(math.pi / a) * math.erf(math.sqrt(a) / 2.0)
    got = integrate(lambda x: np.exp(-a * np.square(x - 0.5)), 0.0, 1.0, SPEC)
    assert got == pytest.approx(exact, rel=1e-9)


def test_kink_with_breakpoint():
    # int_0^1 |x - 0.3| dx = (0.3^2 + 0.7^2) / 2
    exact = (0.09 + 0.49) / 2.0
    got = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, SPEC, breakpoints=(0.3,))
    assert got == pytest.approx(exact, rel=1e-12)


def test_step_discontinuity_with_breakpoint():
    f = lambda x: np.where(x < 0.3, 1.0, 0.0)  # noqa: E731
    got = integrate(f, 0.0, 1.0, SPEC, breakpoints=(0.3,))
    assert got == pytest.approx(0.3, rel=1e-12)


def test_breakpoints_outside_the_interval_are_ignored():
    got = integrate(np.exp, 0.0, 1.0, SPEC, breakpoints=(-1.0, 5.0))
    assert got == pytest.approx(math.e - 1.0, rel=1e-12)


def test_empty_interval_is_zero():
    assert integrate(np.exp, 1.0, 1.0, SPEC) == 0.0
    assert integrate(np.exp, 2.0, 1.0, SPEC) == 0.0


def test_halfline_exponential():
    assert integrate_halfline(lambda x: np.exp(-x), SPEC) == pytest.approx(1.0, rel=1e-9)
    assert integrate_halfline(lambda x: x * np.exp(-x * x), SPEC) == pytest.approx(
        0.5, rel=1e-9
    )


def test_halfline_with_scale_hint():
    # slowly decaying start: exp(-x/50) integrates to 50
    got = integrate_halfline(lambda x: np.exp(-x / 50.0), SPEC, scale=10.0)
    assert got == pytest.approx(50.0, rel=1e-8)


def test_subdivision_limit_raises():
    spec = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=3)
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.cos(40.0 * np.square(x)), 0.0, 10.0, spec)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=-1.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)


def test_halved_spec_tightens_tolerances():
    spec = QuadratureSpec()
    half = spec.halved()
    assert half.abs_tol == spec.abs_tol / 2
    assert half.rel_tol == spec.rel_tol / 2
    assert half.max_subdivisions == spec.max_subdivisions
