import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splitkernel.numerics import (
    DivergentIntegral,
    Interval,
    NonConvergent,
    integrate,
    log_grid,
    sup_scan,
)

REL = 1e-10


def test_interval_rejects_bad_bounds():
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)
    with pytest.raises(ValueError):
        Interval(-1.0, 1.0)


# [DERIVED] closed forms: int_0^1 x^-1/2 = 2, int_0^inf dx/(1+x^2) = pi/2,
# int_0^inf e^-x = 1, int_1^inf x^-2 = 1, int_0^inf x^(1/2)/(1+x)^2 = pi/2
@pytest.mark.parametrize("f, iv, expected", [
    (lambda x: x ** -0.5, Interval(0.0, 1.0), 2.0),
    (lambda x: 1.0 / (1.0 + x * x), Interval(0.0, math.inf), math.pi / 2),
    (lambda x: np.exp(-x), Interval(0.0, math.inf), 1.0),
    (lambda x: x ** -2.0, Interval(1.0, math.inf), 1.0),
    (lambda x: np.sqrt(x) / (1.0 + x) ** 2, Interval(0.0, math.inf), math.pi / 2),
])
def test_integrate_closed_forms(f, iv, expected):
    res = integrate(f, iv, REL)
    assert res.converged
    assert res.value == pytest.approx(expected, rel=1e-9)
    assert res.error_estimate >= 0


def test_integrate_kink_with_break_point():
    res = integrate(lambda x: np.abs(np.log(x)), Interval(0.1, 10.0), REL, points=(1.0,))
    # [DERIVED] 2*(1 - 0.1 + 0.1 ln 0.1) ... computed piecewise by hand:
    # int_0.1^1 -ln x = 0.9 - 0.1*ln(10); int_1^10 ln x = 10 ln 10 - 9
    expected = (0.9 - 0.1 * math.log(10)) + (10 * math.log(10) - 9)
    assert res.value == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("f, iv", [
    (lambda x: 1.0 / x, Interval(1.0, math.inf)),
    (lambda x: x ** -1.5, Interval(0.0, 1.0)),
    (lambda x: np.ones_like(x), Interval(0.0, math.inf)),
])
def test_integrate_detects_divergence(f, iv):
    with pytest.raises(DivergentIntegral):
        integrate(f, iv, REL)


def test_integrate_nonstrict_reports_failure():
    res = integrate(lambda x: np.sin(1.0 / x) / x, Interval(1e-8, 1.0), 1e-12, max_panels=20, strict=False)
    assert not res.converged
    with pytest.raises(NonConvergent):
        integrate(lambda x: np.sin(1.0 / x) / x, Interval(1e-8, 1.0), 1e-12, max_panels=20)


def test_integrate_rejects_nonpositive_tolerance():
    with pytest.raises(ValueError):
        integrate(lambda x: x, Interval(0.0, 1.0), 0.0)


def test_log_grid():
    g = log_grid(1e-2, 1e2, 4)
    assert g.size == 17
    assert g[0] == pytest.approx(1e-2) and g[-1] == pytest.approx(1e2)
    assert np.allclose(np.diff(np.log10(g)), 0.25)
    with pytest.raises(ValueError):
        log_grid(1.0, 0.5, 4)


def test_sup_scan_reports_max_and_argmax():
    grid = log_grid(1e-3, 1e3, 8)
    scan = sup_scan(lambda r: r / (1 + r * r), grid)
    assert scan.sup_estimate == pytest.approx(0.5)
    assert scan.argmax in grid
    assert scan.sup_estimate == np.max(scan.values)


def test_sup_scan_infinite_value():
    scan = sup_scan(lambda r: math.inf if r > 1 else 1.0, log_grid(1e-2, 1e2, 2))
    assert math.isinf(scan.sup_estimate)
    assert math.isnan(scan.left_slope)


power = st.floats(-0.9, 2.0)


@settings(max_examples=25, deadline=None)
@given(a=power, b=power, ca=st.floats(-3, 3), cb=st.floats(-3, 3))
def test_integrate_is_linear(a, b, ca, cb):
    iv = Interval(0.0, 1.0)
    f = lambda x: x ** a
    g = lambda x: x ** b
    lhs = integrate(lambda x: ca * f(x) + cb * g(x), iv, REL).value
    rhs = ca * integrate(f, iv, REL).value + cb * integrate(g, iv, REL).value
    scale = abs(ca) * integrate(f, iv, REL).value + abs(cb) * integrate(g, iv, REL).value
    assert abs(lhs - rhs) <= 10 * REL * scale + 1e-300


@settings(max_examples=25, deadline=None)
@given(a=st.floats(-0.9, 3.0), split=st.floats(0.01, 100.0))
def test_integrate_is_additive(a, split):
    f = lambda x: x ** a * np.exp(-x)
    whole = integrate(f, Interval(0.0, math.inf), REL).value
    parts = integrate(f, Interval(0.0, split), REL).value + integrate(f, Interval(split, math.inf), REL).value
    assert parts == pytest.approx(whole, rel=10 * REL)


@settings(max_examples=25, deadline=None)
@given(s=st.floats(-3.0, 3.0))
def test_sup_scan_monomial_slopes(s):
    scan = sup_scan(lambda r: r ** s, log_grid(1e-3, 1e3, 8))
    assert scan.left_slope == pytest.approx(s, abs=1e-3)
    assert scan.right_slope == pytest.approx(s, abs=1e-3)
