import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splitkernel.kernels import (
    CATALOG_NAMES,
    EstimateViolated,
    ParamOutOfRange,
    PhiMap,
    SplittingKernelSpec,
    UnknownKernel,
    catalog,
    parse_kernel,
    upper_envelope,
    validate_estimate,
)
from splitkernel.numerics import Interval, log_grid
from splitkernel.spaces import PowerLogWeight


def _exps(w):
    return None if w is None else (w.a, w.b)


@pytest.mark.parametrize("name, params, phi_m, s1, w1, s2, w2, lower", [
    ("hardy", {}, 1, (0, 0), (0, 0), None, None, (True, False)),
    ("bellman", {}, 1, None, None, (-1, 0), (0, 0), (False, True)),
    ("riemann-liouville", {"alpha": 0.5}, 1, (0, 0), (-0.5, 0), None, None, (False, False)),
    ("sine", {}, -1, (1, 0), (1, 0), (0, 0), (0, 0), (True, False)),
    ("struve", {"alpha": 1.0}, -1, (2.5, 0), (2.5, 0), (0.5, 0), (0.5, 0), (True, True)),
    ("struve", {"alpha": 0.25}, -1, (1.75, 0), (1.75, 0), (0, 0), (0, 0), (True, False)),
    ("stieltjes", {"lam": 1.0}, 1, (0, 0), (-1, 0), (-1, 0), (0, 0), (True, True)),
    ("laplace", {"n": 2}, -1, (0, 0), (0, 0), (-2, 0), (-2, 0), (True, False)),
])
def test_catalog_data(name, params, phi_m, s1, w1, s2, w2, lower):
    spec, K = catalog(name, **params)
    assert spec.phi.m == phi_m
    assert _exps(spec.s1) == s1 and _exps(spec.w1) == w1
    assert _exps(spec.s2) == s2 and _exps(spec.w2) == w2
    assert (spec.lower1, spec.lower2) == lower
    assert K.name == name


def test_laplace_constant_is_factorial():
    for n in (1, 2, 3, 5):
        assert catalog("laplace", n=n)[0].C2 == math.factorial(n)


def test_catalog_errors():
    with pytest.raises(UnknownKernel):
        catalog("hankel")
    with pytest.raises(ParamOutOfRange):
        catalog("struve", alpha=-0.5)
    with pytest.raises(ParamOutOfRange):
        catalog("stieltjes", lam=0.0)
    with pytest.raises(ParamOutOfRange):
        catalog("riemann-liouville", alpha=1.5)
    with pytest.raises(ParamOutOfRange):
        catalog("laplace", n=0)


def test_parse_kernel_aliases():
    spec, K = parse_kernel("stieltjes:lambda=2")
    assert K.params == {"lam": 2.0}
    assert K.label() == "stieltjes:lam=2"
    assert parse_kernel("struve")[1].params == {"alpha": 1.0}
    with pytest.raises(UnknownKernel):
        parse_kernel("nope:x=1")


@pytest.mark.parametrize("name, x, y, expected", [
    ("laplace", 0.5, 1.0, 1.0),
    ("laplace", 2.0, 1.0, 0.5),
    ("hardy", 3.0, 2.0, 0.0),
    ("hardy", 2.0, 2.0, 1.0),
])
def test_upper_envelope_examples(name, x, y, expected):
    spec, _ = catalog(name)
    assert upper_envelope(spec, x, y) == pytest.approx(expected)


@pytest.mark.parametrize("name", [n for n in CATALOG_NAMES if n != "riemann-liouville"])
def test_validate_estimate(name):
    spec, K = catalog(name)
    rep = validate_estimate(spec, K, 10_000)
    print(f"{name}: max |K|/envelope {rep.max_upper_ratio:.6g}, lower {rep.min_lower_ratio}")
    assert rep.max_upper_ratio <= 1 + 1e-9


def test_validate_estimate_examples():
    rep = validate_estimate(*catalog("laplace", n=2), 10_000)
    assert rep.max_upper_ratio <= 1 + 1e-9
    rep = validate_estimate(*catalog("sine"), 10_000)
    assert rep.min_lower_ratio[1] >= math.sin(1.0) - 1e-12
    rep = validate_estimate(*catalog("stieltjes", lam=1.0), 10_000)
    assert min(rep.min_lower_ratio.values()) >= 0.5


def test_validate_estimate_flags_violation():
    spec, K = catalog("hardy")
    tight = SplittingKernelSpec(s1=spec.s1, s2=None, w1=spec.w1, w2=None, phi=PhiMap(1.0, 1.0), C1=0.5)
    with pytest.raises(EstimateViolated) as err:
        validate_estimate(tight, K, 1000)
    assert err.value.x <= err.value.y
    with pytest.raises(ValueError):
        validate_estimate(spec, K, 10)


@pytest.mark.parametrize("alpha", [0.75, 1.0, 2.0])
def test_struve_two_sided(alpha):
    spec, K = catalog("struve", alpha=alpha)
    rep = validate_estimate(spec, K, 10_000)
    print(f"struve alpha={alpha}: K/envelope in [{rep.min_two_sided_ratio:.4g}, {rep.max_upper_ratio:.4g}]")
    assert 0 < rep.min_two_sided_ratio <= rep.max_upper_ratio <= 1 + 1e-9


def test_kernels_finite():
    x = np.geomspace(1e-3, 1e3, 60)
    X, Y = np.meshgrid(x, x)
    for name in CATALOG_NAMES:
        _, K = catalog(name)
        assert np.all(np.isfinite(K(X, Y))), name


@settings(max_examples=40, deadline=None)
@given(kappa=st.floats(0.01, 100.0), m=st.floats(-4.0, 4.0).filter(lambda t: abs(t) > 0.05))
def test_phi_round_trip(kappa, m):
    phi = PhiMap(kappa, m)
    t = log_grid(1e-2, 1e2, 5)
    assert np.allclose(phi(phi.inverse(t)), t, rtol=1e-12, atol=0)
    assert phi.increasing == (m > 0)


def test_phi_preimage():
    dec = PhiMap(1.0, -1.0)
    assert dec.preimage(Interval(2.0, math.inf)) == Interval(0.0, 0.5)
    inc = PhiMap(4.0, 2.0)
    iv = inc.preimage(Interval(0.0, 16.0))
    assert iv.lo == 0.0 and iv.hi == pytest.approx(2.0)
    with pytest.raises(ValueError):
        PhiMap(1.0, 0.0)
