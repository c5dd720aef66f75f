import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splitkernel.hardy import BOUNDED, UNBOUNDED, InequalityInstance, check_boundedness
from splitkernel.kernels import catalog
from splitkernel.numerics import Interval, log_grid
from splitkernel.probe import (
    BOUNDED_CONSISTENT,
    GROWTH_DETECTED,
    FamilyMember,
    SideConditionViolated,
    apply_transform,
    envelope_bound,
    extremal_family,
    extremal_ratio_scan,
    sharp_constant_probe,
    transform_norm,
)
from splitkernel.spaces import PowerLogWeight, weighted_norm

P = PowerLogWeight.power
ONE = PowerLogWeight()
R_GRID = log_grid(1e-2, 1e2, 2)


def test_apply_transform_closed_forms():
    _, laplace = catalog("laplace")
    assert apply_transform(laplace, lambda x: np.ones_like(x), 1.0) == pytest.approx(1.0)
    assert apply_transform(laplace, lambda x: np.ones_like(x), 4.0) == pytest.approx(0.25)
    _, stieltjes = catalog("stieltjes")
    # [DERIVED] int_0^1 dx / (x + 1) = ln 2
    assert apply_transform(stieltjes, lambda x: np.ones_like(x), 1.0,
                           support=Interval(0.0, 1.0)) == pytest.approx(math.log(2))
    _, hardy = catalog("hardy")
    assert apply_transform(hardy, lambda x: np.ones_like(x), 2.0, support=Interval(0.0, 1.0)) == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(a=st.floats(-0.5, 1.0), b=st.floats(-0.5, 1.0), ca=st.floats(-3, 3), cb=st.floats(-3, 3),
       y=st.floats(0.1, 10.0), name=st.sampled_from(["laplace", "stieltjes", "struve", "sine"]))
def test_apply_transform_is_linear(a, b, ca, cb, y, name):
    _, K = catalog(name)
    iv = Interval(0.0, 2.0)
    f = lambda x: x ** a
    g = lambda x: x ** b
    lhs = apply_transform(K, lambda x: ca * f(x) + cb * g(x), y, 1e-10, iv)
    tf, tg = apply_transform(K, f, y, 1e-10, iv), apply_transform(K, g, y, 1e-10, iv)
    scale = abs(ca * tf) + abs(cb * tg) + 1e-12
    assert abs(lhs - (ca * tf + cb * tg)) <= 1e-8 * scale


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, "inf"])
@pytest.mark.parametrize("region", [1, 2])
def test_family_norms_are_exact(p, region):
    spec, _ = catalog("stieltjes")
    v = P(0.2)
    fam = extremal_family(spec, v, p, region)
    for r in (0.1, 1.0, 10.0):
        member = fam(r)
        assert member.norm == pytest.approx(weighted_norm(member.weight, v, p, member.support), rel=1e-8)


def test_family_p1_window():
    spec, _ = catalog("stieltjes")
    fam = extremal_family(spec, ONE, 1, 1)
    member = fam(2.0)
    assert member.support.hi <= 2.0
    assert member.norm == pytest.approx(member.support.hi - member.support.lo)


def test_side_conditions():
    spec, _ = catalog("hardy")
    with pytest.raises(SideConditionViolated):
        extremal_family(spec, ONE, 2, 2)
    spec, _ = catalog("stieltjes")
    with pytest.raises(SideConditionViolated):
        # s1 / v = x^-1/2 is not square integrable near the origin
        extremal_family(spec, P(0.5), 2, 1)
    inst = InequalityInstance.from_catalog("sine", P(-1.0), P(1.0), 2, 2)
    with pytest.raises(SideConditionViolated):
        extremal_ratio_scan(inst, 2, R_GRID)


def test_transform_norm_laplace_constant():
    # [DERIVED] T1_(0,1)(y) = (1 - e^-y)/y; its L_2 norm squared is 2 ln 2
    _, K = catalog("laplace")
    member = FamilyMember(ONE, Interval(0.0, 1.0), 1.0)
    assert transform_norm(K, member, ONE, 2, 1.0, 1e-9, tail_fraction=1e-4) == pytest.approx(
        math.sqrt(2 * math.log(2)), rel=1e-4)


@pytest.mark.parametrize("name, u, v", [("stieltjes", ONE, ONE), ("laplace", ONE, ONE), ("hardy", P(-1.0), ONE)])
def test_bounded_instances_probe_flat(name, u, v):
    inst = InequalityInstance.from_catalog(name, u, v, 2, 2)
    assert check_boundedness(inst).verdict == BOUNDED
    for region in (1, 2):
        try:
            rep = extremal_ratio_scan(inst, region, R_GRID)
        except SideConditionViolated:
            continue
        assert rep.verdict_hint == BOUNDED_CONSISTENT
        assert math.isfinite(rep.max_ratio)


@pytest.mark.parametrize("gamma", [0.2, -0.2])
def test_unbounded_instances_probe_growth(gamma):
    inst = InequalityInstance.from_catalog("stieltjes", ONE, P(gamma), 2, 2)
    res = check_boundedness(inst)
    assert res.verdict == UNBOUNDED
    for region, c in ((1, res.condition_one), (2, res.condition_two)):
        if c.infinite and res.spec_used.lower_flag(region):
            rep = extremal_ratio_scan(inst, region, R_GRID)
            assert rep.verdict_hint == GROWTH_DETECTED
            assert rep.growth_slope >= 0.05


def test_hardy_sharp_constant_single_member():
    # [DERIVED] for f = x^(-1/2+e) on (0,1) the Hardy ratio is 2/sqrt(1+2e)
    res = sharp_constant_probe("hardy", eps=(0.1,))
    assert res.best_ratio == pytest.approx(2 / math.sqrt(1.2), rel=1e-6)


@pytest.mark.parametrize("name", ["laplace", "stieltjes", "struve", "sine", "hardy", "bellman"])
def test_pointwise_envelope_bound(name):
    spec, K = catalog(name)
    f = lambda x: x ** -0.3
    support = Interval(0.5, 3.0)
    for y in (0.2, 1.0, 4.0):
        lhs = abs(apply_transform(K, f, y, 1e-10, support))
        assert lhs <= envelope_bound(spec, f, support, y) * (1 + 1e-6)
