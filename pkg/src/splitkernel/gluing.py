"""Gluing two split Hardy-type conditions into one joint supremum.

Increasing psi (hypotheses: s2/s1 nonincreasing, w1(psi) ~ s2, w2(psi) ~ s1):

    split1(t) = ||w1 f||_{L_q(psi(t), inf)} ||s1 g||_{L_p(0, t)}
    split2(t) = ||w2 f||_{L_q(0, psi(t))}   ||s2 g||_{L_p(t, inf)}
    joint(t)  = [w1(psi)^q int_0^psi w2^q f^q + w2(psi)^q int_psi^inf w1^q f^q]^(1/q)
              * [s1(t)^-p int_0^t s1^p g^p + s2(t)^-p int_t^inf s2^p g^p]^(1/p)

Decreasing psi (hypotheses: s2/s1 nonincreasing, w_j(psi) ~ 1/s_j): the
f-integrals of split1 and split2 move to (0, psi(t)) and (psi(t), inf) with
w1 and w2 respectively, and the joint f-factor becomes

    [w1(psi)^-q int_0^psi w1^q f^q + w2(psi)^-q int_psi^inf w2^q f^q]^(1/q).

Both suprema are finite together exactly when the joint one is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .hardy import (
    FINITE,
    INCONCLUSIVE,
    INFINITE,
    ConditionVerdict,
    classify_growth,
    hardy_condition,
)
from .kernels import PhiMap
from .numerics import DEFAULT_GRID, DivergentIntegral, Interval, integrate, log_grid, sup_scan
from .spaces import (
    INFINITY,
    ORIGIN,
    Exponent,
    PowerLogWeight,
    powerlog_integral,
    powerlog_norm_class,
)

__all__ = [
    "GluingInstance",
    "JointFunctional",
    "EquivalenceReport",
    "HypothesisViolated",
    "EquivalenceViolated",
    "INCREASING",
    "DECREASING",
    "glue",
    "split_conditions",
    "verify_equivalence",
    "struve_fused_condition",
    "struve_gluing_instance",
]

INCREASING = "increasing"
DECREASING = "decreasing"

_EXACT_ZERO = 1e-9
_INF = math.inf


class HypothesisViolated(ValueError):
    def __init__(self, flag: str, detail: str = ""):
        super().__init__(f"gluing hypothesis '{flag}' fails{': ' + detail if detail else ''}")
        self.flag = flag


class EquivalenceViolated(AssertionError):
    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (witness t={t!r})")
        self.t = t


def _composed_exponents(w: PowerLogWeight, psi: PhiMap) -> Tuple[float, float]:
    """Power behaviour of t -> w(psi(t)) at the origin and at infinity."""
    at_zero, at_inf = w.exponent_at(ORIGIN), w.exponent_at(INFINITY)
    if psi.increasing:
        return at_zero * psi.m, at_inf * psi.m
    return at_inf * psi.m, at_zero * psi.m


def _endpoints(w: PowerLogWeight) -> Tuple[float, float]:
    return w.exponent_at(ORIGIN), w.exponent_at(INFINITY)


def _comparable(lhs: Tuple[float, float], rhs: Tuple[float, float]) -> bool:
    return all(abs(a - b) <= _EXACT_ZERO for a, b in zip(lhs, rhs))


@dataclass(frozen=True)
class GluingInstance:
    """Data of the gluing lemmas; ``q`` acts on the f-side, ``p`` on the g-side."""

    f: PowerLogWeight
    g: PowerLogWeight
    s1: PowerLogWeight
    s2: PowerLogWeight
    w1: PowerLogWeight
    w2: PowerLogWeight
    psi: PhiMap
    p: Exponent
    q: Exponent
    direction: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "p", Exponent.of(self.p))
        object.__setattr__(self, "q", Exponent.of(self.q))
        actual = INCREASING if self.psi.increasing else DECREASING
        if self.direction is None:
            object.__setattr__(self, "direction", actual)
        elif self.direction != actual:
            raise HypothesisViolated("monotone-psi", f"psi is {actual}, not {self.direction}")
        self.check_hypotheses()

    def check_hypotheses(self) -> None:
        if self.p.is_infinite or self.q.is_infinite:
            raise HypothesisViolated("finite-exponents", "the lemmas need 0 < p, q < inf")
        ratio = self.s2 / self.s1
        if ratio.a > _EXACT_ZERO or ratio.a + ratio.b > _EXACT_ZERO:
            raise HypothesisViolated("s2/s1-nonincreasing", f"s2/s1 = {ratio}")
        if self.direction == INCREASING:
            pairs = (("w1(psi)~s2", self.w1, _endpoints(self.s2)),
                     ("w2(psi)~s1", self.w2, _endpoints(self.s1)))
        else:
            pairs = (("w1(psi)~1/s1", self.w1, _endpoints(self.s1.reciprocal())),
                     ("w2(psi)~1/s2", self.w2, _endpoints(self.s2.reciprocal())))
        for flag, w, target in pairs:
            got = _composed_exponents(w, self.psi)
            if not _comparable(got, target):
                raise HypothesisViolated(flag, f"endpoint exponents {got} vs {target}")


def _int(w: PowerLogWeight, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    return powerlog_integral(w, Interval(lo, hi))


def _prod(a: float, b: float) -> float:
    # 0 * inf arises only for empty ranges, which do not occur for t > 0
    return a * b


@dataclass(frozen=True)
class JointFunctional:
    eval: Callable[[float], float] = field(repr=False)
    description: str

    def __call__(self, t: float) -> float:
        return self.eval(t)


def glue(inst: GluingInstance) -> JointFunctional:
    """The joint functional of the gluing lemma matching ``inst.direction``."""
    q, p = inst.q.value, inst.p.value
    fq1 = (inst.w1 * inst.f) ** q
    fq2 = (inst.w2 * inst.f) ** q
    gp1 = (inst.s1 * inst.g) ** p
    gp2 = (inst.s2 * inst.g) ** p
    psi = inst.psi

    def g_factor(t: float) -> float:
        left = _int(gp1, 0.0, t) / inst.s1(t) ** p
        right = _int(gp2, t, _INF) / inst.s2(t) ** p
        return (left + right) ** (1.0 / p)

    if inst.direction == INCREASING:
        def f_factor(t: float) -> float:
            x = float(psi(t))
            return (inst.w1(x) ** q * _int(fq2, 0.0, x)
                    + inst.w2(x) ** q * _int(fq1, x, _INF)) ** (1.0 / q)
        desc = "joint form for increasing psi"
    else:
        def f_factor(t: float) -> float:
            x = float(psi(t))
            return (_int(fq1, 0.0, x) / inst.w1(x) ** q
                    + _int(fq2, x, _INF) / inst.w2(x) ** q) ** (1.0 / q)
        desc = "joint form for decreasing psi"

    return JointFunctional(lambda t: _prod(f_factor(t), g_factor(t)), desc)


def split_conditions(inst: GluingInstance, grid: Sequence[float]) -> Tuple[ConditionVerdict, ConditionVerdict]:
    """The two split suprema, evaluated as Hardy-type conditions in t."""
    psi = inst.psi
    phi_power = 1.0 / psi.m  # psi = phi^{-1}
    after = lambda t: Interval(float(psi(t)), _INF)
    before = lambda t: Interval(0.0, float(psi(t)))
    head = lambda t: Interval(0.0, t)
    tail = lambda t: Interval(t, _INF)
    if inst.direction == INCREASING:
        one = hardy_condition(inst.w1 * inst.f, after, inst.s1 * inst.g, head,
                              inst.q, inst.p, phi_power=phi_power, grid=grid)
        two = hardy_condition(inst.w2 * inst.f, before, inst.s2 * inst.g, tail,
                              inst.q, inst.p, phi_power=phi_power, grid=grid)
    else:
        one = hardy_condition(inst.w1 * inst.f, before, inst.s1 * inst.g, head,
                              inst.q, inst.p, phi_power=phi_power, grid=grid)
        two = hardy_condition(inst.w2 * inst.f, after, inst.s2 * inst.g, tail,
                              inst.q, inst.p, phi_power=phi_power, grid=grid)
    return one, two


def _joint_pieces(inst: GluingInstance):
    """(weight, endpoint) for each integral in the joint functional."""
    q, p = inst.q.value, inst.p.value
    fq1 = (inst.w1 * inst.f) ** q
    fq2 = (inst.w2 * inst.f) ** q
    gp1 = (inst.s1 * inst.g) ** p
    gp2 = (inst.s2 * inst.g) ** p
    if inst.direction == INCREASING:
        f_parts = ((fq2, ORIGIN, inst.w1), (fq1, INFINITY, inst.w2))
        sign = 1.0
    else:
        f_parts = ((fq1, ORIGIN, inst.w1), (fq2, INFINITY, inst.w2))
        sign = -1.0
    g_parts = ((gp1, ORIGIN, inst.s1), (gp2, INFINITY, inst.s2))
    return f_parts, g_parts, sign


def _joint_symbolic(inst: GluingInstance) -> Tuple[str, Optional[str]]:
    """Exact finiteness of sup_t joint(t) for pure-power data, else (None, reason)."""
    f_parts, g_parts, sign = _joint_pieces(inst)
    for w, end, _ in f_parts + g_parts:
        if not powerlog_norm_class(w, 1, end).finite:
            return INFINITE, f"joint integral diverges at the {end}"
    all_pure = all(w.is_pure_power for w, _, _ in f_parts + g_parts)
    if not all_pure:
        return None, None
    m = inst.psi.m
    # each term is a power of t; an integral of x^a from 0 or to inf over
    # a range ending at psi(t) (f-side) or t (g-side) scales as end^(a+1)
    f_exps = [m * (w.a + 1.0 + sign * pre.a * inst.q.value) for w, _, pre in f_parts]
    g_exps = [w.a + 1.0 - pre.a * inst.p.value for w, _, pre in g_parts]
    at_inf = max(f_exps) / inst.q.value + max(g_exps) / inst.p.value
    at_zero = min(f_exps) / inst.q.value + min(g_exps) / inst.p.value
    finite = at_inf <= _EXACT_ZERO and at_zero >= -_EXACT_ZERO
    return (FINITE if finite else INFINITE), f"pure powers: t-exponents in [{at_zero:.6g}, {at_inf:.6g}]"


@dataclass
class EquivalenceReport:
    split_verdicts: Tuple[str, str]
    joint_verdict: str
    max_ratio: float
    split_sups: Tuple[float, float]
    joint_sup: float
    argmax_t: float
    consistent: bool
    joint_reason: str = ""


def verify_equivalence(inst: GluingInstance, grid: Sequence[float] = None,
                       *, raise_on_mismatch: bool = True) -> EquivalenceReport:
    """Evaluate both split suprema and the joint one over ``grid`` and compare
    finite/infinite verdicts. ``max_ratio`` is sup(joint / max(split1, split2))
    over grid points where all three are finite."""
    if grid is None:
        grid = log_grid(*DEFAULT_GRID)
    grid = np.asarray(grid, dtype=float)
    one, two = split_conditions(inst, grid)
    joint = glue(inst)
    scan = sup_scan(joint, grid)
    verdict, reason = _joint_symbolic(inst)
    if verdict is None:
        verdict = classify_growth(scan)
        reason = f"scan: outward growth {scan.outward_growth:.4g}"
    joint_sup = scan.sup_estimate if verdict == FINITE else _INF

    ratio, where = math.nan, float(scan.argmax)
    if one.scan is not None and two.scan is not None:
        split_max = np.maximum(one.scan.values, two.scan.values)
        ok = np.isfinite(split_max) & np.isfinite(scan.values) & (split_max > 0)
        if np.any(ok):
            r = scan.values[ok] / split_max[ok]
            k = int(np.argmax(r))
            ratio, where = float(r[k]), float(grid[ok][k])
    if not (one.finite and two.finite and verdict == FINITE):
        ratio = ratio if verdict == FINITE else _INF

    verdicts = (one.verdict, two.verdict)
    decided = INCONCLUSIVE not in verdicts + (verdict,)
    consistent = (not decided) or ((one.finite and two.finite) == (verdict == FINITE))
    report = EquivalenceReport(verdicts, verdict, ratio, (one.sup_estimate, two.sup_estimate),
                               joint_sup, where, consistent, reason)
    if raise_on_mismatch and not consistent:
        raise EquivalenceViolated(
            f"split verdicts {verdicts} disagree with joint verdict {verdict}", where)
    return report


def struve_gluing_instance(alpha: float, u: PowerLogWeight, v: PowerLogWeight, p, q) -> GluingInstance:
    """Struve envelope data fed to the decreasing-psi lemma: f = u, g = 1/v,
    with p' on the g-side and psi(t) = 1/t."""
    inner = PowerLogWeight.power(alpha + 1.5)
    outer = PowerLogWeight.power(alpha - 0.5)
    return GluingInstance(f=u, g=v.reciprocal(), s1=inner, s2=outer, w1=inner, w2=outer,
                          psi=PhiMap(1.0, -1.0), p=Exponent.of(p).conjugate(), q=Exponent.of(q))


def struve_fused_condition(alpha: float, u: PowerLogWeight, v: PowerLogWeight, p, q,
                           grid: Sequence[float] = None, rel_tol: float = 1e-8) -> ConditionVerdict:
    """sup_t ||x^(alpha+3/2) / (t^-2 + x^2)||_{L_q^u} * ||x^(alpha+3/2) / (t^2 + x^2)||_{L_p'^(1/v)}.

    Endpoint integrability is decided exactly (the integrands behave like
    x^(alpha+3/2) u near 0 and x^(alpha-1/2) u near inf); finite integrals
    are computed by quadrature with a break point at the bend of the
    rational factor.
    """
    p, q = Exponent.of(p), Exponent.of(q)
    pc = p.conjugate()
    if q.is_infinite or pc.is_infinite:
        raise HypothesisViolated("finite-exponents", "the fused form needs 1 < p <= q < inf")
    if grid is None:
        grid = log_grid(1e-4, 1e4, 4)
    near = PowerLogWeight.power(alpha + 1.5)
    far = PowerLogWeight.power(alpha - 0.5)
    inv_v = v.reciprocal()
    for w, s, label in ((u, q, "u-side"), (inv_v, pc, "v-side")):
        for env, end in ((near, ORIGIN), (far, INFINITY)):
            cls = powerlog_norm_class(env * w, s, end)
            if not cls.finite:
                return ConditionVerdict(INFINITE, _INF, 1.0, math.nan, math.nan, None,
                                        f"{label} integral diverges at the {end}")
    a = alpha + 1.5
    qv, pv = q.value, pc.value

    def F(t: float) -> float:
        def left(x):
            return (x ** a / (t ** -2 + x * x)) ** qv * u(x) ** qv

        def right(x):
            return (x ** a / (t * t + x * x)) ** pv * inv_v(x) ** pv

        try:
            lhs = integrate(left, Interval(0.0, _INF), rel_tol, points=(1.0 / t,)).value
            rhs = integrate(right, Interval(0.0, _INF), rel_tol, points=(t,)).value
        except DivergentIntegral:
            return _INF
        return lhs ** (1.0 / qv) * rhs ** (1.0 / pv)

    scan = sup_scan(F, grid)
    verdict = classify_growth(scan)
    sup = scan.sup_estimate if verdict != INFINITE else _INF
    return ConditionVerdict(verdict, sup, scan.argmax, scan.left_slope, scan.right_slope, None,
                            f"scan: outward growth {scan.outward_growth:.4g}", scan)
