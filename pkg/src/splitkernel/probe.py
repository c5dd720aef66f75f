"""Empirical probing of ||Tf||_{L_q^u} / ||f||_{L_p^v}.

The transform Tf(y) = int f(x) K(x, y) dx is computed by quadrature. Test
functions come from the extremal families of the necessity argument:

    region one:  f_r = s1^(p'-1) v^(-p') on (0, r)      (1 < p < inf)
                 f_r = 1/v on (0, r)                     (p = inf)
                 f_r = h/v, h = indicator of a short interval next to the
                 maximiser of s1/v on (0, r)             (p = 1)

and symmetrically on (r, inf) with s2 for region two. Ratios that grow as a
power of r witness unboundedness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .hardy import InequalityInstance
from .kernels import KernelFunction, SplittingKernelSpec, catalog
from .numerics import (
    DivergentIntegral,
    Interval,
    NonConvergent,
    QuadratureError,
    integrate,
    log_grid,
    sup_scan,
)
from .spaces import (
    INFINITY,
    ORIGIN,
    Exponent,
    PowerLogWeight,
    powerlog_integral,
    powerlog_norm_class,
    powerlog_sup,
)

__all__ = [
    "ExtremalFamily",
    "FamilyMember",
    "ProbeReport",
    "SharpConstantResult",
    "SideConditionViolated",
    "GROWTH_DETECTED",
    "BOUNDED_CONSISTENT",
    "INCONCLUSIVE",
    "apply_transform",
    "transform_norm",
    "extremal_family",
    "extremal_ratio_scan",
    "sharp_constant_probe",
    "envelope_bound",
]

GROWTH_DETECTED = "growth-detected"
BOUNDED_CONSISTENT = "bounded-consistent"
INCONCLUSIVE = "inconclusive"

GROWTH_SLOPE = 0.05
FLAT_SLOPE = 0.02
_TAIL_FRACTION = 0.01
_MAX_DECADES = 400
_P1_WIDTH = 0.1


class SideConditionViolated(ValueError):
    pass


def apply_transform(K: KernelFunction, f: Callable, y: float, rel_tol: float = 1e-8,
                    support: Optional[Interval] = None) -> float:
    """Tf(y) = int over ``support`` of f(x) K(x, y) dx.

    ``support`` defaults to (0, inf); improper ends are handled by window
    doubling inside :func:`integrate`. The points x = y and x = 1/y (where
    the catalog kernels switch regime) are used as break points.
    """
    iv = support if support is not None else Interval(0.0, math.inf)
    y = float(y)

    def integrand(x):
        return f(x) * K(x, y)

    return integrate(integrand, iv, rel_tol, points=(y, 1.0 / y)).value


@dataclass(frozen=True)
class FamilyMember:
    """A power-log function restricted to ``support`` together with its L_p^v norm."""

    weight: PowerLogWeight
    support: Interval
    norm: float

    def __call__(self, x):
        return self.weight(x)


@dataclass(frozen=True)
class ExtremalFamily:
    region: int
    p: Exponent
    builder: Callable[[float], FamilyMember] = field(repr=False)

    def __call__(self, r: float) -> FamilyMember:
        return self.builder(r)


def _p1_window(weight: PowerLogWeight, iv: Interval) -> Interval:
    """Short interval next to the point where ``weight`` is largest on ``iv``."""
    _, where = powerlog_sup(weight, iv)
    if iv.lo == 0.0:
        anchor = iv.hi if where == 0.0 else min(where, iv.hi)
        anchor = max(anchor, iv.hi * 1e-3) if where == 0.0 else anchor
        if where == 0.0:
            return Interval(iv.hi * 1e-3, iv.hi * 1e-3 * (1 + _P1_WIDTH))
        lo = max(anchor / (1 + _P1_WIDTH), iv.lo)
        return Interval(lo, lo * (1 + _P1_WIDTH))
    if math.isinf(where):
        return Interval(iv.lo * 1e3, iv.lo * 1e3 * (1 + _P1_WIDTH))
    lo = max(where, iv.lo)
    return Interval(lo, lo * (1 + _P1_WIDTH))


def extremal_family(spec: SplittingKernelSpec, v: PowerLogWeight, p, region: int) -> ExtremalFamily:
    """The test functions used to derive necessity on ``region``.

    Raises SideConditionViolated when the envelope factor s_j / v is not in
    L_p' near the relevant endpoint, since the family norms are then infinite.
    """
    p = Exponent.of(p)
    pc = p.conjugate()
    s, w = spec.envelopes(region)
    if s is None or w is None:
        raise SideConditionViolated(f"region {region} has a zero envelope")
    endpoint = ORIGIN if region == 1 else INFINITY
    cls = powerlog_norm_class(s / v, pc, endpoint)
    if not cls.finite:
        raise SideConditionViolated(
            f"s{region}/v is not in L_p' near the {endpoint} (local exponent {cls.local_exponent:g})")
    inv_v = v.reciprocal()

    def span(r: float) -> Interval:
        return Interval(0.0, r) if region == 1 else Interval(r, math.inf)

    if p.is_infinite:
        def build(r: float) -> FamilyMember:
            return FamilyMember(inv_v, span(r), 1.0)
    elif p.value == 1.0:
        def build(r: float) -> FamilyMember:
            win = _p1_window(s / v, span(r))
            return FamilyMember(inv_v, win, win.hi - win.lo)
    else:
        weight = s ** (pc.value - 1.0) * v ** (-pc.value)
        dens = (s / v) ** pc.value

        def build(r: float) -> FamilyMember:
            iv = span(r)
            return FamilyMember(weight, iv, powerlog_integral(dens, iv) ** (1.0 / p.value))

    return ExtremalFamily(region, p, build)


def _decade_sum(h: Callable[[float], float], y0: float, direction: int, rel_tol: float,
                tail_fraction: float) -> float:
    """int of h over (0, y0) (direction -1) or (y0, inf) (direction +1), one decade at a time.

    After each decade the remaining tail is extrapolated geometrically from
    the last two decade contributions; expansion stops when that estimate is
    below ``tail_fraction`` of the running total. Four successive
    nondecreasing contributions signal divergence.
    """
    hv = np.vectorize(h, otypes=[float])
    total = 0.0
    contributions: List[float] = []
    rising = 0
    edge = y0
    for _ in range(_MAX_DECADES):
        nxt = edge * 10.0 ** direction
        lo, hi = min(edge, nxt), max(edge, nxt)
        c = integrate(hv, Interval(lo, hi), rel_tol, abs_tol=1e-300).value
        total += c
        if contributions and c >= contributions[-1] > 0:
            rising += 1
            if rising >= 4:
                return math.inf
        else:
            rising = 0
        contributions.append(c)
        edge = nxt
        if len(contributions) >= 3 and not any(contributions[-3:]):
            return total
        if len(contributions) >= 3 and total > 0:
            if c == 0.0:
                return total
            one_step, two_step = contributions[-2], contributions[-3]
            if one_step <= 0 or two_step <= 0:
                rho = 1.0
            else:
                # the two-step ratio smooths oscillating contributions
                rho = max(c / one_step, math.sqrt(c / two_step))
            if rho < 1.0:
                tail = c * rho / (1.0 - rho)
                if tail <= tail_fraction * total:
                    return total + tail
        if edge < 1e-300 or edge > 1e300:
            break
    raise NonConvergent("y-window expansion did not settle")


def transform_norm(K: KernelFunction, f: FamilyMember, u: PowerLogWeight, q, y0: float,
                   rel_tol: float = 1e-8, tail_fraction: float = _TAIL_FRACTION) -> float:
    """||Tf||_{L_q^u} with the y-window grown outward from ``y0`` decade by decade."""
    q = Exponent.of(q)

    def Tf(y: float) -> float:
        return apply_transform(K, f, y, rel_tol, f.support)

    if q.is_infinite:
        best = 0.0
        for direction in (-1, 1):
            edge, quiet = y0, 0
            for _ in range(_MAX_DECADES):
                ys = np.geomspace(edge, edge * 10.0 ** direction, 17)
                m = max(float(u(y)) * abs(Tf(y)) for y in ys)
                if not math.isfinite(m) or m > 1e300:
                    return math.inf
                quiet = quiet + 1 if m < _TAIL_FRACTION * best else 0
                best = max(best, m)
                if quiet >= 2:
                    break
                edge *= 10.0 ** direction
        return best

    qv = q.value

    def h(y: float) -> float:
        return (float(u(y)) * abs(Tf(y))) ** qv

    try:
        low = _decade_sum(h, y0, -1, rel_tol * 100, tail_fraction)
        high = _decade_sum(h, y0, 1, rel_tol * 100, tail_fraction)
    except DivergentIntegral:
        return math.inf
    return (low + high) ** (1.0 / qv)


@dataclass
class ProbeReport:
    region: int
    r_grid: np.ndarray
    ratios: np.ndarray
    max_ratio: float
    growth_slope: float
    left_slope: float
    right_slope: float
    verdict_hint: str


def _hint(max_ratio: float, growth: float) -> str:
    if not math.isfinite(max_ratio) or growth > GROWTH_SLOPE:
        return GROWTH_DETECTED
    if growth <= FLAT_SLOPE:
        return BOUNDED_CONSISTENT
    return INCONCLUSIVE


def extremal_ratio_scan(inst: InequalityInstance, region: int, r_grid: Sequence[float],
                        rel_tol: float = 1e-7) -> ProbeReport:
    """Ratios ||T f_r||_{L_q^u} / ||f_r||_{L_p^v} over ``r_grid`` for the region's family."""
    if inst.K is None:
        raise ValueError("extremal_ratio_scan needs a concrete kernel")
    if inst.K.oscillatory and region == 2:
        raise SideConditionViolated(
            f"{inst.K.label()} oscillates on region 2; only region 1 carries a lower estimate")
    family = extremal_family(inst.spec, inst.v, inst.p, region)
    phi = inst.spec.phi

    def ratio(r: float) -> float:
        member = family(r)
        if member.norm == 0.0 or not math.isfinite(member.norm):
            raise SideConditionViolated(f"family norm is {member.norm} at r={r}")
        y0 = float(phi.inverse(r))
        top = transform_norm(inst.K, member, inst.u, inst.q, y0, rel_tol)
        return top / member.norm

    scan = sup_scan(ratio, r_grid)
    if math.isinf(scan.sup_estimate):
        growth, left, right = math.inf, math.nan, math.nan
    else:
        growth, left, right = scan.outward_growth, scan.left_slope, scan.right_slope
    return ProbeReport(region, scan.grid, scan.values, scan.sup_estimate, growth, left, right,
                       _hint(scan.sup_estimate, growth))


def envelope_bound(spec: SplittingKernelSpec, f: Callable, support: Interval, y: float,
                   rel_tol: float = 1e-10) -> float:
    """C1 w1(y) int_{(0,phi(y))} s1|f| + C2 w2(y) int_{(phi(y),inf)} s2|f|."""
    cut = float(spec.phi(y))
    total = 0.0
    for region, lo, hi in ((1, support.lo, min(cut, support.hi)),
                           (2, max(cut, support.lo), support.hi)):
        s, w = spec.envelopes(region)
        if s is None or w is None or hi <= lo:
            continue
        part = integrate(lambda x: s(x) * np.abs(f(x)), Interval(lo, hi), rel_tol).value
        total += spec.upper_constant(region) * float(w(y)) * part
    return total


@dataclass
class SharpConstantResult:
    kernel: str
    best_ratio: float
    ratios: Dict[str, float]


_SHARP_WEIGHTS = {
    "hardy": (PowerLogWeight.power(-1.0), PowerLogWeight()),
    "stieltjes": (PowerLogWeight(), PowerLogWeight()),
    "laplace": (PowerLogWeight(), PowerLogWeight()),
}


def sharp_constant_probe(kernel_name: str, p=2, q=2, eps: Sequence[float] = (0.1, 0.03, 0.01),
                         rel_tol: float = 1e-8) -> SharpConstantResult:
    """Best ratio over x^(-1/2 + e) on (0, 1) and x^(-1/2 - e) on (1, inf).

    The weights are u = 1/x, v = 1 for the Hardy operator and u = v = 1 for
    the Stieltjes (lambda = 1) and Laplace transforms; a lower bound for the
    operator norm on L_2.
    """
    if kernel_name not in _SHARP_WEIGHTS:
        raise ValueError(f"no sharp-constant setup for {kernel_name!r}")
    if Exponent.of(p).value != 2.0 or Exponent.of(q).value != 2.0:
        raise ValueError("sharp-constant probes are set up for p = q = 2")
    u, v = _SHARP_WEIGHTS[kernel_name]
    _, K = catalog(kernel_name)
    ratios: Dict[str, float] = {}
    for e in eps:
        for label, weight, iv in (
            (f"x^(-1/2+{e:g}) on (0,1)", PowerLogWeight.power(-0.5 + e), Interval(0.0, 1.0)),
            (f"x^(-1/2-{e:g}) on (1,inf)", PowerLogWeight.power(-0.5 - e), Interval(1.0, math.inf)),
        ):
            norm = math.sqrt(powerlog_integral((weight * v) ** 2, iv))
            member = FamilyMember(weight, iv, norm)
            ratios[label] = transform_norm(K, member, u, 2, 1.0, rel_tol, tail_fraction=1e-3) / norm
    return SharpConstantResult(kernel_name, max(ratios.values()), ratios)
