"""Hardy-type supremum conditions for splitting kernels and the combined verdict.

For an instance (K, u, v, p, q) the two conditions are

    F1(r) = ||w1 u||_{L_q(phi^{-1}(r, inf))} * ||s1 / v||_{L_p'(0, r)}
    F2(r) = ||w2 u||_{L_q(phi^{-1}(0, r))}   * ||s2 / v||_{L_p'(r, inf)}

and boundedness follows when both suprema over r > 0 are finite. When a
supremum is infinite on a region where K is also bounded below by its
envelope, the inequality fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .kernels import KernelFunction, PhiMap, SplittingKernelSpec, catalog
from .numerics import DEFAULT_GRID, FLAT_SLOPE, Interval, SupScan, log_grid, sup_scan
from .spaces import (
    INFINITY,
    ORIGIN,
    Exponent,
    PowerLogWeight,
    powerlog_norm,
    powerlog_norm_class,
)

__all__ = [
    "ConditionVerdict",
    "InequalityInstance",
    "BoundednessResult",
    "ExponentOrderViolation",
    "FINITE",
    "INFINITE",
    "INCONCLUSIVE",
    "BOUNDED",
    "UNBOUNDED",
    "SUFFICIENT_ONLY",
    "phi_preimage",
    "classify_growth",
    "hardy_condition",
    "condition_one",
    "condition_two",
    "condition",
    "check_boundedness",
    "envelope_family",
]

FINITE = "finite"
INFINITE = "infinite"
INCONCLUSIVE = "inconclusive"

BOUNDED = "bounded"
UNBOUNDED = "unbounded"
SUFFICIENT_ONLY = "sufficient-only-unknown"

_EXACT_ZERO = 1e-9


class ExponentOrderViolation(ValueError):
    pass


@dataclass(frozen=True)
class ConditionVerdict:
    verdict: str
    sup_estimate: float
    argmax_r: float
    left_slope: float
    right_slope: float
    symbolic_exponent: Optional[float] = None
    reason: str = ""
    scan: Optional[SupScan] = field(default=None, compare=False, repr=False)

    @property
    def finite(self) -> bool:
        return self.verdict == FINITE

    @property
    def infinite(self) -> bool:
        return self.verdict == INFINITE


@dataclass(frozen=True)
class InequalityInstance:
    """Data of ||T f||_{L_q^u} <= C ||f||_{L_p^v}."""

    spec: SplittingKernelSpec
    u: PowerLogWeight
    v: PowerLogWeight
    p: Exponent
    q: Exponent
    K: Optional[KernelFunction] = None

    def __post_init__(self):
        object.__setattr__(self, "p", Exponent.of(self.p))
        object.__setattr__(self, "q", Exponent.of(self.q))

    @property
    def p_conj(self) -> Exponent:
        return self.p.conjugate()

    @classmethod
    def from_catalog(cls, name: str, u: PowerLogWeight, v: PowerLogWeight, p, q,
                     **params) -> "InequalityInstance":
        spec, K = catalog(name, **params)
        return cls(spec, u, v, Exponent.of(p), Exponent.of(q), K)


@dataclass(frozen=True)
class BoundednessResult:
    verdict: str
    condition_one: ConditionVerdict
    condition_two: ConditionVerdict
    reason: str
    spec_used: SplittingKernelSpec = field(compare=False, repr=False)

    @property
    def decided(self) -> bool:
        return self.verdict in (BOUNDED, UNBOUNDED)


def phi_preimage(phi: PhiMap, iv: Interval) -> Interval:
    """phi^{-1}(iv); a decreasing phi swaps the roles of 0 and inf."""
    return phi.preimage(iv)


def classify_growth(scan: SupScan, threshold: float = FLAT_SLOPE) -> str:
    """Slope policy: flat up to ``threshold``, inconclusive up to twice that."""
    if math.isinf(scan.sup_estimate):
        return INFINITE
    growth = scan.outward_growth
    if growth <= threshold:
        return FINITE
    if growth <= 2 * threshold:
        return INCONCLUSIVE
    return INFINITE


def _endpoint_of(iv: Interval) -> str:
    """The endpoint of (0, inf) that a half-line region touches."""
    return ORIGIN if iv.lo == 0.0 else INFINITY


def hardy_condition(outer: PowerLogWeight, outer_region: Callable[[float], Interval],
                    inner: PowerLogWeight, inner_region: Callable[[float], Interval],
                    q: Exponent, p_conj: Exponent, *, phi_power: float = 1.0,
                    grid: Sequence[float] = None) -> ConditionVerdict:
    """sup over r of ||outer||_{L_q(outer_region(r))} * ||inner||_{L_p'(inner_region(r))}.

    ``outer_region`` and ``inner_region`` must be half-lines (touching 0 or
    inf), so finiteness of each factor is decided exactly from the endpoint
    exponent before anything is evaluated. ``phi_power`` is the exponent m in
    phi(y) = kappa y^m, used for the exact growth exponent of pure powers.
    """
    if grid is None:
        grid = log_grid(*DEFAULT_GRID)
    probe_r = 1.0
    for weight, region, s, label in ((outer, outer_region, q, "u-side"),
                                     (inner, inner_region, p_conj, "v-side")):
        cls = powerlog_norm_class(weight, s, _endpoint_of(region(probe_r)))
        if not cls.finite:
            return ConditionVerdict(INFINITE, math.inf, probe_r, math.nan, math.nan, None,
                                    f"{label} factor diverges at the {cls.endpoint}")

    symbolic = None
    if outer.is_pure_power and inner.is_pure_power:
        symbolic = (outer.a + q.reciprocal) / phi_power + inner.a + p_conj.reciprocal

    def F(r: float) -> float:
        return powerlog_norm(outer, q, outer_region(r)) * powerlog_norm(inner, p_conj, inner_region(r))

    scan = sup_scan(F, grid)
    if symbolic is not None:
        verdict = FINITE if abs(symbolic) <= _EXACT_ZERO else INFINITE
        reason = f"pure powers: F(r) ~ r^{symbolic:.6g}"
        sup = scan.sup_estimate if verdict == FINITE else math.inf
    else:
        verdict = classify_growth(scan)
        reason = f"scan: outward growth {scan.outward_growth:.4g}"
        sup = scan.sup_estimate if verdict != INFINITE else math.inf
    return ConditionVerdict(verdict, sup, scan.argmax, scan.left_slope, scan.right_slope,
                            symbolic, reason, scan)


def condition(inst: InequalityInstance, region: int,
              grid: Sequence[float] = None) -> ConditionVerdict:
    spec = inst.spec
    s, w = spec.envelopes(region)
    if s is None or w is None:
        return ConditionVerdict(FINITE, 0.0, 1.0, 0.0, 0.0, None, "vacuous region")
    phi = spec.phi
    if region == 1:
        outer_region = lambda r: phi_preimage(phi, Interval(r, math.inf))
        inner_region = lambda r: Interval(0.0, r)
    else:
        outer_region = lambda r: phi_preimage(phi, Interval(0.0, r))
        inner_region = lambda r: Interval(r, math.inf)
    return hardy_condition(w * inst.u, outer_region, s / inst.v, inner_region,
                           inst.q, inst.p_conj, phi_power=phi.m, grid=grid)


def condition_one(inst: InequalityInstance, grid: Sequence[float] = None) -> ConditionVerdict:
    """sup_r ||w1 u||_{L_q(phi^{-1}(r,inf))} ||s1 v^{-1}||_{L_p'(0,r)}."""
    return condition(inst, 1, grid)


def condition_two(inst: InequalityInstance, grid: Sequence[float] = None) -> ConditionVerdict:
    """sup_r ||w2 u||_{L_q(phi^{-1}(0,r))} ||s2 v^{-1}||_{L_p'(r,inf)}."""
    return condition(inst, 2, grid)


def envelope_family(inst: InequalityInstance) -> Tuple[SplittingKernelSpec, ...]:
    """Alternative valid splitting estimates for the same kernel.

    The Laplace kernel satisfies e^{-z} <= n! z^{-n} for every n, so the
    region-two envelope can be steepened; n = 1..10 are tried.
    """
    if inst.K is not None and inst.K.name == "laplace":
        return tuple(catalog("laplace", n=k)[0] for k in range(1, 11))
    return (inst.spec,)


def _combine(c1: ConditionVerdict, c2: ConditionVerdict,
             spec: SplittingKernelSpec) -> Tuple[str, str]:
    flagged = [j for j, c in ((1, c1), (2, c2)) if c.infinite and spec.lower_flag(j)]
    if flagged:
        return UNBOUNDED, f"condition {flagged[0]} infinite and the kernel is bounded below there"
    if c1.verdict == INCONCLUSIVE or c2.verdict == INCONCLUSIVE:
        return INCONCLUSIVE, "a supremum scan fell in the inconclusive slope band"
    if c1.finite and c2.finite:
        return BOUNDED, "both conditions finite"
    bad = [j for j, c in ((1, c1), (2, c2)) if c.infinite]
    return SUFFICIENT_ONLY, f"condition {bad[0]} infinite without a lower estimate on that region"


_RANK = {BOUNDED: 0, UNBOUNDED: 0, INCONCLUSIVE: 1, SUFFICIENT_ONLY: 2}


def check_boundedness(inst: InequalityInstance, grid: Sequence[float] = None) -> BoundednessResult:
    """Combined verdict: bounded, unbounded, sufficient-only-unknown or inconclusive.

    Infinite conditions on a region carrying a lower estimate give
    ``unbounded`` whether the divergence comes from the supremum or from a
    factor norm that is infinite for every r: in the latter case a
    nonnegative f in L_p^v supported where the lower estimate applies makes
    Tf infinite on a set of positive measure.
    """
    if inst.p.value > inst.q.value:
        raise ExponentOrderViolation(f"need p <= q, got p={inst.p}, q={inst.q}")
    best = None
    for spec in envelope_family(inst):
        trial = replace(inst, spec=spec)
        c1 = condition_one(trial, grid)
        c2 = condition_two(trial, grid)
        verdict, reason = _combine(c1, c2, spec)
        result = BoundednessResult(verdict, c1, c2, reason, spec)
        if best is None or _RANK[verdict] < _RANK[best.verdict]:
            best = result
        if result.decided:
            break
    return best
