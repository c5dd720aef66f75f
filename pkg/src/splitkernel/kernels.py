"""Splitting-kernel data, the built-in transform catalog and envelope checks.

A kernel K(x, y) splits along x = phi(y) when

    |K(x, y)| <= C1 s1(x) w1(y)   for x <= phi(y)
    |K(x, y)| <= C2 s2(x) w2(y)   for x >  phi(y)

Envelope functions are power-log weights; ``None`` stands for the zero
function, which makes the corresponding region vacuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .numerics import Interval
from .spaces import PowerLogWeight
from .specialfn import check_order, struve

__all__ = [
    "PhiMap",
    "SplittingKernelSpec",
    "KernelFunction",
    "EstimateReport",
    "UnknownKernel",
    "ParamOutOfRange",
    "EstimateViolated",
    "CATALOG_NAMES",
    "catalog",
    "parse_kernel",
    "upper_envelope",
    "validate_estimate",
    "struve_constants",
]

Envelope = Optional[PowerLogWeight]


class UnknownKernel(KeyError):
    pass


class ParamOutOfRange(ValueError):
    pass


class EstimateViolated(AssertionError):
    """An envelope inequality fails at a witnessing point (x, y)."""

    def __init__(self, message: str, x: float, y: float):
        super().__init__(f"{message} at x={x!r}, y={y!r}")
        self.x = x
        self.y = y


@dataclass(frozen=True)
class PhiMap:
    """The power map phi(y) = kappa * y**m, a C^1 bijection of (0, inf)."""

    kappa: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if self.m == 0 or not math.isfinite(self.m):
            raise ValueError("m must be a nonzero finite real")

    @property
    def increasing(self) -> bool:
        return self.m > 0

    def __call__(self, y):
        return self.kappa * np.power(y, self.m)

    def inverse(self, t):
        return np.power(np.asarray(t, dtype=float) / self.kappa, 1.0 / self.m)

    def preimage(self, iv: Interval) -> Interval:
        """phi^{-1}(iv) for an interval iv = (lo, hi)."""
        ends = []
        for e in (iv.lo, iv.hi):
            if e == 0.0:
                ends.append(0.0 if self.increasing else math.inf)
            elif math.isinf(e):
                ends.append(math.inf if self.increasing else 0.0)
            else:
                ends.append(float(self.inverse(e)))
        return Interval(min(ends), max(ends))

    def __str__(self) -> str:
        return f"{self.kappa:g}*y^{self.m:g}"


@dataclass(frozen=True)
class SplittingKernelSpec:
    s1: Envelope
    s2: Envelope
    w1: Envelope
    w2: Envelope
    phi: PhiMap
    C1: float = 1.0
    C2: float = 1.0
    lower1: bool = False
    lower2: bool = False
    lowerC1: Optional[float] = None
    lowerC2: Optional[float] = None

    def __post_init__(self):
        if not (self.C1 > 0 and self.C2 > 0):
            raise ValueError("upper constants must be positive")
        if self.lower1 and not self.region_active(1):
            raise ValueError("lower1 needs s1*w1 not identically zero")
        if self.lower2 and not self.region_active(2):
            raise ValueError("lower2 needs s2*w2 not identically zero")

    def envelopes(self, region: int) -> Tuple[Envelope, Envelope]:
        return (self.s1, self.w1) if region == 1 else (self.s2, self.w2)

    def region_active(self, region: int) -> bool:
        s, w = self.envelopes(region)
        return s is not None and w is not None

    def lower_flag(self, region: int) -> bool:
        return self.lower1 if region == 1 else self.lower2

    def lower_constant(self, region: int) -> Optional[float]:
        return self.lowerC1 if region == 1 else self.lowerC2

    def upper_constant(self, region: int) -> float:
        return self.C1 if region == 1 else self.C2


@dataclass(frozen=True)
class KernelFunction:
    """A concrete kernel K(x, y); ``eval`` broadcasts over numpy arrays."""

    name: str
    params: Dict[str, float]
    eval: Callable = field(compare=False, repr=False)
    oscillatory: bool = False

    def __call__(self, x, y):
        return self.eval(x, y)

    def label(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}:{args}"


CATALOG_NAMES = (
    "hardy", "bellman", "riemann-liouville", "sine", "struve", "stieltjes", "laplace",
)

_PARAM_ALIASES = {"lambda": "lam", "lam": "lam", "λ": "lam", "alpha": "alpha", "α": "alpha", "n": "n"}
_DEFAULTS = {"riemann-liouville": {"alpha": 0.5}, "struve": {"alpha": 1.0},
             "stieltjes": {"lam": 1.0}, "laplace": {"n": 1}}

_STRUVE_SCAN = np.linspace(1.0, 12.0, 20001)


def struve_constants(alpha: float) -> Dict[str, float]:
    """Envelope constants for K(x, y) = sqrt(xy) H_alpha(xy).

    Region one (z = xy <= 1): the series alternates with decreasing terms,
    so its first term bounds it above and first-minus-second bounds it below.
    Region two: a dense scan over [1, 12] plus the bound for z > 12 obtained
    from the large-argument form with |sin| <= 1 (both pieces of that bound
    are nonincreasing after division by the envelope).
    """
    alpha = check_order(alpha)
    lead = 1.0 / (2.0 ** (alpha + 1) * math.gamma(1.5) * math.gamma(alpha + 1.5))
    lower1 = lead * (1.0 - 1.0 / (6.0 * (alpha + 1.5)))
    z = _STRUVE_SCAN
    env = np.ones_like(z) if alpha < 0.5 else z ** (alpha - 0.5)
    ratio = np.sqrt(z) * struve(alpha, z) / env
    osc = math.sqrt(2.0 / math.pi)
    power = 2.0 ** (1.0 - alpha) / (math.gamma(alpha + 0.5) * math.sqrt(math.pi))
    if alpha < 0.5:
        tail_upper = osc + power * 12.0 ** (alpha - 0.5)
        tail_lower = -math.inf
    else:
        tail_upper = osc * 12.0 ** (0.5 - alpha) + power
        tail_lower = power - osc * 12.0 ** (0.5 - alpha)
    out = {
        "C1": lead,
        "C2": max(float(np.max(np.abs(ratio))), tail_upper) * (1.0 + 1e-6),
        "lowerC1": lower1,
    }
    if alpha > 0.5:
        out["lowerC2"] = 0.99 * min(float(np.min(ratio)), tail_lower)
    return out


def _canon_params(name: str, params: Dict[str, float]) -> Dict[str, float]:
    out = dict(_DEFAULTS.get(name, {}))
    for key, val in params.items():
        canon = _PARAM_ALIASES.get(key)
        if canon is None or canon not in out:
            raise ParamOutOfRange(f"kernel {name!r} takes no parameter {key!r}")
        out[canon] = float(val)
    return out


def catalog(name: str, **params) -> Tuple[SplittingKernelSpec, KernelFunction]:
    """Splitting data and kernel for a built-in transform.

    Parameters: ``alpha`` for riemann-liouville (0 < alpha < 1) and struve
    (alpha > -1/2), ``lam`` (or ``lambda``) for stieltjes (lam > 0) and ``n``
    for laplace (a positive integer).
    """
    if name not in CATALOG_NAMES:
        raise UnknownKernel(f"unknown kernel {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    prm = _canon_params(name, params)
    ident = PhiMap(1.0, 1.0)
    recip = PhiMap(1.0, -1.0)
    one = PowerLogWeight()

    if name == "hardy":
        spec = SplittingKernelSpec(one, None, one, None, ident, lower1=True, lowerC1=1.0)
        ev = lambda x, y: np.where(x <= y, 1.0, 0.0)
        return spec, KernelFunction(name, prm, ev)

    if name == "bellman":
        spec = SplittingKernelSpec(None, PowerLogWeight.power(-1.0), None, one, ident,
                                   lower2=True, lowerC2=1.0)
        ev = lambda x, y: np.where(x > y, 1.0 / x, 0.0)
        return spec, KernelFunction(name, prm, ev)

    if name == "riemann-liouville":
        alpha = prm["alpha"]
        if not 0 < alpha < 1:
            raise ParamOutOfRange("riemann-liouville needs 0 < alpha < 1")
        spec = SplittingKernelSpec(one, None, PowerLogWeight.power(alpha - 1.0), None, ident)

        def ev(x, y):
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            gap = np.where(x < y, y - x, 1.0)
            return np.where(x < y, gap ** (alpha - 1.0), 0.0)

        return spec, KernelFunction(name, prm, ev)

    if name == "sine":
        t = PowerLogWeight.power(1.0)
        spec = SplittingKernelSpec(t, one, t, one, recip, lower1=True, lowerC1=math.sin(1.0))
        ev = lambda x, y: np.sin(np.multiply(x, y))
        return spec, KernelFunction(name, prm, ev, oscillatory=True)

    if name == "struve":
        alpha = prm["alpha"]
        if not alpha > -0.5:
            raise ParamOutOfRange("struve needs alpha > -1/2")
        inner = PowerLogWeight.power(alpha + 1.5)
        outer = one if alpha < 0.5 else PowerLogWeight.power(alpha - 0.5)
        consts = struve_constants(alpha)
        big = alpha > 0.5
        spec = SplittingKernelSpec(inner, outer, inner, outer, recip,
                                   C1=consts["C1"], C2=consts["C2"],
                                   lower1=True, lower2=big,
                                   lowerC1=consts["lowerC1"],
                                   lowerC2=consts.get("lowerC2"))

        def ev(x, y):
            z = np.multiply(x, y)
            return np.sqrt(z) * struve(alpha, z)

        return spec, KernelFunction(name, prm, ev, oscillatory=not alpha > 0.5)

    if name == "stieltjes":
        lam = prm["lam"]
        if not lam > 0:
            raise ParamOutOfRange("stieltjes needs lambda > 0")
        decay = PowerLogWeight.power(-lam)
        spec = SplittingKernelSpec(one, decay, decay, one, ident,
                                   lower1=True, lower2=True,
                                   lowerC1=2.0 ** -lam, lowerC2=2.0 ** -lam)
        ev = lambda x, y: np.power(np.add(x, y), -lam)
        return spec, KernelFunction(name, prm, ev)

    # laplace
    n = prm["n"]
    if n < 1 or n != int(n):
        raise ParamOutOfRange("laplace needs a positive integer n")
    n = int(n)
    prm["n"] = n
    decay = PowerLogWeight.power(-float(n))
    spec = SplittingKernelSpec(one, decay, one, decay, recip,
                               C1=1.0, C2=float(math.factorial(n)),
                               lower1=True, lowerC1=math.exp(-1.0))
    ev = lambda x, y: np.exp(-np.multiply(x, y))
    return spec, KernelFunction(name, prm, ev)


def parse_kernel(text: str) -> Tuple[SplittingKernelSpec, KernelFunction]:
    """Parse ``name[:key=val[,key=val]]``, e.g. ``stieltjes:lambda=1``."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ParamOutOfRange(f"malformed kernel parameter {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise ParamOutOfRange(f"kernel parameter {key!r} is not a number: {val!r}") from None
    return catalog(name.strip().lower(), **params)


def _envelope_part(spec: SplittingKernelSpec, region: int, x, y):
    s, w = spec.envelopes(region)
    if s is None or w is None:
        return np.zeros(np.broadcast(x, y).shape)
    return s(x) * w(y)


def upper_envelope(spec: SplittingKernelSpec, x, y):
    """C1 s1(x) w1(y) when x <= phi(y), otherwise C2 s2(x) w2(y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = x <= spec.phi(y)
    one = spec.C1 * _envelope_part(spec, 1, x, y)
    two = spec.C2 * _envelope_part(spec, 2, x, y)
    out = np.where(inside, one, two)
    return out if out.ndim else float(out)


@dataclass
class EstimateReport:
    samples: int
    max_upper_ratio: float
    upper_constants: Dict[int, float]
    min_lower_ratio: Dict[int, float]
    min_two_sided_ratio: float

    @property
    def max_upper_violation(self) -> float:
        return max(0.0, self.max_upper_ratio - 1.0)


def validate_estimate(spec: SplittingKernelSpec, K: KernelFunction, samples: int = 10_000,
                      *, seed: int = 0, box: Tuple[float, float] = (1e-3, 1e3)) -> EstimateReport:
    """Check the splitting estimate and any flagged lower estimates on random points.

    Points are drawn log-uniformly from ``box`` squared. The report carries the
    largest |K|/envelope, the empirical constants |K|/(s_j w_j) per region and
    the smallest K/(s_j w_j) on each region with a lower flag.
    """
    if samples < 100:
        raise ValueError("validate_estimate needs at least 100 samples")
    rng = np.random.default_rng(seed)
    lo, hi = math.log(box[0]), math.log(box[1])
    x = np.exp(rng.uniform(lo, hi, samples))
    y = np.exp(rng.uniform(lo, hi, samples))
    k = np.asarray(K(x, y), dtype=float)
    if not np.all(np.isfinite(k)):
        j = int(np.argmax(~np.isfinite(k)))
        raise EstimateViolated("kernel is not finite", float(x[j]), float(y[j]))
    env = upper_envelope(spec, x, y)
    inside = x <= spec.phi(y)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(env > 0, np.abs(k) / env, np.where(k == 0, 0.0, np.inf))
    bad = ratio > 1.0 + 1e-9
    if np.any(bad):
        j = int(np.argmax(ratio))
        raise EstimateViolated(f"|K| exceeds the upper envelope by factor {ratio[j]:.6g}",
                               float(x[j]), float(y[j]))

    constants: Dict[int, float] = {}
    lowers: Dict[int, float] = {}
    for region, mask in ((1, inside), (2, ~inside)):
        if not spec.region_active(region) or not np.any(mask):
            continue
        part = _envelope_part(spec, region, x[mask], y[mask])
        rel = k[mask] / part
        constants[region] = float(np.max(np.abs(rel)))
        if spec.lower_flag(region):
            lowers[region] = float(np.min(rel))
            c = spec.lower_constant(region)
            if c is not None and lowers[region] < c * (1.0 - 1e-9):
                j = int(np.argmin(rel))
                raise EstimateViolated(
                    f"K falls below {c:.6g}*s{region}*w{region} (ratio {rel[j]:.6g})",
                    float(x[mask][j]), float(y[mask][j]))
    with np.errstate(divide="ignore", invalid="ignore"):
        two_sided = np.where(env > 0, k / env, np.nan)
    return EstimateReport(samples, float(np.max(ratio)), constants, lowers,
                          float(np.nanmin(two_sided)))
