"""Lebesgue exponents, power-log weights and weighted L_p norms on (0, inf)."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from .numerics import DivergentIntegral, Interval, integrate

__all__ = [
    "Exponent",
    "PowerLogWeight",
    "EndpointClass",
    "conjugate",
    "weighted_norm",
    "powerlog_norm_class",
    "powerlog_sup",
    "powerlog_integral",
    "powerlog_norm",
    "parse_weight",
]

ORIGIN = "origin"
INFINITY = "infinity"


@dataclass(frozen=True, order=True)
class Exponent:
    """A Lebesgue index in [1, inf]."""

    value: float

    def __post_init__(self):
        if not self.value >= 1.0:
            raise ValueError(f"Lebesgue exponent must be >= 1, got {self.value}")

    @classmethod
    def of(cls, p: Union["Exponent", float, str]) -> "Exponent":
        if isinstance(p, Exponent):
            return p
        if isinstance(p, str):
            p = math.inf if p.strip().lower() in ("inf", "infinity", "∞") else float(p)
        return cls(float(p))

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    @property
    def reciprocal(self) -> float:
        """1/p, with 1/inf = 0."""
        return 0.0 if self.is_infinite else 1.0 / self.value

    def conjugate(self) -> "Exponent":
        if self.value == 1.0:
            return Exponent(math.inf)
        if self.is_infinite:
            return Exponent(1.0)
        return Exponent(self.value / (self.value - 1.0))

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return "inf" if self.is_infinite else f"{self.value:g}"


def conjugate(p) -> Exponent:
    """Hölder conjugate p' with 1/p + 1/p' = 1."""
    return Exponent.of(p).conjugate()


@dataclass(frozen=True)
class PowerLogWeight:
    """The weight ``c * x**a * (1 + x)**b`` on (0, inf)."""

    c: float = 1.0
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"weight coefficient must be positive, got {self.c}")

    @classmethod
    def power(cls, a: float, c: float = 1.0) -> "PowerLogWeight":
        return cls(c=c, a=a, b=0.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = self.c * np.power(x, self.a)
            if self.b != 0.0:
                out = out * np.power(1.0 + x, self.b)
        return out if out.ndim else float(out)

    @property
    def is_pure_power(self) -> bool:
        return self.b == 0.0

    def exponent_at(self, endpoint: str) -> float:
        """Local power behaviour at the origin (a) or at infinity (a + b)."""
        if endpoint == ORIGIN:
            return self.a
        if endpoint == INFINITY:
            return self.a + self.b
        raise ValueError(f"unknown endpoint {endpoint!r}")

    def __mul__(self, other):
        if isinstance(other, PowerLogWeight):
            return PowerLogWeight(self.c * other.c, self.a + other.a, self.b + other.b)
        if isinstance(other, (int, float)):
            return PowerLogWeight(self.c * float(other), self.a, self.b)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerLogWeight):
            return self * other.reciprocal()
        if isinstance(other, (int, float)):
            return PowerLogWeight(self.c / float(other), self.a, self.b)
        return NotImplemented

    def __pow__(self, s: float) -> "PowerLogWeight":
        return PowerLogWeight(self.c ** s, self.a * s, self.b * s)

    def reciprocal(self) -> "PowerLogWeight":
        return self ** -1.0

    def dilate(self, lam: float) -> "PowerLogWeight":
        """The weight x -> w(lam * x); only pure powers stay in the family."""
        if not self.is_pure_power:
            raise ValueError("dilation leaves the power-log family unless b == 0")
        return PowerLogWeight(self.c * lam ** self.a, self.a, 0.0)

    def __str__(self) -> str:
        parts = []
        if self.c != 1.0:
            parts.append(repr(self.c))
        parts.append(f"x^{self.a!r}")
        if self.b != 0.0:
            parts.append(f"(1+x)^{self.b!r}")
        return "*".join(parts)


ONE = PowerLogWeight()

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_X_RE = re.compile(rf"^x(?:\^\(?({_NUM})\)?)?$")
_ONEX_RE = re.compile(rf"^\(1\+x\)(?:\^\(?({_NUM})\)?)?$")
_C_RE = re.compile(rf"^{_NUM}$")


def parse_weight(text: str) -> PowerLogWeight:
    """Parse ``c*x^a*(1+x)^b`` (any factor may be omitted), e.g. ``x^-0.5``."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty weight expression")
    c, a, b = 1.0, 0.0, 0.0
    for token in s.split("*"):
        if m := _X_RE.match(token):
            a += float(m.group(1)) if m.group(1) is not None else 1.0
        elif m := _ONEX_RE.match(token):
            b += float(m.group(1)) if m.group(1) is not None else 1.0
        elif _C_RE.match(token):
            c *= float(token)
        else:
            raise ValueError(f"cannot parse weight factor {token!r} in {text!r}")
    return PowerLogWeight(c, a, b)


@dataclass(frozen=True)
class EndpointClass:
    endpoint: str
    verdict: str  # "finite" | "infinite"
    local_exponent: float

    @property
    def finite(self) -> bool:
        return self.verdict == "finite"


def powerlog_norm_class(w: PowerLogWeight, s, endpoint: str) -> EndpointClass:
    """Exact finiteness of the L_s norm of ``w`` near ``endpoint``.

    For finite ``s`` the local exponent is ``a*s`` (origin) or ``(a+b)*s``
    (infinity) and the borderline value -1 counts as divergent.
    """
    s = Exponent.of(s)
    e = w.exponent_at(endpoint)
    if s.is_infinite:
        finite = e >= 0 if endpoint == ORIGIN else e <= 0
        return EndpointClass(endpoint, "finite" if finite else "infinite", e)
    local = e * s.value
    finite = local > -1 if endpoint == ORIGIN else local < -1
    return EndpointClass(endpoint, "finite" if finite else "infinite", local)


def _endpoint_classes(w: PowerLogWeight, s: Exponent, iv: Interval):
    out = []
    if iv.lo == 0.0:
        out.append(powerlog_norm_class(w, s, ORIGIN))
    if math.isinf(iv.hi):
        out.append(powerlog_norm_class(w, s, INFINITY))
    return out


def powerlog_sup(w: PowerLogWeight, iv: Interval):
    """Supremum of ``w`` over ``iv`` and where it is attained (limits allowed)."""

    def limit_at(endpoint):
        e = w.exponent_at(endpoint)
        if e == 0:
            return w.c
        grows = e < 0 if endpoint == ORIGIN else e > 0
        return math.inf if grows else 0.0

    candidates = []
    candidates.append((limit_at(ORIGIN) if iv.lo == 0.0 else float(w(iv.lo)), iv.lo))
    candidates.append((limit_at(INFINITY) if math.isinf(iv.hi) else float(w(iv.hi)), iv.hi))
    # interior critical point of a log x + b log(1 + x)
    if w.a + w.b != 0:
        x_star = -w.a / (w.a + w.b)
        if iv.lo < x_star < iv.hi:
            candidates.append((float(w(x_star)), x_star))
    value, where = max(candidates, key=lambda item: item[0])
    return value, where


def powerlog_integral(w: PowerLogWeight, iv: Interval) -> float:
    """Closed-form integral of ``w`` over ``iv`` (inf when divergent)."""
    for cls in _endpoint_classes(w, Exponent(1.0), iv):
        if not cls.finite:
            return math.inf
    a, b, c = w.a, w.b, w.c
    lo, hi = iv.lo, iv.hi
    if b == 0.0:
        if a == -1.0:
            return c * math.log(hi / lo)
        top = 0.0 if math.isinf(hi) else hi ** (a + 1)
        return c * (top - lo ** (a + 1)) / (a + 1)
    # s = x/(1+x) maps the integral to an incomplete beta function
    s_lo = lo / (1.0 + lo)
    s_hi = 1.0 if math.isinf(hi) else hi / (1.0 + hi)
    p1, p2 = a + 1.0, -a - b - 1.0
    if p1 > 0 and p2 > 0:
        return c * float(mpmath.betainc(p1, p2, s_lo, s_hi))
    f = lambda s: s ** a * (1 - s) ** (-a - b - 2)
    return c * float(mpmath.quad(f, [s_lo, s_hi]))


def powerlog_norm(w: PowerLogWeight, s, iv: Interval) -> float:
    """Closed-form L_s norm of the power-log weight ``w`` over ``iv``."""
    s = Exponent.of(s)
    if s.is_infinite:
        for cls in _endpoint_classes(w, s, iv):
            if not cls.finite:
                return math.inf
        return powerlog_sup(w, iv)[0]
    total = powerlog_integral(w ** s.value, iv)
    return total ** (1.0 / s.value)


def _sample_sup(h: Callable, iv: Interval) -> float:
    lo = iv.lo if iv.lo > 0 else 1e-12
    hi = iv.hi if math.isfinite(iv.hi) else 1e12
    if lo >= hi:
        lo, hi = iv.lo, iv.hi
    xs = np.geomspace(lo, hi, 2001)
    vals = np.abs(np.asarray(h(xs), dtype=float))
    k = int(np.nanargmax(vals))
    best = float(vals[k])
    if 0 < k < xs.size - 1:
        res = minimize_scalar(lambda t: -abs(float(h(np.exp(t)))),
                              bounds=(math.log(xs[k - 1]), math.log(xs[k + 1])),
                              method="bounded", options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best


def weighted_norm(f, v: PowerLogWeight, p, iv: Interval, rel_tol: float = 1e-10) -> float:
    """``(integral over iv of v^p |f|^p)^(1/p)``, or the essential sup for p = inf.

    ``f`` may be a number, a :class:`PowerLogWeight` or a vectorized callable.
    When ``f`` is a number or a power-log weight the endpoint behaviour is
    classified exactly before any quadrature, and p = inf is exact.
    """
    p = Exponent.of(p)
    if isinstance(f, (int, float)):
        if f == 0:
            return 0.0
        f = PowerLogWeight(c=abs(float(f)))
    if isinstance(f, PowerLogWeight):
        w = v * f
        for cls in _endpoint_classes(w, p, iv):
            if not cls.finite:
                return math.inf
        if p.is_infinite:
            return powerlog_sup(w, iv)[0]
        wp = w ** p.value
        try:
            res = integrate(wp, iv, rel_tol)
        except DivergentIntegral:
            return math.inf
        return res.value ** (1.0 / p.value)

    def h(x):
        return v(x) * np.abs(f(x))

    if p.is_infinite:
        return _sample_sup(h, iv)
    try:
        res = integrate(lambda x: h(x) ** p.value, iv, rel_tol)
    except DivergentIntegral:
        return math.inf
    return res.value ** (1.0 / p.value)
