"""Quadrature on (0, inf), logarithmic grids and supremum scans.

Every integral is computed in the variable ``t = log x``.  Power-type
singularities at the origin and algebraic decay at infinity then become
exponentials in ``t``, which a Gauss-Kronrod rule handles well.  Semi-infinite
pieces are truncated and the window is doubled until the tail is negligible
or can be extrapolated from the local exponential decay rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Interval",
    "QuadResult",
    "SupScan",
    "QuadratureError",
    "NonConvergent",
    "DivergentIntegral",
    "integrate",
    "log_grid",
    "sup_scan",
    "DEFAULT_GRID",
    "FLAT_SLOPE",
]

# Default supremum grid and slope policy shared by the condition evaluators.
DEFAULT_GRID = (1e-6, 1e6, 16)
FLAT_SLOPE = 0.02

# Truncation windows never leave this range of t = log x.
T_MAX = 690.0
_MAX_PANEL_WIDTH = 1.0
_MIN_PANEL_ULPS = 64
_FIRST_WINDOW = 2.0
_GROWTH_FACTOR = 1.5
_GROWTH_STEPS = 4

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (xgk[1], xgk[3], ...).
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5]] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_GWEIGHTS[[9, 11, 13]] = _WG[:3][::-1]


class QuadratureError(ArithmeticError):
    """Base class for quadrature failures."""


class NonConvergent(QuadratureError):
    """The requested tolerance was not met within the work budget."""


class DivergentIntegral(QuadratureError):
    """Partial integrals keep growing under truncation doubling."""


@dataclass(frozen=True)
class Interval:
    """An open interval ``(lo, hi)`` of the positive half line; ``hi`` may be inf."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo >= 0.0:
            raise ValueError(f"interval lower end must be >= 0, got {self.lo}")
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @property
    def touches_origin(self) -> bool:
        return self.lo == 0.0

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.hi)

    def __contains__(self, x: float) -> bool:
        return self.lo < x < self.hi

    def __str__(self) -> str:
        return f"({self.lo:g}, {self.hi:g})"


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    converged: bool


@dataclass
class SupScan:
    grid: np.ndarray
    values: np.ndarray
    sup_estimate: float
    argmax: float
    left_slope: float
    right_slope: float

    @property
    def outward_growth(self) -> float:
        """Largest log-log growth rate towards either end of the grid."""
        return max(self.right_slope, -self.left_slope)


def _vectorize(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    probe = np.array([0.5, 2.0])
    try:
        out = np.asarray(f(probe), dtype=float)
        if out.shape == probe.shape:
            return f
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda x: float(f(x)), otypes=[float])


def _gk15(g, lo: np.ndarray, hi: np.ndarray):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[:, None] + half[:, None] * _NODES[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.asarray(g(t.ravel()), dtype=float).reshape(t.shape)
    kron = half * (vals @ _KWEIGHTS)
    gauss = half * (vals @ _GWEIGHTS)
    return kron, np.abs(kron - gauss)


def _adaptive(g, a: float, b: float, rel_tol: float, abs_tol: float, max_panels: int,
              initial_panels: int = 0):
    """Globally adaptive bisection of [a, b]; returns (value, error, converged)."""
    n0 = initial_panels or max(1, math.ceil((b - a) / _MAX_PANEL_WIDTH))
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    val, err = _gk15(g, lo, hi)
    span = b - a
    while True:
        if not np.all(np.isfinite(val)):
            if np.any(np.isnan(val)):
                raise NonConvergent("integrand produced NaN")
            raise DivergentIntegral("integrand is not integrable on a panel")
        total = math.fsum(val)
        etot = float(err.sum())
        tol = max(abs_tol, rel_tol * abs(total))
        if etot <= tol:
            return total, etot, True
        width = hi - lo
        # panels may shrink to a few ulps of t so endpoint singularities resolve
        bad = (err > tol * width / span) & (width > _MIN_PANEL_ULPS * np.spacing(max(1.0, abs(a), abs(b))))
        if not bad.any() or lo.size + bad.sum() > max_panels:
            return total, etot, False
        mid = 0.5 * (lo[bad] + hi[bad])
        new_lo = np.concatenate([lo[bad], mid])
        new_hi = np.concatenate([mid, hi[bad]])
        v, e = _gk15(g, new_lo, new_hi)
        keep = ~bad
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], v])
        err = np.concatenate([err[keep], e])


def _clustered(g, a: float, b: float):
    """g on [a, b] pulled back to [0, 1] by t = a + (b - a)(3s^2 - 2s^3).

    The Jacobian vanishes at both ends, which absorbs inverse-square-root
    type singularities sitting at break points.
    """
    span = b - a

    def h(s):
        t = a + span * s * s * (3.0 - 2.0 * s)
        return g(t) * (6.0 * span) * s * (1.0 - s)

    return h


def _tail_rate(g, end: float, direction: int, delta: float = 0.5):
    """Exponential decay rate of |g| at the window end, or None if unstable."""
    ts = end - direction * delta * np.arange(3)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        vals = np.asarray(g(ts), dtype=float)
    if not np.all(np.isfinite(vals)) or np.any(vals == 0.0):
        return None
    if not (np.all(vals > 0) or np.all(vals < 0)):
        return None
    mags = np.abs(vals)
    k1 = math.log(mags[1] / mags[0]) / delta
    k2 = math.log(mags[2] / mags[1]) / delta
    return vals[0], k1, k2


def _semi_infinite(g, t0: float, direction: int, rel_tol: float, abs_tol: float,
                   max_panels: int):
    """Integrate g over [t0, inf) (direction=+1) or (-inf, t0] (direction=-1)."""
    if direction < 0:
        value, err, ok = _semi_infinite(lambda s: g(-s), -t0, 1, rel_tol, abs_tol, max_panels)
        return value, err, ok
    if t0 >= T_MAX:
        return 0.0, 0.0, True
    end = min(t0 + _FIRST_WINDOW, T_MAX)
    partial, err, ok = _adaptive(g, t0, end, rel_tol, abs_tol, max_panels)
    growth_run = 0
    while True:
        new_end = min(t0 + 2.0 * (end - t0), T_MAX)
        inc, e, ok_inc = _adaptive(g, end, new_end, rel_tol, max(abs_tol, rel_tol * abs(partial)),
                                   max_panels)
        previous = partial
        partial += inc
        err += e
        ok = ok and ok_inc
        end = new_end
        if not math.isfinite(partial):
            raise DivergentIntegral("partial integral overflowed")
        if previous != 0.0 and abs(partial) >= _GROWTH_FACTOR * abs(previous):
            growth_run += 1
            if growth_run >= _GROWTH_STEPS:
                raise DivergentIntegral(
                    f"partial integral grew by >= {_GROWTH_FACTOR}x over "
                    f"{_GROWTH_STEPS} successive window doublings"
                )
        else:
            growth_run = 0
        tol = max(abs_tol, rel_tol * abs(partial))
        rate = _tail_rate(g, end, 1)
        if rate is not None:
            g_end, k1, k2 = rate
            if k1 > 1e-6 and k2 > 1e-6 and abs(k1 - k2) <= 0.05 * k1:
                tail = g_end / k1
                uncertainty = abs(g_end / k2 - tail)
                if uncertainty <= tol:
                    return partial + tail, err + uncertainty, ok
        elif abs(inc) <= tol and growth_run == 0:
            return partial, err + abs(inc), ok
        if abs(inc) <= 1e-3 * tol and growth_run == 0:
            return partial, err + abs(inc), ok
        if end >= T_MAX:
            if abs(inc) <= tol:
                return partial, err + abs(inc), ok
            raise NonConvergent("truncation window exhausted before the tail settled")


def integrate(f: Callable, iv: Interval, rel_tol: float = 1e-10, *, abs_tol: float = 0.0,
              points: Sequence[float] = (), max_panels: int = 4000,
              strict: bool = True) -> QuadResult:
    """Integrate ``f`` over the interval ``iv``.

    ``f`` should accept numpy arrays; scalar-only callables are vectorized.
    ``points`` lists interior break points (kinks, support edges).

    Raises
    ------
    DivergentIntegral
        When a semi-infinite piece keeps growing under window doubling, or
        the integrand overflows.
    NonConvergent
        When ``strict`` and the tolerance was not met within ``max_panels``.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    fv = _vectorize(f)

    def g(t):
        x = np.exp(t)
        return fv(x) * x

    t_lo = -math.inf if iv.lo == 0.0 else math.log(iv.lo)
    t_hi = math.inf if math.isinf(iv.hi) else math.log(iv.hi)
    breaks = sorted({math.log(p) for p in points if iv.lo < p < iv.hi})
    inner = breaks if breaks or not (math.isinf(t_lo) and math.isinf(t_hi)) else [0.0]
    knots = [t_lo] + inner + [t_hi]

    finite_total = 0.0
    err_total = 0.0
    converged = True
    for a, b in zip(knots[:-1], knots[1:]):
        if math.isinf(a) or math.isinf(b):
            continue
        if a in breaks or b in breaks:
            panels = max(1, math.ceil((b - a) / _MAX_PANEL_WIDTH))
            v, e, ok = _adaptive(_clustered(g, a, b), 0.0, 1.0, rel_tol, abs_tol, max_panels, panels)
        else:
            v, e, ok = _adaptive(g, a, b, rel_tol, abs_tol, max_panels)
        finite_total += v
        err_total += e
        converged &= ok
    tail_abs = max(abs_tol, rel_tol * abs(finite_total))
    total = finite_total
    if math.isinf(t_lo):
        anchor = knots[1]
        if math.isinf(anchor):
            anchor = 0.0
        v, e, ok = _semi_infinite(g, anchor, -1, rel_tol, tail_abs, max_panels)
        total += v
        err_total += e
        converged &= ok
    if math.isinf(t_hi):
        anchor = knots[-2]
        if math.isinf(anchor):
            anchor = 0.0
        v, e, ok = _semi_infinite(g, anchor, 1, rel_tol, tail_abs, max_panels)
        total += v
        err_total += e
        converged &= ok
    if converged and err_total > max(abs_tol, rel_tol * abs(total)) * 10:
        converged = False
    if strict and not converged:
        raise NonConvergent(
            f"tolerance {rel_tol:g} not met on {iv} (error estimate {err_total:.3g})"
        )
    return QuadResult(float(total), float(err_total), converged)


def log_grid(lo: float, hi: float, per_decade: int) -> np.ndarray:
    """Geometric grid from ``lo`` to ``hi`` with ``per_decade`` steps per factor 10."""
    if not 0 < lo < hi:
        raise ValueError("log_grid needs 0 < lo < hi")
    if per_decade < 1:
        raise ValueError("per_decade must be a positive integer")
    steps = max(1, int(round(math.log10(hi / lo) * per_decade)))
    return np.geomspace(lo, hi, steps + 1)


def _edge_slope(r: np.ndarray, v: np.ndarray) -> float:
    mask = np.isfinite(v) & (v > 0)
    if mask.sum() < 2:
        return 0.0
    x = np.log(r[mask])
    y = np.log(v[mask])
    return float(np.polyfit(x, y, 1)[0])


def sup_scan(F: Callable[[float], float], grid: Sequence[float]) -> SupScan:
    """Evaluate ``F`` on ``grid`` and summarise its supremum and edge slopes.

    Slopes are least-squares fits of log F against log r over the outermost
    decade at each end of the grid.
    """
    r = np.asarray(grid, dtype=float)
    if r.size == 0:
        raise ValueError("empty grid")
    values = np.array([F(float(x)) for x in r], dtype=float)
    if np.any(np.isposinf(values)):
        k = int(np.argmax(np.isposinf(values)))
        return SupScan(r, values, math.inf, float(r[k]), math.nan, math.nan)
    k = int(np.argmax(values))
    left = r <= r[0] * 10.0 * (1 + 1e-12)
    right = r >= r[-1] / 10.0 * (1 - 1e-12)
    return SupScan(
        grid=r,
        values=values,
        sup_estimate=float(values[k]),
        argmax=float(r[k]),
        left_slope=_edge_slope(r[left], values[left]),
        right_slope=_edge_slope(r[right], values[right]),
    )
