"""Struve function H_alpha for real order alpha > -1/2 and positive argument."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["struve_series", "struve_asymptotic", "struve", "CROSSOVER", "check_order"]

CROSSOVER = 12.0
SERIES_MAX_X = 40.0
_MAX_TERMS = 200
_REL_STOP = 1e-18


def check_order(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > -0.5:
        raise ValueError(f"Struve order must exceed -1/2, got {alpha}")
    return alpha


def _scalar_or_array(out: np.ndarray, x):
    return float(out) if np.ndim(x) == 0 else out


def struve_series(alpha: float, x):
    """Power series of H_alpha, summed with Neumaier compensation.

    Terms follow the recurrence t_{k+1} = -t_k (x/2)^2 / ((k+3/2)(k+alpha+3/2));
    summation stops once every term is below 1e-18 of its running sum.
    """
    alpha = check_order(alpha)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0) or np.any(xa > SERIES_MAX_X):
        raise ValueError("struve_series needs 0 < x <= 40")
    h2 = (0.5 * xa) ** 2
    term = np.full(xa.shape, 1.0 / (math.gamma(1.5) * math.gamma(alpha + 1.5)))
    total = term.copy()
    comp = np.zeros_like(total)
    for k in range(1, _MAX_TERMS):
        term *= h2 * (-1.0 / ((k + 0.5) * (k + alpha + 0.5)))
        t = total + term
        comp += np.where(np.abs(total) >= np.abs(term), (total - t) + term, (term - t) + total)
        total = t
        # the stopping test is cheap relative to a term but not free
        if k % 4 == 0 and np.all(np.abs(term) <= _REL_STOP * np.abs(total + comp)):
            break
    out = (0.5 * xa) ** (alpha + 1.0) * (total + comp)
    return _scalar_or_array(out, x)


def struve_asymptotic(alpha: float, x):
    """Large-argument form: oscillating Bessel-type part plus the power term."""
    alpha = check_order(alpha)
    xa = np.asarray(x, dtype=float)
    osc = np.sqrt(2.0 / (math.pi * xa)) * np.sin(xa - alpha * math.pi / 2 - math.pi / 4)
    power = (0.5 * xa) ** (alpha - 1.0) / (math.gamma(alpha + 0.5) * math.sqrt(math.pi))
    return _scalar_or_array(osc + power, x)


def struve(alpha: float, x):
    """H_alpha(x): series up to x = 12, asymptotic form beyond."""
    alpha = check_order(alpha)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ValueError("struve needs x > 0")
    out = np.empty(xa.shape)
    small = xa <= CROSSOVER
    if np.any(small):
        out[small] = struve_series(alpha, xa[small])
    if np.any(~small):
        out[~small] = struve_asymptotic(alpha, xa[~small])
    return _scalar_or_array(out, x)
