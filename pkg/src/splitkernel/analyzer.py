"""Closed-form verdicts for power weights u(x) = x^-beta, v(x) = x^gamma.

These serve as ground truth for the numerical conditions. Every kernel in
the catalog is homogeneous, so boundedness forces the scaling relation

    beta = gamma + 1/q - 1/p'

and the remaining constraints come from endpoint integrability of the
factor norms. A factor constraint is strict when its Lebesgue exponent is
finite and non-strict when it is infinite (an L_inf norm of x^a on (0, r)
is finite for a >= 0).

Stieltjes (kernel (x + y)^-lambda): with the substitution x -> t x each
factor of the joint condition becomes a Beta integral times a power of t.
Finiteness of the Beta integrals gives beta < 1/q, gamma < 1/p',
beta + lambda > 1/q and gamma + lambda > 1/p', and t-independence gives
beta + gamma = 1/q + 1/p' - lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .spaces import Exponent

__all__ = [
    "PowerInstance",
    "SineVerdict",
    "ExponentOutOfScope",
    "BOUNDED",
    "UNBOUNDED",
    "SUFFICIENT_ONLY",
    "UNKNOWN",
    "LINK_TOL",
    "linked",
    "scaling_residual",
    "laplace_power_verdict",
    "struve_power_verdict",
    "sine_power_verdict",
    "stieltjes_power_verdict",
    "laplace_condition_implication",
    "laplace_implication_witness",
    "boundary_distance",
]

BOUNDED = "bounded"
UNBOUNDED = "unbounded"
SUFFICIENT_ONLY = "sufficient-only"
UNKNOWN = "unknown"

LINK_TOL = 1e-12


class ExponentOutOfScope(ValueError):
    pass


@dataclass(frozen=True)
class PowerInstance:
    p: Exponent
    q: Exponent
    beta: float
    gamma: float
    kernel_params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "p", Exponent.of(self.p))
        object.__setattr__(self, "q", Exponent.of(self.q))
        if self.p.value > self.q.value:
            raise ValueError(f"need p <= q, got p={self.p}, q={self.q}")

    @property
    def inv_q(self) -> float:
        return self.q.reciprocal

    @property
    def inv_pc(self) -> float:
        """1/p'."""
        return self.p.conjugate().reciprocal

    @classmethod
    def linked_from_beta(cls, p, q, beta: float, **params) -> "PowerInstance":
        p, q = Exponent.of(p), Exponent.of(q)
        gamma = beta - q.reciprocal + p.conjugate().reciprocal
        return cls(p, q, beta, gamma, dict(params))


@dataclass(frozen=True)
class SineVerdict:
    sharp: str
    split_sufficient: bool


def scaling_residual(inst: PowerInstance) -> float:
    return inst.beta - inst.gamma - inst.inv_q + inst.inv_pc


def linked(inst: PowerInstance) -> bool:
    return abs(scaling_residual(inst)) <= LINK_TOL


def _less(lhs: float, rhs: float, strict: bool) -> bool:
    return lhs < rhs if strict else lhs <= rhs + LINK_TOL


def _is_endpoint_pair(inst: PowerInstance) -> bool:
    return inst.p.value == 1.0 and inst.q.is_infinite


def laplace_power_verdict(inst: PowerInstance) -> str:
    """Laplace transform: bounded iff beta < 1/q and the scaling relation holds.

    At (p, q) = (1, inf) the condition reads beta = gamma and beta <= 0.
    """
    if _is_endpoint_pair(inst):
        ok = abs(inst.beta - inst.gamma) <= LINK_TOL and inst.beta <= LINK_TOL
    else:
        ok = inst.beta < inst.inv_q and linked(inst)
    return BOUNDED if ok else UNBOUNDED


def _struve_range(inst: PowerInstance, alpha: float, lower: float) -> bool:
    strict = not _is_endpoint_pair(inst)
    b = inst.beta - inst.inv_q
    return _less(lower, b, strict) and _less(b, alpha + 1.5, strict)


def struve_power_verdict(inst: PowerInstance, alpha: Optional[float] = None) -> str:
    """H_alpha transform with kernel sqrt(xy) H_alpha(xy).

    For alpha > 1/2 the kernel is two-sided comparable to its envelope and
    boundedness holds iff 1/q + alpha - 1/2 < beta < 1/q + alpha + 3/2 with
    the scaling relation. For -1/2 < alpha <= 1/2 only the sufficient range
    1/q < beta < 1/q + alpha + 3/2 is available.
    """
    if alpha is None:
        alpha = inst.kernel_params["alpha"]
    if not alpha > -0.5:
        raise ValueError("struve needs alpha > -1/2")
    if alpha > 0.5:
        ok = linked(inst) and _struve_range(inst, alpha, alpha - 0.5)
        return BOUNDED if ok else UNBOUNDED
    if linked(inst) and _struve_range(inst, alpha, 0.0):
        return SUFFICIENT_ONLY
    return UNKNOWN


def sine_power_verdict(inst: PowerInstance) -> SineVerdict:
    """Sharp sine-transform range against the range from the crude envelope."""
    beta, iq = inst.beta, inst.inv_q
    link = linked(inst)
    sharp = link and max(0.0, iq - inst.inv_pc) <= beta + LINK_TOL and beta < 1.0 + iq
    ours = link and iq < beta < 1.0 + iq
    return SineVerdict(BOUNDED if sharp else UNBOUNDED, bool(ours))


def stieltjes_power_verdict(inst: PowerInstance, lam: Optional[float] = None) -> str:
    """Stieltjes transform of order lambda, for 1 < p <= q < inf."""
    if lam is None:
        lam = inst.kernel_params.get("lam", inst.kernel_params.get("lambda"))
    if not lam > 0:
        raise ValueError("stieltjes needs lambda > 0")
    if inst.p.value == 1.0 or inst.q.is_infinite:
        raise ExponentOutOfScope("the Stieltjes closed form covers 1 < p <= q < inf")
    b, g, iq, ipc = inst.beta, inst.gamma, inst.inv_q, inst.inv_pc
    ok = (b < iq and g < ipc and b + lam > iq and g + lam > ipc
          and abs(b + g - (iq + ipc - lam)) <= LINK_TOL)
    return BOUNDED if ok else UNBOUNDED


def _laplace_near_zero_finite(inst: PowerInstance) -> bool:
    """sup_t ||x^-beta||_{L_q(0,t)} ||x^-gamma||_{L_p'(0,1/t)} < inf."""
    return (linked(inst)
            and _less(inst.beta, inst.inv_q, not inst.q.is_infinite)
            and _less(inst.gamma, inst.inv_pc, not inst.p.conjugate().is_infinite))


def _laplace_near_infinity_finite(inst: PowerInstance, n: int) -> bool:
    """sup_t ||x^-(n+beta)||_{L_q(t,inf)} ||x^-(n+gamma)||_{L_p'(1/t,inf)} < inf."""
    return (linked(inst)
            and _less(inst.inv_q, n + inst.beta, not inst.q.is_infinite)
            and _less(inst.inv_pc, n + inst.gamma, not inst.p.conjugate().is_infinite))


def laplace_implication_witness(inst: PowerInstance, max_n: int = 10) -> Optional[int]:
    """Smallest n <= max_n making the near-infinity Laplace condition finite."""
    for n in range(1, max_n + 1):
        if _laplace_near_infinity_finite(inst, n):
            return n
    return None


def laplace_condition_implication(inst: PowerInstance) -> bool:
    """Whether finiteness of the near-zero Laplace condition implies the
    near-infinity one for some n (vacuously true when the former fails)."""
    if not _laplace_near_zero_finite(inst):
        return True
    return laplace_implication_witness(inst) is not None


def _margins(kernel: str, inst: PowerInstance, params: Dict[str, float]) -> List[float]:
    b, g, iq, ipc = inst.beta, inst.gamma, inst.inv_q, inst.inv_pc
    if kernel == "laplace":
        if _is_endpoint_pair(inst):
            return [b]
        return [b - iq]
    if kernel == "struve":
        a = params["alpha"]
        low = a - 0.5 if a > 0.5 else 0.0
        return [b - iq - low, b - iq - a - 1.5]
    if kernel == "sine":
        return [b - max(0.0, iq - ipc), b - 1.0 - iq, b - iq]
    if kernel == "stieltjes":
        lam = params.get("lam", params.get("lambda"))
        return [b - iq, g - ipc, b + lam - iq, g + lam - ipc]
    raise ValueError(f"no closed form for kernel {kernel!r}")


def boundary_distance(kernel: str, inst: PowerInstance, **params) -> float:
    """Distance of an instance from every inequality boundary of the closed
    form, and from the scaling hyperplane when the instance is off it."""
    params = {**inst.kernel_params, **params}
    dist = min(abs(m) for m in _margins(kernel, inst, params))
    if kernel == "stieltjes":
        lam = params.get("lam", params.get("lambda"))
        res = inst.beta + inst.gamma - (inst.inv_q + inst.inv_pc - lam)
    else:
        res = scaling_residual(inst)
    if abs(res) > LINK_TOL:
        dist = min(dist, abs(res))
    return dist
