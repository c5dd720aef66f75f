"""Boundedness of splitting-kernel integral transforms between weighted L_p spaces.

Hardy-type supremum conditions are evaluated numerically, cross-checked
against closed-form power-weight characterizations and probed with
extremal test functions.
"""

from .analyzer import PowerInstance
from .gluing import GluingInstance, glue, verify_equivalence
from .hardy import InequalityInstance, check_boundedness, condition_one, condition_two
from .kernels import PhiMap, SplittingKernelSpec, catalog, upper_envelope, validate_estimate
from .numerics import Interval, integrate, log_grid, sup_scan
from .probe import apply_transform, extremal_ratio_scan, sharp_constant_probe
from .spaces import Exponent, PowerLogWeight, conjugate, parse_weight, weighted_norm
from .specialfn import struve

__version__ = "0.1.0"

__all__ = [
    "Exponent", "PowerLogWeight", "conjugate", "parse_weight", "weighted_norm",
    "Interval", "integrate", "log_grid", "sup_scan",
    "struve",
    "PhiMap", "SplittingKernelSpec", "catalog", "upper_envelope", "validate_estimate",
    "InequalityInstance", "check_boundedness", "condition_one", "condition_two",
    "GluingInstance", "glue", "verify_equivalence",
    "PowerInstance",
    "apply_transform", "extremal_ratio_scan", "sharp_constant_probe",
]
