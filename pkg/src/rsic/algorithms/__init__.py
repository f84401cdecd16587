from .checks import TraceViolation, check_anyfit, check_count_bound, check_monotone
from .engine import (Engine, JobView, Trace, TraceEvent, anyfit_decision, classed_decision,
                     dimension_class, policy_order, run_policy, threshold_split)
from .spec import ANYFIT, MONOTONE, PolicyError, PolicySpec, parse_policy, resolve

__all__ = [
    "ANYFIT", "MONOTONE", "Engine", "JobView", "PolicyError", "PolicySpec", "Trace", "TraceEvent",
    "TraceViolation", "anyfit_decision", "check_anyfit", "check_count_bound", "check_monotone",
    "classed_decision", "dimension_class", "parse_policy", "policy_order", "resolve",
    "run_policy", "threshold_split",
]
