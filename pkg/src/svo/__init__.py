"""Exact multiplier rules for constrained set-valued optimization problems."""

from .criteria import check_l_wmin, check_v_wmin
from .instance import Instance, load_instance, reference_instance
from .lagrange import characterize_LPT, check_wmin_LPT, find_multiplier
from .harness import FuzzConfig, fuzz_instances, verify_suite

__version__ = "0.1.0"

__all__ = [
    "FuzzConfig",
    "Instance",
    "characterize_LPT",
    "check_l_wmin",
    "check_v_wmin",
    "check_wmin_LPT",
    "find_multiplier",
    "fuzz_instances",
    "load_instance",
    "reference_instance",
    "verify_suite",
]
