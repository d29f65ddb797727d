"""
CLI command routers.
"""
from . import box_average, concatenation, counting, degree_lowering, increment, norms, verify

ROUTERS = (norms, counting, box_average, concatenation, degree_lowering, increment, verify)

__all__ = [
    "ROUTERS",
    "box_average",
    "concatenation",
    "counting",
    "degree_lowering",
    "increment",
    "norms",
    "verify",
]
