"""
Immutable domain models package.
"""
from .base import DomainModel
from .cube_set import CubeSet
from .factor_pair import FactorPair
from .phase_table import PhaseTable
from .signal import Signal
from .weight import TriangularWeight

__all__ = [
    "DomainModel",
    "CubeSet",
    "FactorPair",
    "PhaseTable",
    "Signal",
    "TriangularWeight",
]
