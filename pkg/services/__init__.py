"""
Services package: one service class per area.
"""
from .signal_service import SignalService
from .gowers_service import GowersService
from .progression_service import ProgressionService
from .vdc_service import VdcService
from .concatenation_service import ConcatenationService
from .degree_lowering_service import DegreeLoweringService
from .increment_service import IncrementService
from .verify_service import VerifyService

__all__ = [
    "SignalService",
    "GowersService",
    "ProgressionService",
    "VdcService",
    "ConcatenationService",
    "DegreeLoweringService",
    "IncrementService",
    "VerifyService",
]
