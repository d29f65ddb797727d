"""
Pydantic schemas package.
"""
from .base import BaseSchema, InequalityReport
from .concatenation import BNormRow, BNormSweep, Box3Report, ClassWitness, ConcatReport, InvertBoxReport
from .degree_lowering import DegreeLowerReport, DenominatorResult, FiberCount, Lemma64Report, RationalApprox
from .increment import IncrementStep, IncrementTrace, ModulusHint
from .norms import BoxAverageResult, BoxSpec, Direction, Frequency, NormReport
from .params import Params
from .progression import CountReport, ProgressionInstance, ProgressionWitness
from .run import RunConfig, VerifyFailure, VerifyReport

__all__ = [
    "BaseSchema",
    "InequalityReport",
    "BNormRow",
    "BNormSweep",
    "Box3Report",
    "ClassWitness",
    "ConcatReport",
    "InvertBoxReport",
    "DegreeLowerReport",
    "DenominatorResult",
    "FiberCount",
    "Lemma64Report",
    "RationalApprox",
    "IncrementStep",
    "IncrementTrace",
    "ModulusHint",
    "BoxAverageResult",
    "BoxSpec",
    "Direction",
    "Frequency",
    "NormReport",
    "Params",
    "CountReport",
    "ProgressionInstance",
    "ProgressionWitness",
    "RunConfig",
    "VerifyFailure",
    "VerifyReport",
]
