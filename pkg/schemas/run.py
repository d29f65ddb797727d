"""
CLI run schemas.
"""
from typing import Any, Optional

from pydantic import Field

from schemas.base import BaseSchema


class RunConfig(BaseSchema):
    """Everything that determines one CLI invocation's output."""
    command: str
    inputs: dict[str, str] = Field(default_factory=dict, description="Named input paths")
    N: Optional[int] = Field(None, ge=1)
    q: int = Field(1, ge=1)
    deltas: dict[str, str] = Field(default_factory=dict, description="Named rational parameters as given")
    seed: int = Field(0, ge=0, lt=2**64, description="SplitMix64 seed")
    trials: int = Field(1, ge=1)
    out: Optional[str] = None
    flags: dict[str, Any] = Field(default_factory=dict, description="Remaining command options")


class VerifyFailure(BaseSchema):
    """One failing trial, replayable from its seed."""
    seed: int
    diagnostic: str


class VerifyReport(BaseSchema):
    """Outcome of a verification suite."""
    suite: str
    trials: int = Field(..., ge=0)
    seed: int
    failures: list[VerifyFailure] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures
