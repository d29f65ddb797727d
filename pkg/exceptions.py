"""
Error hierarchy shared by services and the CLI.

Each error carries a human readable ``detail`` and the process exit code the
CLI reports for it.
"""


class UniformityError(Exception):
    """Base error with a detail message and an exit code."""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class ParameterError(UniformityError, ValueError):
    """Invalid parameters or a violated precondition."""

    exit_code = 2


class MalformedInputError(UniformityError):
    """An input file could not be parsed."""

    exit_code = 3


class InfeasibleError(UniformityError):
    """A feasibility guard refused to start an evaluation."""

    exit_code = 4

    def __init__(self, detail: str, estimated_ops: float = 0.0, budget: float = 0.0):
        super().__init__(f"{detail} (estimated {estimated_ops:.3g} ops, budget {budget:.3g})")
        self.estimated_ops = estimated_ops
        self.budget = budget
