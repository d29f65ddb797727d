"""
Operation-count estimates used to refuse evaluations before they start.
"""
import logging
import math

from config import settings
from exceptions import InfeasibleError

logger = logging.getLogger(__name__)


def u_norm_ops(width: int, s: int) -> float:
    """Cost of the differencing recursion, about W^(s-2) autocorrelations of length W."""
    width = max(width, 1)
    if s <= 2:
        return width * max(1.0, math.log2(2 * width))
    return float(width) ** (s - 1) * max(1.0, math.log2(2 * width))


def guard(label: str, estimated_ops: float, budget: float | None = None) -> None:
    """
    Raise if ``estimated_ops`` exceeds the budget.

    Raises:
        InfeasibleError: With the estimate and the budget in the message
    """
    budget = settings.FEASIBILITY_MAX_OPS if budget is None else budget
    if estimated_ops > budget:
        logger.warning(f"Refusing {label}: {estimated_ops:.3g} ops over budget {budget:.3g}")
        raise InfeasibleError(f"{label} is infeasible", estimated_ops, budget)


def guard_u_norm(width: int, s: int) -> None:
    guard(f"U^{s} norm at width {width}", u_norm_ops(width, s))
