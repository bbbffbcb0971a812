"""Golden-section search for unimodal functions of one variable."""

import math
from collections.abc import Callable
from typing import Generic, NamedTuple, TypeVar

PHI_RATIO = 2 / (1 + math.sqrt(5))

T = TypeVar("T")


class GoldenSectionResult(NamedTuple, Generic[T]):
    argmin: float
    minimum: float
    payload: T | None
    evaluations: int
    at_boundary: bool


def golden_section(
    f: Callable[[float], tuple[float, T]],
    lower: float,
    upper: float,
    tolerance: float = 1e-8,
    max_iterations: int = 200,
) -> GoldenSectionResult[T]:
    """Minimise ``f`` on ``[lower, upper]``.

    ``f`` returns the function value and a payload (for example the
    eigenvector found while evaluating it); the payload of the best point is
    returned with it. The bracket endpoints are evaluated as well, so a
    minimum outside the bracket shows up as ``at_boundary``.

    Args:
        f: Function to minimise, returning ``(value, payload)``
        lower: Left end of the bracket
        upper: Right end of the bracket
        tolerance: Stop when the bracket is narrower than
            ``tolerance * max(1, |midpoint|)``
        max_iterations: Cap on bracket reductions
    """
    best_x, best_f, best_payload = math.nan, math.inf, None
    evaluations = 0

    def evaluate(x: float) -> float:
        nonlocal best_x, best_f, best_payload, evaluations
        value, payload = f(x)
        evaluations += 1
        if value < best_f:
            best_x, best_f, best_payload = x, value, payload
        return value

    bounds = (lower, upper)
    evaluate(lower)
    evaluate(upper)
    x1 = upper - PHI_RATIO * (upper - lower)
    x2 = lower + PHI_RATIO * (upper - lower)
    f1 = evaluate(x1)
    f2 = evaluate(x2)

    iteration = 0
    while iteration < max_iterations and (upper - lower) > tolerance * max(1.0, abs(0.5 * (upper + lower))):
        if f2 > f1:
            upper, x2, f2 = x2, x1, f1
            x1 = upper - PHI_RATIO * (upper - lower)
            f1 = evaluate(x1)
        else:
            lower, x1, f1 = x1, x2, f2
            x2 = lower + PHI_RATIO * (upper - lower)
            f2 = evaluate(x2)
        iteration += 1

    return GoldenSectionResult(best_x, best_f, best_payload, evaluations, best_x in bounds)
