"""Numeric knobs shared by the iterative solvers."""

from dataclasses import asdict, dataclass
from typing import Any

from ..error.exceptions import ConfigError


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and iteration caps.

    Attributes:
        em_sweep_cap: Maximum number of cyclic-coordinate sweeps
        em_tolerance: A sweep improving lambda_max by less than this ends the search
        golden_tolerance: Relative width at which a golden-section search stops
        bracket_half_width: Half width of the initial bracket around log x
        max_bracket_expansions: How often a bracket may be moved after a boundary hit
        inner_tolerance: Power-iteration residual used inside the completion search
        eigen_tolerance: Residual bound of a standalone Perron computation
        power_iteration_cap: Maximum number of power-iteration steps
        mds_iteration_cap: Maximum number of majorization steps
        mds_tolerance: Stress improvement below which majorization stops
    """

    em_sweep_cap: int = 200
    em_tolerance: float = 1e-10
    golden_tolerance: float = 1e-8
    bracket_half_width: float = 8.0
    max_bracket_expansions: int = 20
    inner_tolerance: float = 1e-11
    eigen_tolerance: float = 1e-9
    power_iteration_cap: int = 10_000
    mds_iteration_cap: int = 500
    mds_tolerance: float = 1e-9

    def __post_init__(self) -> None:
        errors: dict[str, str] = {}
        for name in ("em_sweep_cap", "power_iteration_cap", "mds_iteration_cap"):
            if getattr(self, name) < 1:
                errors[name] = "Must be at least 1."
        if self.max_bracket_expansions < 0:
            errors["max_bracket_expansions"] = "Must be non-negative."
        for name in (
            "em_tolerance",
            "golden_tolerance",
            "bracket_half_width",
            "inner_tolerance",
            "eigen_tolerance",
            "mds_tolerance",
        ):
            if not getattr(self, name) > 0:
                errors[name] = "Must be positive."
        if errors:
            raise ConfigError("Invalid solver settings", fields=errors)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


DEFAULT_SETTINGS = SolverSettings()
