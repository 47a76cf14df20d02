from ._core import (
    NumericalFailure,
    ParseError,
    Scenario,
    ValidationError,
    enumerate_exact,
    run_absa,
    run_mldg,
    solve_exact,
    validate_deployment,
)

__all__ = [
    "NumericalFailure",
    "ParseError",
    "Scenario",
    "ValidationError",
    "enumerate_exact",
    "run_absa",
    "run_mldg",
    "solve_exact",
    "validate_deployment",
]
