"""Python bindings for the relaxcat finite-volume library."""

from ._relaxcat import (
    ConfigError,
    Error,
    RunError,
    convergence,
    fourier_symbol,
    initial_field,
    list_cases,
    ode_amplification,
    run,
    stability_region,
)

__all__ = [
    "ConfigError",
    "Error",
    "RunError",
    "convergence",
    "fourier_symbol",
    "initial_field",
    "list_cases",
    "ode_amplification",
    "run",
    "stability_region",
]
