"""Discontinuous Galerkin solver with entropy-correction artificial viscosity."""

from ._core import (
    AdmissibilityError,
    Config,
    ConfigError,
    check_lemmas,
    ecav_coefficient,
    entropy_variables,
    preset_names,
    reference_element,
    run,
    schlieren_values,
)

__all__ = [
    "AdmissibilityError",
    "Config",
    "ConfigError",
    "check_lemmas",
    "ecav_coefficient",
    "entropy_variables",
    "preset_names",
    "reference_element",
    "run",
    "schlieren_values",
]
