"""
Hamiltonian models module
"""
from sea_dyn.modules.hamiltonian_models.adiabatic import (
    AdiabaticCoefficients,
    AdiabaticDiagnostics,
    adiabatic_coefficient_step,
    adiabaticity_metric,
    integrate_coefficients,
)
from sea_dyn.modules.hamiltonian_models.hamiltonians import (
    MODEL_KINDS,
    CustomTable,
    HamiltonianModel,
    LandauZener,
    RotatingField,
    StaticLevels,
    StaticTss,
    evaluate,
    instantaneous_eigensystem,
)

__all__ = [
    "AdiabaticCoefficients",
    "AdiabaticDiagnostics",
    "CustomTable",
    "HamiltonianModel",
    "LandauZener",
    "MODEL_KINDS",
    "RotatingField",
    "StaticLevels",
    "StaticTss",
    "adiabatic_coefficient_step",
    "adiabaticity_metric",
    "evaluate",
    "instantaneous_eigensystem",
    "integrate_coefficients",
]
