"""
SEA dissipator module
"""
from sea_dyn.modules.sea_dissipator.generator import (
    GeneratorOutput,
    SeaCoefficients,
    dissipator,
    dissipator_unchecked,
    generator_via_gram,
    is_degenerate_variance,
    master_rhs,
    rescaling_residual,
    sea_coefficients,
)

__all__ = [
    "GeneratorOutput",
    "SeaCoefficients",
    "dissipator",
    "dissipator_unchecked",
    "generator_via_gram",
    "is_degenerate_variance",
    "master_rhs",
    "rescaling_residual",
    "sea_coefficients",
]
