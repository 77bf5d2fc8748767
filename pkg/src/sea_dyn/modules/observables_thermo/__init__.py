"""
Observables and thermodynamics module
"""
from sea_dyn.modules.observables_thermo.observables import (
    CSV_COLUMNS,
    SIGMA_X,
    ObservableRow,
    fidelity,
    observables,
    von_neumann_entropy,
)
from sea_dyn.modules.observables_thermo.thermo import (
    CanonicalState,
    canonical_state,
    effective_beta,
    restricted_canonical,
    stationarity_residual,
    thermal_energy,
)

__all__ = [
    "CSV_COLUMNS",
    "CanonicalState",
    "ObservableRow",
    "SIGMA_X",
    "canonical_state",
    "effective_beta",
    "fidelity",
    "observables",
    "restricted_canonical",
    "stationarity_residual",
    "thermal_energy",
    "von_neumann_entropy",
]
