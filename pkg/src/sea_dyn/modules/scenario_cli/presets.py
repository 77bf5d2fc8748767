"""Built-in scenarios reproducing the two-state-system experiments.

Energies are in units of the model's natural scale (epsilon, Omega or xi set
to 1). Basis index 0 is |1>, the upper level of the static two-state
Hamiltonian, and index 1 is |0>.
"""
from __future__ import annotations

import copy
import math
from enum import Enum
from typing import Any

from sea_dyn.errors import ConfigError

KET_1 = [1.0, 0.0]
KET_0 = [0.0, 1.0]
KET_PLUS = [1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)]
TSS_PSI0 = [math.sqrt(0.7), math.sqrt(0.3)]

COHERENCE_THRESHOLD = 1e-3
TSS_T_MAX = 1e4
TIME_DEPENDENT_INTEGRATOR = {"rel_tol": 1e-7, "abs_tol": 1e-9}
# adaptive runs of the static two-state presets stay within 1e-6 of fixed-step RK4
STATIC_TSS_INTEGRATOR = {"rel_tol": 1e-10, "abs_tol": 1e-12}


class PresetId(str, Enum):
    FIG1A_G025 = "fig1a_g025"
    FIG1A_G05 = "fig1a_g05"
    FIG1A_G25 = "fig1a_g25"
    FIG1C_L2 = "fig1c_l2"
    FIG1C_L4 = "fig1c_l4"
    FIG1C_L6 = "fig1c_l6"
    FIG2A = "fig2a"
    FIG2B = "fig2b"
    FIG3A = "fig3a"
    FIG3B = "fig3b"
    FIG4 = "fig4"
    FIG4_EXCITED = "fig4_excited"
    QUTRIT_RELAX = "qutrit_relax"


def _tss(name: str, gamma: float, lam: float) -> dict[str, Any]:
    return {
        "name": name,
        "model": {"kind": "static_tss", "epsilon": 1.0},
        "psi0": TSS_PSI0,
        "lambda": lam,
        "gamma": gamma,
        "t_span": [0.0, TSS_T_MAX],
        "integrator": dict(STATIC_TSS_INTEGRATOR),
        "output": {"path": f"{name}.csv", "stride": 10},
        "stop": {"abs_rho01_below": COHERENCE_THRESHOLD},
    }


def _rotating(name: str, ratio: float, psi0: list[float], t_final: float, stride: int) -> dict[str, Any]:
    return {
        "name": name,
        "model": {"kind": "rotating_field", "Omega": 1.0, "omega": ratio},
        "psi0": psi0,
        "lambda": 1e-2,
        "gamma": 0.5,
        "t_span": [0.0, t_final],
        "integrator": dict(TIME_DEPENDENT_INTEGRATOR),
        "output": {"path": f"{name}.csv", "stride": stride},
        "compare_unitary": True,
    }


def _landau_zener(name: str, psi0: list[float]) -> dict[str, Any]:
    return {
        "name": name,
        "model": {"kind": "landau_zener", "kappa": 0.1, "xi": 1.0, "T": 500.0},
        "psi0": psi0,
        "lambda": 1e-2,
        "gamma": 1.0,
        "t_span": [-500.0, 500.0],
        "integrator": dict(TIME_DEPENDENT_INTEGRATOR),
        "output": {"path": f"{name}.csv", "stride": 20},
        "compare_unitary": True,
    }


_PRESETS: dict[str, dict[str, Any]] = {
    PresetId.FIG1A_G025: _tss("fig1a_g025", 0.25, 1e-4),
    PresetId.FIG1A_G05: _tss("fig1a_g05", 0.5, 1e-4),
    PresetId.FIG1A_G25: _tss("fig1a_g25", 2.5, 1e-4),
    PresetId.FIG1C_L2: _tss("fig1c_l2", 0.25, 1e-2),
    PresetId.FIG1C_L4: _tss("fig1c_l4", 0.25, 1e-4),
    PresetId.FIG1C_L6: _tss("fig1c_l6", 0.25, 1e-6),
    # one revival time 2 pi / omega for the adiabatic cases
    PresetId.FIG2A: _rotating("fig2a", 2 * math.pi / 100, KET_PLUS, 100.0, 5),
    PresetId.FIG2B: _rotating("fig2b", 2 * math.pi / 1000, KET_PLUS, 1000.0, 10),
    PresetId.FIG3A: _rotating("fig3a", 2 * math.pi / 10, KET_PLUS, 100.0, 5),
    PresetId.FIG3B: _rotating("fig3b", 2 * math.pi / 100, KET_1, 100.0, 5),
    PresetId.FIG4: _landau_zener("fig4", KET_0),
    PresetId.FIG4_EXCITED: _landau_zener("fig4_excited", KET_1),
    PresetId.QUTRIT_RELAX: {
        "name": "qutrit_relax",
        "model": {"kind": "static_levels", "levels": [0.0, 1.0, 2.0]},
        "psi0": [math.sqrt(0.6), math.sqrt(0.1), math.sqrt(0.3)],
        "lambda": 1e-2,
        "gamma": 0.5,
        "t_span": [0.0, 200.0],
        "output": {"path": "qutrit_relax.csv", "stride": 10},
    },
}


def preset_ids() -> list[str]:
    return [p.value for p in PresetId]


def preset_document(preset_id: str) -> dict[str, Any]:
    try:
        key = PresetId(preset_id)
    except ValueError:
        raise ConfigError([f"preset: unknown preset {preset_id!r}, expected one of {preset_ids()}"])
    return copy.deepcopy(_PRESETS[key])
