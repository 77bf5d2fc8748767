"""
Evolution engine module
"""
from sea_dyn.modules.evolution_engine.integrator import (
    EvolutionEngine,
    IntegratorConfig,
    Method,
    MonitorReport,
    TrajectoryRecord,
    evolve,
    evolve_unitary,
)

__all__ = [
    "EvolutionEngine",
    "IntegratorConfig",
    "Method",
    "MonitorReport",
    "TrajectoryRecord",
    "evolve",
    "evolve_unitary",
]
