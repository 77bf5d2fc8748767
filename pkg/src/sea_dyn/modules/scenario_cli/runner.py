"""Execute one scenario and write its CSV, metadata and comparison files."""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from sea_dyn import __version__
from sea_dyn.errors import IntegrationAbort, ThermoError
from sea_dyn.modules.evolution_engine import MonitorReport, TrajectoryRecord, evolve, evolve_unitary
from sea_dyn.modules.hamiltonian_models import instantaneous_eigensystem
from sea_dyn.modules.observables_thermo import canonical_state, effective_beta
from sea_dyn.modules.operator_algebra import max_norm
from sea_dyn.modules.scenario_cli.config import ScenarioConfig

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


@dataclass
class RunResult:
    config: ScenarioConfig
    record: TrajectoryRecord
    monitor: MonitorReport
    wall_time: float
    beta_eff: float | None = None
    equilibrium_distance: float | None = None
    max_fidelity_deviation: float | None = None
    files: dict[str, str] = field(default_factory=dict)

    @property
    def final_row(self):
        return self.record.observables[-1]


def write_csv(frame: pd.DataFrame, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def companion_paths(csv_path: Path) -> dict[str, Path]:
    stem = csv_path.with_suffix("")
    return {
        "metadata": Path(f"{stem}.meta.json"),
        "unitary": Path(f"{stem}_unitary.csv"),
        "deviation": Path(f"{stem}_deviation.csv"),
    }


def coherence_stop(cfg: ScenarioConfig):
    if cfg.stop is None:
        return None
    threshold = cfg.stop.abs_rho01_below
    model = cfg.model

    def stop(t: float, rho: np.ndarray) -> bool:
        eig = instantaneous_eigensystem(model, t)
        return abs(eig.vectors[:, 0].conj() @ rho @ eig.vectors[:, -1]) < threshold

    return stop


def equilibrium_estimate(cfg: ScenarioConfig, final_state: np.ndarray) -> tuple[float | None, float | None]:
    """beta_eff from the initial energy and the distance of the final state to omega(beta_eff)."""
    if not cfg.model.is_static:
        return None, None
    H = cfg.model.evaluate(cfg.t_span[0])
    energy = float(np.real(np.trace(cfg.initial_state() @ H)))
    try:
        beta = effective_beta(H, energy)
    except ThermoError as exc:
        logger.info(f"no effective temperature: {exc}")
        return None, None
    return beta, max_norm(final_state - canonical_state(H, beta).omega)


def fidelity_deviation(sea: TrajectoryRecord, unitary: TrajectoryRecord) -> pd.DataFrame:
    sea_frame, unitary_frame = sea.to_frame(), unitary.to_frame()
    reference = np.interp(sea_frame["t"], unitary_frame["t"], unitary_frame["fidelity"])
    return pd.DataFrame({
        "t": sea_frame["t"],
        "fidelity_sea": sea_frame["fidelity"],
        "fidelity_unitary": reference,
        "deviation": np.abs(sea_frame["fidelity"] - reference),
    })


def _write_metadata(path: Path, cfg: ScenarioConfig, status: str, monitor: dict, wall_time: float,
                    **extra) -> None:
    metadata = {
        "status": status,
        "version": __version__,
        "config": cfg.to_dict(),
        "monitor": monitor,
        "wall_time_s": wall_time,
        **extra,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(metadata, indent=2) + "\n")


def run_scenario(cfg: ScenarioConfig) -> RunResult:
    """Run one scenario; an ``IntegrationAbort`` is re-raised after its metadata is written."""
    csv_path = Path(cfg.output.path)
    paths = companion_paths(csv_path)
    psi0 = cfg.psi0_vector
    rho0 = cfg.initial_state()
    started = time.perf_counter()
    logger.info(f"running scenario {cfg.name or csv_path.stem}: {cfg.model.kind}, gamma={cfg.gamma:g}, lambda={cfg.lam:g}")

    try:
        record, monitor = evolve(rho0, cfg.model, cfg.gamma, cfg.t_span, cfg.integrator,
                                 stride=cfg.output.stride, stop_when=coherence_stop(cfg), psi0=psi0)
    except IntegrationAbort as exc:
        _write_metadata(paths["metadata"], cfg, "aborted", exc.monitor or {}, time.perf_counter() - started,
                        reason=exc.reason, abort_time=exc.t, step_history=exc.step_history)
        raise

    write_csv(record.to_frame(), csv_path)
    result = RunResult(config=cfg, record=record, monitor=monitor, wall_time=0.0, files={"csv": str(csv_path)})
    result.beta_eff, result.equilibrium_distance = equilibrium_estimate(cfg, record.final_state)

    if cfg.compare_unitary:
        unitary = evolve_unitary(rho0, cfg.model, (cfg.t_span[0], record.final_time), cfg.integrator,
                                 stride=cfg.output.stride, psi0=psi0)
        deviation = fidelity_deviation(record, unitary)
        write_csv(unitary.to_frame(), paths["unitary"])
        write_csv(deviation, paths["deviation"])
        result.max_fidelity_deviation = float(deviation["deviation"].max())
        result.files.update(unitary=str(paths["unitary"]), deviation=str(paths["deviation"]))

    result.wall_time = time.perf_counter() - started
    result.files["metadata"] = str(paths["metadata"])
    _write_metadata(
        paths["metadata"], cfg, "completed", monitor.to_dict(), result.wall_time,
        beta_eff=result.beta_eff,
        equilibrium_distance=result.equilibrium_distance,
        max_fidelity_deviation=result.max_fidelity_deviation,
        rows=len(record.observables),
        final_time=record.final_time,
        stop_time=record.stop_time,
        files=result.files,
    )
    logger.info(f"wrote {', '.join(result.files.values())} in {result.wall_time:.2f}s")
    return result
