"""Parameter sweeps over one numeric scalar of a scenario document."""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

import pandas as pd

from sea_dyn.errors import IntegrationAbort
from sea_dyn.modules.scenario_cli.config import ScenarioConfig, from_dict, set_path
from sea_dyn.modules.scenario_cli.presets import COHERENCE_THRESHOLD
from sea_dyn.modules.scenario_cli.runner import run_scenario, write_csv

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = [
    "value", "status", "final_t", "p1", "p0", "abs_rho01", "entropy", "energy", "fidelity",
    "threshold_time", "beta_eff", "max_fidelity_deviation", "csv",
]


def max_workers() -> int:
    return int(os.environ.get("SEA_DYN_MAX_WORKERS", os.cpu_count() or 1))


def threshold_time(frame: pd.DataFrame, threshold: float) -> float:
    """First recorded time with |rho01| below ``threshold``; NaN if never reached."""
    below = frame.loc[frame["abs_rho01"] < threshold, "t"]
    return float(below.iloc[0]) if len(below) else math.nan


def _run_member(value: float, doc: dict[str, Any]) -> dict[str, Any]:
    cfg = from_dict(doc)
    try:
        result = run_scenario(cfg)
    except IntegrationAbort as exc:
        logger.error(f"sweep member {value!r} aborted: {exc}")
        return {"value": value, "status": "aborted", "final_t": exc.t, "csv": cfg.output.path}
    row = result.final_row
    frame = result.record.to_frame()
    threshold = cfg.stop.abs_rho01_below if cfg.stop else COHERENCE_THRESHOLD
    reached = result.record.stop_time if result.record.stop_time is not None else threshold_time(frame, threshold)
    logger.info(f"sweep member {value!r} finished at t={result.record.final_time:g}")
    return {
        "value": value,
        "status": "completed",
        "final_t": result.record.final_time,
        "p1": row.p1,
        "p0": row.p0,
        "abs_rho01": row.abs_rho01,
        "entropy": row.entropy,
        "energy": row.energy,
        "fidelity": row.fidelity,
        "threshold_time": reached,
        "beta_eff": result.beta_eff,
        "max_fidelity_deviation": result.max_fidelity_deviation,
        "csv": cfg.output.path,
    }


def member_documents(base: ScenarioConfig, param_path: str, values: Sequence[float],
                     out_dir: Path | None = None) -> list[dict[str, Any]]:
    base_doc = base.to_dict()
    base_path = Path(base.output.path)
    directory = out_dir if out_dir is not None else base_path.parent
    docs = []
    for i, value in enumerate(values):
        doc = set_path(base_doc, param_path, value)
        doc["output"]["path"] = str(directory / f"{base_path.stem}_{i:03d}.csv")
        from_dict(doc)
        docs.append(doc)
    return docs


def run_sweep(base: ScenarioConfig, param_path: str, values: Sequence[float],
              out_dir: Path | None = None, workers: int | None = None) -> pd.DataFrame:
    """One run per value; the summary is ordered by ``values`` whatever the completion order."""
    docs = member_documents(base, param_path, values, out_dir)
    workers = max(1, min(workers or max_workers(), len(docs) or 1))
    logger.info(f"sweeping {param_path} over {len(docs)} value(s) with {workers} worker(s)")

    if workers == 1:
        rows = [_run_member(v, d) for v, d in zip(values, docs)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_member, v, d) for v, d in zip(values, docs)]
            rows = [f.result() for f in futures]

    summary = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    base_path = Path(base.output.path)
    directory = out_dir if out_dir is not None else base_path.parent
    write_csv(summary, directory / f"{base_path.stem}_sweep.csv")
    return summary
