"""
Scenario module: configs, presets, runs, sweeps and the verify suite
"""
from sea_dyn.modules.scenario_cli.config import (
    OutputConfig,
    ScenarioConfig,
    StopConfig,
    from_dict,
    parse_config,
    parse_document,
    preset_config,
    serialize,
    set_path,
)
from sea_dyn.modules.scenario_cli.presets import PresetId, preset_document, preset_ids
from sea_dyn.modules.scenario_cli.runner import RunResult, run_scenario
from sea_dyn.modules.scenario_cli.sweep import run_sweep
from sea_dyn.modules.scenario_cli.verify import CheckResult, run_verify

__all__ = [
    "CheckResult",
    "OutputConfig",
    "PresetId",
    "RunResult",
    "ScenarioConfig",
    "StopConfig",
    "from_dict",
    "parse_config",
    "parse_document",
    "preset_config",
    "preset_document",
    "preset_ids",
    "run_scenario",
    "run_sweep",
    "run_verify",
    "serialize",
    "set_path",
]
