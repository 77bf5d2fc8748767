"""Scenario documents: JSON in, validated ``ScenarioConfig`` out.

Complex numbers are written as ``[re, im]`` pairs; plain numbers are read
as real. Every problem found is reported, not just the first one.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Any

import numpy as np

from sea_dyn.errors import ConfigError, DomainError
from sea_dyn.modules.evolution_engine import IntegratorConfig
from sea_dyn.modules.hamiltonian_models import MODEL_KINDS, CustomTable, HamiltonianModel
from sea_dyn.modules.operator_algebra import pure_state
from sea_dyn.modules.scenario_cli.presets import preset_document

PSI0_NORM_TOL = 1e-6
TOP_LEVEL_KEYS = {"name", "model", "psi0", "lambda", "gamma", "t_span", "integrator", "output",
                  "compare_unitary", "stop"}
REQUIRED_KEYS = ("model", "psi0", "gamma", "t_span")
INTEGRATOR_KEYS = {f.name for f in fields(IntegratorConfig)}


@dataclass(frozen=True)
class OutputConfig:
    path: str = "trajectory.csv"
    stride: int = 1


@dataclass(frozen=True)
class StopConfig:
    """End the run early once |rho01| in the energy eigenbasis drops below the threshold."""

    abs_rho01_below: float


@dataclass(frozen=True)
class ScenarioConfig:
    model: HamiltonianModel
    psi0: tuple[complex, ...]
    lam: float
    gamma: float
    t_span: tuple[float, float]
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    compare_unitary: bool = False
    stop: StopConfig | None = None
    name: str | None = None

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def psi0_vector(self) -> np.ndarray:
        return np.array(self.psi0, dtype=complex)

    def initial_state(self) -> np.ndarray:
        """(1 - lambda)|psi0><psi0| + (lambda/dim) I."""
        return (1.0 - self.lam) * pure_state(self.psi0_vector) + (self.lam / self.dim) * np.eye(self.dim)

    def with_output(self, path: str) -> "ScenarioConfig":
        return replace(self, output=replace(self.output, path=str(path)))

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {}
        if self.name is not None:
            doc["name"] = self.name
        doc.update({
            "model": {"kind": self.model.kind, **self.model.params()},
            "psi0": [[z.real, z.imag] for z in self.psi0],
            "lambda": self.lam,
            "gamma": self.gamma,
            "t_span": list(self.t_span),
            "integrator": self.integrator.to_dict(),
            "output": {"path": self.output.path, "stride": self.output.stride},
            "compare_unitary": self.compare_unitary,
        })
        if self.stop is not None:
            doc["stop"] = {"abs_rho01_below": self.stop.abs_rho01_below}
        return doc


def serialize(cfg: ScenarioConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _complex(value: Any) -> complex:
    if _is_number(value):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(_is_number(v) for v in value):
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"expected a number or [re, im], got {value!r}")


def _model(doc: Any, diagnostics: list[str]) -> HamiltonianModel | None:
    if not isinstance(doc, dict):
        diagnostics.append("model: expected an object with a 'kind' field")
        return None
    params = dict(doc)
    kind = params.pop("kind", None)
    cls = MODEL_KINDS.get(kind)
    if cls is None:
        diagnostics.append(f"model.kind: unknown kind {kind!r}, expected one of {sorted(MODEL_KINDS)}")
        return None
    allowed = {f.name for f in fields(cls)}
    for key in sorted(set(params) - allowed):
        diagnostics.append(f"model.{key}: unknown parameter for {kind}")
    for key in sorted(allowed - set(params)):
        diagnostics.append(f"model.{key}: required for {kind}")
    if set(params) != allowed:
        return None
    try:
        if cls is CustomTable:
            matrices = [np.array([[_complex(z) for z in row] for row in m], dtype=complex)
                        for m in params["matrices"]]
            return CustomTable(times=tuple(params["times"]), matrices=tuple(matrices))
        for key, value in params.items():
            if key == "levels":
                if not (isinstance(value, list) and all(_is_number(v) for v in value)):
                    raise ValueError("levels must be a list of numbers")
            elif not _is_number(value):
                raise ValueError(f"{key} must be a number, got {value!r}")
        if "levels" in params:
            params["levels"] = tuple(params["levels"])
        return cls(**params)
    except (ValueError, TypeError) as exc:
        diagnostics.append(f"model: {exc}")
        return None


def _psi0(value: Any, model: HamiltonianModel | None, diagnostics: list[str]) -> tuple[complex, ...] | None:
    if not isinstance(value, list) or not value:
        diagnostics.append("psi0: expected a non-empty list of amplitudes")
        return None
    try:
        amplitudes = np.array([_complex(v) for v in value], dtype=complex)
    except ValueError as exc:
        diagnostics.append(f"psi0: {exc}")
        return None
    if model is not None and len(amplitudes) != model.dim:
        diagnostics.append(f"psi0: length {len(amplitudes)} does not match model dimension {model.dim}")
        return None
    norm = float(np.linalg.norm(amplitudes))
    if abs(norm - 1.0) > PSI0_NORM_TOL:
        diagnostics.append(f"psi0: norm {norm:.6g} differs from 1 by more than {PSI0_NORM_TOL:g}")
        return None
    if abs(norm - 1.0) > 1e-14:
        amplitudes = amplitudes / norm
    return tuple(complex(z) for z in amplitudes)


def _integrator(value: Any, diagnostics: list[str]) -> IntegratorConfig | None:
    if value is None:
        return IntegratorConfig()
    if not isinstance(value, dict):
        diagnostics.append("integrator: expected an object")
        return None
    unknown = sorted(set(value) - INTEGRATOR_KEYS)
    if unknown:
        diagnostics.extend(f"integrator.{key}: unknown key" for key in unknown)
        return None
    try:
        return IntegratorConfig(**value)
    except ConfigError as exc:
        diagnostics.extend(exc.diagnostics)
    except TypeError as exc:
        diagnostics.append(f"integrator: {exc}")
    return None


def _output(value: Any, diagnostics: list[str]) -> OutputConfig | None:
    if value is None:
        return OutputConfig()
    if not isinstance(value, dict):
        diagnostics.append("output: expected an object")
        return None
    problems = [f"output.{key}: unknown key" for key in sorted(set(value) - {"path", "stride"})]
    path = value.get("path", OutputConfig.path)
    stride = value.get("stride", OutputConfig.stride)
    if not isinstance(path, str) or not path:
        problems.append("output.path: expected a non-empty string")
    if not isinstance(stride, int) or isinstance(stride, bool) or stride < 1:
        problems.append(f"output.stride: expected an integer >= 1, got {stride!r}")
    if problems:
        diagnostics.extend(problems)
        return None
    return OutputConfig(path=path, stride=stride)


def _stop(value: Any, diagnostics: list[str]) -> StopConfig | None:
    if value is None:
        return None
    if not isinstance(value, dict) or set(value) != {"abs_rho01_below"}:
        diagnostics.append("stop: expected {\"abs_rho01_below\": <positive number>}")
        return None
    threshold = value["abs_rho01_below"]
    if not _is_number(threshold) or not threshold > 0:
        diagnostics.append(f"stop.abs_rho01_below: expected a positive number, got {threshold!r}")
        return None
    return StopConfig(abs_rho01_below=float(threshold))


def from_dict(doc: dict[str, Any]) -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ConfigError(["document: expected an object or a preset id"])
    diagnostics: list[str] = []
    diagnostics.extend(f"{key}: unknown key" for key in sorted(set(doc) - TOP_LEVEL_KEYS))
    diagnostics.extend(f"{key}: required" for key in REQUIRED_KEYS if key not in doc)

    model = _model(doc["model"], diagnostics) if "model" in doc else None
    psi0 = _psi0(doc["psi0"], model, diagnostics) if "psi0" in doc else None

    lam = doc.get("lambda", 0.0)
    if not _is_number(lam) or not 0.0 <= lam < 1.0:
        diagnostics.append(f"lambda: expected a number in [0, 1), got {lam!r}")
    gamma = doc.get("gamma")
    if "gamma" in doc and (not _is_number(gamma) or not math.isfinite(gamma) or gamma < 0):
        diagnostics.append(f"gamma: expected a finite number >= 0, got {gamma!r}")

    t_span = doc.get("t_span")
    if "t_span" in doc:
        if not (isinstance(t_span, list) and len(t_span) == 2 and all(_is_number(v) for v in t_span)
                and t_span[1] > t_span[0]):
            diagnostics.append(f"t_span: expected [t0, t1] with t1 > t0, got {t_span!r}")
        elif model is not None:
            for t in t_span:
                try:
                    model.check_time(float(t))
                except DomainError as exc:
                    diagnostics.append(f"t_span: {exc}")

    integrator = _integrator(doc.get("integrator"), diagnostics)
    output = _output(doc.get("output"), diagnostics)
    stop = _stop(doc.get("stop"), diagnostics)
    compare_unitary = doc.get("compare_unitary", False)
    if not isinstance(compare_unitary, bool):
        diagnostics.append(f"compare_unitary: expected true or false, got {compare_unitary!r}")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        diagnostics.append("name: expected a string")

    if diagnostics:
        raise ConfigError(diagnostics)
    return ScenarioConfig(
        model=model,
        psi0=psi0,
        lam=float(lam),
        gamma=float(gamma),
        t_span=(float(t_span[0]), float(t_span[1])),
        integrator=integrator,
        output=output,
        compare_unitary=compare_unitary,
        stop=stop,
        name=name,
    )


def merge(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Nested-dict merge; override leaves replace base leaves."""
    merged = copy.deepcopy(base)
    for key, value in overrides.items():
        # a model override naming its kind replaces the whole model
        new_model = key == "model" and isinstance(value, dict) and "kind" in value
        if isinstance(value, dict) and isinstance(merged.get(key), dict) and not new_model:
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def resolve_document(doc: Any) -> dict[str, Any]:
    """Expand preset references: ``"fig4"`` or ``{"preset": "fig4", ...overrides}``."""
    if isinstance(doc, str):
        return preset_document(doc)
    if isinstance(doc, dict) and "preset" in doc:
        overrides = {k: v for k, v in doc.items() if k != "preset"}
        return merge(preset_document(doc["preset"]), overrides)
    return doc


def parse_document(doc: Any) -> ScenarioConfig:
    return from_dict(resolve_document(doc))


def parse_config(text: str) -> ScenarioConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"document: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"])
    return parse_document(doc)


def set_path(doc: dict[str, Any], param_path: str, value: float) -> dict[str, Any]:
    """Copy of ``doc`` with the numeric scalar at dotted ``param_path`` replaced."""
    keys = param_path.split(".")
    updated = copy.deepcopy(doc)
    node = updated
    for key in keys[:-1]:
        if not isinstance(node, dict) or not isinstance(node.get(key), dict):
            raise ConfigError([f"{param_path}: not a path into the scenario document"])
        node = node[key]
    leaf = keys[-1]
    if not isinstance(node, dict) or leaf not in node:
        raise ConfigError([f"{param_path}: not a path into the scenario document"])
    if not _is_number(node[leaf]):
        raise ConfigError([f"{param_path}: addresses {node[leaf]!r}, not a numeric scalar"])
    node[leaf] = value
    return updated


def preset_config(preset_id: str) -> ScenarioConfig:
    return from_dict(preset_document(preset_id))
