"""Runge-Kutta integration of the SEA master equation.

Every accepted step is followed by structure restoration: Hermitization,
pinning of the null space inherited from the initial state, and clamping
of tiny negative eigenvalues with trace compensation. Nothing else touches
the trace.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
import pandas as pd
import scipy.linalg as la
from scipy.integrate import RK45

from sea_dyn.errors import ConfigError, IntegrationAbort, InvariantViolation
from sea_dyn.modules.hamiltonian_models import HamiltonianModel
from sea_dyn.modules.observables_thermo import CSV_COLUMNS, ObservableRow, observables
from sea_dyn.modules.operator_algebra import check_density_matrix, hermitize, max_norm
from sea_dyn.modules.sea_dissipator import dissipator_unchecked

logger = logging.getLogger(__name__)

CLAMP_TOL = 1e-9
POSITIVITY_ABORT_TOL = 1e-6
STIFF_EIG_THRESHOLD = 1e-10
STIFF_DT_FACTOR = 0.1
ENTROPY_DIP_TOL = 1e-9
STEP_HISTORY = 20

# Dormand-Prince 5(4) coefficients, shared with scipy's RK45
_A, _B, _C, _E = RK45.A, RK45.B, RK45.C, RK45.E
_N_STAGES = RK45.n_stages
_ERROR_EXPONENT = -1.0 / (RK45.error_estimator_order + 1)
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0

StopCondition = Callable[[float, np.ndarray], bool]


class Method(str, Enum):
    RK4_FIXED = "rk4_fixed"
    RK45_ADAPTIVE = "rk45_adaptive"


@dataclass(frozen=True)
class IntegratorConfig:
    method: Method = Method.RK45_ADAPTIVE
    dt: float = 1e-2
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_dt: float = 1.0
    min_dt: float = 1e-12
    resym_every: int = 1
    rank_tol: float = 1e-12
    max_steps: int = 5_000_000

    def __post_init__(self):
        diagnostics = []
        try:
            object.__setattr__(self, "method", Method(self.method))
        except ValueError:
            diagnostics.append(f"integrator.method: expected one of {[m.value for m in Method]}, got {self.method!r}")
        if not self.dt > 0:
            diagnostics.append(f"integrator.dt: must be positive, got {self.dt}")
        if not 0 < self.min_dt <= self.max_dt:
            diagnostics.append(f"integrator.min_dt/max_dt: need 0 < min_dt <= max_dt, got {self.min_dt}, {self.max_dt}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            diagnostics.append("integrator.rel_tol/abs_tol: tolerances must be positive")
        if self.resym_every < 1:
            diagnostics.append(f"integrator.resym_every: must be >= 1, got {self.resym_every}")
        if not self.rank_tol > 0:
            diagnostics.append(f"integrator.rank_tol: must be positive, got {self.rank_tol}")
        if self.max_steps < 1:
            diagnostics.append(f"integrator.max_steps: must be >= 1, got {self.max_steps}")
        if diagnostics:
            raise ConfigError(diagnostics)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["method"] = self.method.value
        return data


@dataclass
class MonitorReport:
    trace_drift: float = 0.0
    energy_drift: float = 0.0
    min_eigenvalue_seen: float = 0.0
    entropy_dips: int = 0
    clamp_events: int = 0
    max_entropy_dip: float = 0.0
    max_clamp_compensation: float = 0.0
    accepted_steps: int = 0
    rejected_steps: int = 0
    null_dim: int = 0
    energy_monitored: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrajectoryRecord:
    times: list[float] = field(default_factory=list)
    states: list[np.ndarray] = field(default_factory=list)
    observables: list[ObservableRow] = field(default_factory=list)
    final_time: float = math.nan
    final_state: np.ndarray | None = None
    stop_time: float | None = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.as_tuple() for row in self.observables], columns=list(CSV_COLUMNS))


@dataclass
class _Restored:
    rho: np.ndarray
    entropy: float
    min_eig: float
    min_free: float
    adjusted: bool = False


class EvolutionEngine:
    """One engine per run; holds the run's monitors and nothing global."""

    def __init__(self, model: HamiltonianModel, gamma: float, cfg: IntegratorConfig | None = None, *,
                 stride: int = 1, stop_when: StopCondition | None = None, psi0: np.ndarray | None = None):
        if gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {gamma}")
        if stride < 1:
            raise ValueError(f"stride must be >= 1, got {stride}")
        self.model = model
        self.gamma = float(gamma)
        self.cfg = cfg or IntegratorConfig()
        self.stride = stride
        self.stop_when = stop_when
        self.psi0 = psi0
        self.report = MonitorReport(energy_monitored=model.is_static)
        self._history: deque[dict] = deque(maxlen=STEP_HISTORY)
        self._null_dim = 0
        self._t = math.nan

    # -- generator -----------------------------------------------------

    def _project(self, rho: np.ndarray) -> np.ndarray:
        values, vectors = np.linalg.eigh(hermitize(rho))
        trace = values.sum()
        values[: self._null_dim] = 0.0
        values *= trace / values.sum()
        return hermitize((vectors * values) @ vectors.conj().T)

    def _rhs(self, t: float, rho: np.ndarray) -> np.ndarray:
        H = self.model.evaluate(t)
        unitary = hermitize(-1j * (H @ rho - rho @ H))
        if self.gamma == 0.0:
            return unitary
        support = self._project(rho) if self._null_dim else hermitize(rho)
        return unitary + dissipator_unchecked(support, H, self.gamma, negative_tol=POSITIVITY_ABORT_TOL)

    # -- steppers ------------------------------------------------------

    def _rk4_step(self, t: float, rho: np.ndarray, h: float) -> np.ndarray:
        k1 = self._rhs(t, rho)
        k2 = self._rhs(t + 0.5 * h, rho + 0.5 * h * k1)
        k3 = self._rhs(t + 0.5 * h, rho + 0.5 * h * k2)
        k4 = self._rhs(t + h, rho + h * k3)
        return rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    def _rk45_attempt(self, t: float, rho: np.ndarray, h: float,
                      k_first: np.ndarray | None = None) -> tuple[np.ndarray, float, np.ndarray]:
        """One Dormand-Prince attempt; the returned last stage is the next step's first (FSAL)."""
        K = np.empty((_N_STAGES + 1,) + rho.shape, dtype=complex)
        K[0] = self._rhs(t, rho) if k_first is None else k_first
        for s, (a, c) in enumerate(zip(_A[1:], _C[1:]), start=1):
            K[s] = self._rhs(t + c * h, rho + h * np.tensordot(a[:s], K[:s], axes=1))
        rho_new = rho + h * np.tensordot(_B, K[:-1], axes=1)
        K[-1] = self._rhs(t + h, rho_new)
        error = h * np.tensordot(_E, K, axes=1)
        scale = self.cfg.abs_tol + self.cfg.rel_tol * max(max_norm(rho), max_norm(rho_new))
        return rho_new, max_norm(error) / scale, K[-1]

    # -- structure restoration -----------------------------------------

    def _restore(self, rho: np.ndarray, step: int, strict: bool) -> _Restored | None:
        """Pin, clamp and compensate; None asks the caller to retry with a smaller step."""
        if step % self.cfg.resym_every == 0:
            rho = hermitize(rho)
        values, vectors = np.linalg.eigh(hermitize(rho))
        trace = float(values.sum())
        free = values[self._null_dim:]
        lowest = float(free.min())
        if lowest < -POSITIVITY_ABORT_TOL:
            self._abort(f"positivity lost: eigenvalue {lowest:.3e} below -{POSITIVITY_ABORT_TOL:g}")
        if lowest < -CLAMP_TOL:
            if strict:
                return None
            logger.warning(f"t={self._t:.6g}: clamping eigenvalue {lowest:.3e} below -{CLAMP_TOL:g}")

        negative = free < 0.0
        adjusted = bool(self._null_dim or negative.any())
        if adjusted:
            self.report.clamp_events += int(negative.sum())
            restored = values.copy()
            restored[: self._null_dim] = 0.0
            restored[self._null_dim:][negative] = 0.0
            compensation = abs(trace - float(restored.sum()))
            restored *= trace / restored.sum()
            self.report.max_clamp_compensation = max(self.report.max_clamp_compensation, compensation)
            if negative.any():
                logger.debug(f"t={self._t:.6g}: clamped {int(negative.sum())} eigenvalue(s), compensation {compensation:.3e}")
            if compensation > CLAMP_TOL:
                logger.warning(f"t={self._t:.6g}: trace compensation {compensation:.3e} exceeds {CLAMP_TOL:g}")
            values = restored
            rho = hermitize((vectors * values) @ vectors.conj().T)

        positive = values[values > 0.0]
        return _Restored(
            rho=rho,
            adjusted=adjusted,
            entropy=float(-np.sum(positive * np.log(positive))),
            min_eig=min(lowest, 0.0) if self._null_dim else lowest,
            min_free=float(values[self._null_dim:].min()),
        )

    def _abort(self, reason: str) -> None:
        logger.error(f"aborting at t={self._t:.6g}: {reason}")
        raise IntegrationAbort(reason, self._t, list(self._history), monitor=self.report.to_dict())

    # -- driver --------------------------------------------------------

    def _energy(self, rho: np.ndarray, t: float) -> float:
        return float(np.real(np.trace(rho @ self.model.evaluate(t))))

    def run(self, rho0: np.ndarray, t_span: tuple[float, float]) -> tuple[TrajectoryRecord, MonitorReport]:
        t0, t1 = (float(x) for x in t_span)
        if not t1 > t0:
            raise ValueError(f"t_span must be increasing, got ({t0}, {t1})")
        self.model.check_time(t0)
        self.model.check_time(t1)
        rho = check_density_matrix(np.asarray(rho0, dtype=complex))

        values, vectors = la.eigh(rho)
        rank = int(np.sum(values > self.cfg.rank_tol))
        self._null_dim = rho.shape[0] - rank
        self.report.null_dim = self._null_dim
        self.report.min_eigenvalue_seen = float(values[0])
        psi0 = vectors[:, -1] if self.psi0 is None else np.asarray(self.psi0, dtype=complex)

        self._t = t0
        energy0 = self._energy(rho, t0)
        entropy = float(-np.sum(values[values > 0] * np.log(values[values > 0])))
        min_free = float(values[self._null_dim:].min())
        record = TrajectoryRecord()
        self._record(record, t0, rho, psi0)

        logger.info(
            f"evolving {self.model.kind} dim={rho.shape[0]} gamma={self.gamma:g} over [{t0:g}, {t1:g}] "
            f"with {self.cfg.method.value}, null space dim {self._null_dim}"
        )
        adaptive = self.cfg.method is Method.RK45_ADAPTIVE
        n_fixed = max(1, int(round((t1 - t0) / self.cfg.dt)))
        h = min(self.cfg.dt, self.cfg.max_dt) if adaptive else (t1 - t0) / n_fixed
        previous_rejected = False
        k_first = None

        while self._t < t1:
            if self.report.accepted_steps + self.report.rejected_steps >= self.cfg.max_steps:
                self._abort(f"step budget of {self.cfg.max_steps} exhausted")
            t = self._t
            if adaptive:
                h = min(h, self.cfg.max_dt, t1 - t)
                if self.gamma > 0 and min_free < STIFF_EIG_THRESHOLD:
                    h = min(h, STIFF_DT_FACTOR / self.gamma)
                try:
                    rho_new, error_norm, k_last = self._rk45_attempt(t, rho, h, k_first)
                except InvariantViolation:
                    rho_new, error_norm, k_last = rho, math.inf, None
                if not np.all(np.isfinite(rho_new)):
                    self._abort("non-finite state")
                restored = self._restore(rho_new, self.report.accepted_steps + 1, strict=True) \
                    if error_norm <= 1.0 else None
                if restored is None:
                    self.report.rejected_steps += 1
                    factor = 0.5 if error_norm <= 1.0 else max(MIN_FACTOR, SAFETY * error_norm ** _ERROR_EXPONENT)
                    h *= factor
                    previous_rejected = True
                    logger.debug(f"t={t:.6g}: step rejected (error {error_norm:.3e}), retrying with dt={h:.3e}")
                    if h < self.cfg.min_dt:
                        self._abort(f"step size {h:.3e} fell below min_dt {self.cfg.min_dt:g}")
                    continue
                t_new = t1 if t1 - (t + h) <= 1e-12 * max(1.0, abs(t1)) else t + h
                h_used = h
                factor = MAX_FACTOR if error_norm == 0 else min(MAX_FACTOR, SAFETY * error_norm ** _ERROR_EXPONENT)
                if previous_rejected:
                    factor = min(1.0, factor)
                h *= factor
                previous_rejected = False
                k_first = None if restored.adjusted else k_last
            else:
                error_norm = math.nan
                try:
                    rho_new = self._rk4_step(t, rho, h)
                except InvariantViolation as exc:
                    self._abort(str(exc))
                if not np.all(np.isfinite(rho_new)):
                    self._abort("non-finite state")
                restored = self._restore(rho_new, self.report.accepted_steps + 1, strict=False)
                step = self.report.accepted_steps + 1
                t_new = t1 if step == n_fixed else t0 + step * h
                h_used = h

            rho = restored.rho
            min_free = restored.min_free
            self._t = t_new
            self.report.accepted_steps += 1
            self._monitor(rho, restored, entropy, energy0)
            entropy = restored.entropy
            self._history.append({
                "t": t_new, "dt": h_used, "error_norm": error_norm,
                "min_eig": restored.min_eig, "trace": float(np.real(np.trace(rho))),
            })
            if self.report.accepted_steps % self.stride == 0:
                self._record(record, t_new, rho, psi0)
            if self.stop_when is not None and self.stop_when(t_new, rho):
                record.stop_time = t_new
                logger.info(f"stop condition met at t={t_new:.6g}")
                break

        if record.times[-1] != self._t:
            self._record(record, self._t, rho, psi0)
        record.final_time = self._t
        record.final_state = rho
        logger.info(
            f"finished at t={self._t:g} after {self.report.accepted_steps} steps "
            f"({self.report.rejected_steps} rejected), trace drift {self.report.trace_drift:.2e}"
        )
        return record, self.report

    def _monitor(self, rho: np.ndarray, restored: _Restored, entropy_before: float, energy0: float) -> None:
        report = self.report
        report.trace_drift = max(report.trace_drift, abs(float(np.real(np.trace(rho))) - 1.0))
        report.min_eigenvalue_seen = min(report.min_eigenvalue_seen, restored.min_eig)
        if report.energy_monitored:
            report.energy_drift = max(report.energy_drift, abs(self._energy(rho, self._t) - energy0))
        dip = entropy_before - restored.entropy
        if self.gamma > 0 and dip > ENTROPY_DIP_TOL:
            report.entropy_dips += 1
            report.max_entropy_dip = max(report.max_entropy_dip, dip)
            logger.warning(f"t={self._t:.6g}: entropy decreased by {dip:.3e}")

    def _record(self, record: TrajectoryRecord, t: float, rho: np.ndarray, psi0: np.ndarray) -> None:
        record.times.append(t)
        record.states.append(rho.copy())
        record.observables.append(observables(rho, self.model, t, psi0))


def evolve(rho0: np.ndarray, model: HamiltonianModel, gamma: float, t_span: tuple[float, float],
           cfg: IntegratorConfig | None = None, *, stride: int = 1, stop_when: StopCondition | None = None,
           psi0: np.ndarray | None = None) -> tuple[TrajectoryRecord, MonitorReport]:
    """Integrate the SEA master equation from ``rho0`` over ``t_span``.

    ``psi0`` is the fidelity reference; it defaults to the dominant
    eigenvector of ``rho0``.
    """
    engine = EvolutionEngine(model, gamma, cfg, stride=stride, stop_when=stop_when, psi0=psi0)
    return engine.run(rho0, t_span)


def evolve_unitary(rho0: np.ndarray, model: HamiltonianModel, t_span: tuple[float, float],
                   cfg: IntegratorConfig | None = None, *, stride: int = 1,
                   psi0: np.ndarray | None = None) -> TrajectoryRecord:
    record, _ = evolve(rho0, model, 0.0, t_span, cfg, stride=stride, psi0=psi0)
    return record
