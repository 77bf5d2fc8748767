"""Adiabaticity diagnostics in the instantaneous eigenbasis.

The coefficient ODE tracks the amplitudes a_n of a pure state expanded as
sum_n a_n exp(-i Phi_n) |phi_n(t)>, with Phi_n = int eps_n ds:

    da_n/dt = -a_n <phi_n|d phi_n>
              + sum_{k != n} a_k exp(-i (Phi_k - Phi_n)) <phi_n|dH|phi_k> / (eps_n - eps_k)

Only the moduli |a_n| are meaningful across gauges; the phase convention
of the eigenvectors is the one of ``instantaneous_eigensystem``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from sea_dyn.errors import DegenerateSpectrumError
from sea_dyn.modules.hamiltonian_models.hamiltonians import HamiltonianModel, instantaneous_eigensystem
from sea_dyn.modules.operator_algebra import EigenSystem

logger = logging.getLogger(__name__)

DEGENERATE_GAP_RTOL = 1e-12
BERRY_FD_STEP = 1e-5


@dataclass(frozen=True)
class AdiabaticCoefficients:
    amplitudes: np.ndarray
    phases: np.ndarray

    @classmethod
    def from_state(cls, model: HamiltonianModel, t: float, psi: np.ndarray) -> "AdiabaticCoefficients":
        eig = instantaneous_eigensystem(model, t)
        amplitudes = eig.vectors.conj().T @ np.asarray(psi, dtype=complex)
        return cls(amplitudes=amplitudes, phases=np.zeros(len(amplitudes)))

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class AdiabaticDiagnostics:
    metric_per_pair: dict[tuple[int, int], float]
    max_metric: float
    coeffs: AdiabaticCoefficients | None = field(default=None)


def _check_gaps(eig: EigenSystem, t: float) -> np.ndarray:
    gaps = np.diff(eig.values)
    scale = max(1.0, float(np.max(np.abs(eig.values))))
    if len(gaps) and float(gaps.min()) < DEGENERATE_GAP_RTOL * scale:
        raise DegenerateSpectrumError(t, float(gaps.min()))
    return gaps


def _coupling(model: HamiltonianModel, eig: EigenSystem, t: float) -> np.ndarray:
    return eig.vectors.conj().T @ model.derivative(t) @ eig.vectors


def adiabaticity_metric(model: HamiltonianModel, t: float, eig: EigenSystem | None = None) -> AdiabaticDiagnostics:
    """|<phi_n|dH|phi_m>| / (eps_n - eps_m)^2 for every ordered pair n != m.

    ``eig`` is the instantaneous eigensystem at ``t`` when the caller already holds it.
    """
    if eig is None:
        eig = instantaneous_eigensystem(model, t)
    _check_gaps(eig, t)
    coupling = _coupling(model, eig, t)
    metrics: dict[tuple[int, int], float] = {}
    for n in range(eig.dim):
        for m in range(eig.dim):
            if n != m:
                metrics[(n, m)] = float(abs(coupling[n, m]) / (eig.values[n] - eig.values[m]) ** 2)
    return AdiabaticDiagnostics(metric_per_pair=metrics, max_metric=max(metrics.values(), default=0.0))


def _berry_connection(model: HamiltonianModel, t: float, eig: EigenSystem) -> np.ndarray:
    """<phi_n|d phi_n/dt> by finite differences; purely imaginary by construction."""
    lo, hi = model.domain
    h = BERRY_FD_STEP * max(1.0, abs(t))
    t_minus, t_plus = max(t - h, lo), min(t + h, hi)
    before = instantaneous_eigensystem(model, t_minus).vectors
    after = instantaneous_eigensystem(model, t_plus).vectors
    overlap_after = np.einsum("ij,ij->j", eig.vectors.conj(), after)
    overlap_before = np.einsum("ij,ij->j", eig.vectors.conj(), before)
    return 1j * np.imag(overlap_after - overlap_before) / (t_plus - t_minus)


def _coefficient_rhs(model: HamiltonianModel, t: float, amplitudes: np.ndarray,
                     phases: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    eig = instantaneous_eigensystem(model, t)
    _check_gaps(eig, t)
    coupling = _coupling(model, eig, t)
    gaps = eig.values[:, None] - eig.values[None, :]
    np.fill_diagonal(gaps, 1.0)
    transfer = coupling / gaps * np.exp(-1j * (phases[None, :] - phases[:, None]))
    np.fill_diagonal(transfer, -_berry_connection(model, t, eig))
    return transfer @ amplitudes, eig.values


def adiabatic_coefficient_step(model: HamiltonianModel, t: float, coeffs: AdiabaticCoefficients,
                               dt: float) -> AdiabaticCoefficients:
    """One classical RK4 step of the coefficient ODE, phases integrated alongside."""
    a, phi = coeffs.amplitudes, coeffs.phases
    k1a, k1p = _coefficient_rhs(model, t, a, phi)
    k2a, k2p = _coefficient_rhs(model, t + dt / 2, a + dt / 2 * k1a, phi + dt / 2 * k1p)
    k3a, k3p = _coefficient_rhs(model, t + dt / 2, a + dt / 2 * k2a, phi + dt / 2 * k2p)
    k4a, k4p = _coefficient_rhs(model, t + dt, a + dt * k3a, phi + dt * k3p)
    return AdiabaticCoefficients(
        amplitudes=a + dt / 6 * (k1a + 2 * k2a + 2 * k3a + k4a),
        phases=phi + dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p),
    )


def integrate_coefficients(model: HamiltonianModel, coeffs: AdiabaticCoefficients, t0: float,
                           t1: float, dt: float) -> AdiabaticCoefficients:
    steps = max(1, int(round((t1 - t0) / dt)))
    h = (t1 - t0) / steps
    t = t0
    for _ in range(steps):
        coeffs = adiabatic_coefficient_step(model, t, coeffs, h)
        t += h
    logger.debug(f"coefficient ODE {t0:g} -> {t1:g} in {steps} steps, norm {coeffs.norm:.12f}")
    return coeffs
