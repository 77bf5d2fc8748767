"""Canonical states, effective temperature and stationarity residuals."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from sea_dyn.errors import ThermoError
from sea_dyn.modules.operator_algebra import check_hermitian, commutator, eig_hermitian, hermitize, max_norm
from sea_dyn.modules.sea_dissipator import master_rhs

logger = logging.getLogger(__name__)

MAX_EXPONENT = 700.0
PROJECTOR_TOL = 1e-10
BETA_ENERGY_RTOL = 1e-10


@dataclass(frozen=True)
class CanonicalState:
    beta: float
    omega: np.ndarray
    rank_deficient: bool = False


def _boltzmann_weights(values: np.ndarray, beta: float) -> np.ndarray:
    spread = float(values[-1] - values[0])
    if not math.isfinite(beta):
        raise ThermoError(f"beta must be finite, got {beta}")
    if abs(beta) * spread > MAX_EXPONENT:
        raise ThermoError(f"|beta| * spread = {abs(beta) * spread:.1f} exceeds {MAX_EXPONENT:g}")
    # shift so every exponent is <= 0
    shift = values[0] if beta >= 0 else values[-1]
    return np.exp(-beta * (values - shift))


def canonical_state(H: np.ndarray, beta: float) -> CanonicalState:
    """omega(beta) = exp(-beta H) / tr exp(-beta H); beta of either sign."""
    eig = eig_hermitian(H)
    weights = _boltzmann_weights(eig.values, beta)
    omega = (eig.vectors * (weights / weights.sum())) @ eig.vectors.conj().T
    return CanonicalState(beta=float(beta), omega=hermitize(omega))


def restricted_canonical(H: np.ndarray, projector: np.ndarray, beta: float) -> CanonicalState:
    """P exp(-beta H) / tr(P exp(-beta H)) for a projector commuting with H."""
    H = check_hermitian(H)
    P = check_hermitian(projector)
    if max_norm(P @ P - P) > PROJECTOR_TOL:
        raise ThermoError("projector is not idempotent")
    if max_norm(commutator(H, P)) > PROJECTOR_TOL:
        raise ThermoError(f"projector does not commute with H: |[H, P]| = {max_norm(commutator(H, P)):.3e}")
    eig = eig_hermitian(H)
    weights = _boltzmann_weights(eig.values, beta)
    boltzmann = (eig.vectors * weights) @ eig.vectors.conj().T
    restricted = hermitize(P @ boltzmann @ P)
    norm = float(np.real(np.trace(restricted)))
    if norm <= 0.0:
        raise ThermoError("tr(P exp(-beta H)) vanishes")
    rank = int(round(float(np.real(np.trace(P)))))
    return CanonicalState(beta=float(beta), omega=restricted / norm, rank_deficient=rank < H.shape[0])


def thermal_energy(values: np.ndarray, beta: float) -> float:
    weights = _boltzmann_weights(values, beta)
    return float(np.dot(values, weights) / weights.sum())


def effective_beta(H: np.ndarray, U: float) -> float:
    """Inverse temperature of the canonical state with mean energy U."""
    values = eig_hermitian(H).values
    e_min, e_max = float(values[0]), float(values[-1])
    spread = e_max - e_min
    if not e_min < U < e_max:
        raise ThermoError(f"energy {U:.12g} is outside the open interval ({e_min:.12g}, {e_max:.12g})")

    def residual(beta: float) -> float:
        return thermal_energy(values, beta) - U

    if abs(residual(0.0)) <= BETA_ENERGY_RTOL * spread:
        return 0.0

    # <H> decreases with beta: below the beta=0 mean the root is positive
    sign = 1.0 if residual(0.0) > 0 else -1.0
    bound = 1.0 / spread
    while sign * residual(sign * bound) > 0:
        bound *= 2.0
        if bound * spread > MAX_EXPONENT:
            raise ThermoError(f"energy {U:.12g} too close to the spectral edge for a finite beta")
    lo, hi = sorted((0.0, sign * bound))
    beta = float(bisect(residual, lo, hi, xtol=1e-13 / spread, maxiter=500))

    if len(values) == 2:
        p1 = (U - e_min) / spread
        closed = math.log((1.0 - p1) / p1) / spread
        if abs(closed - beta) > 1e-8 * max(1.0, abs(beta)):
            logger.warning(f"bisection beta {beta:.12g} disagrees with two-level closed form {closed:.12g}")
    return beta


def stationarity_residual(rho: np.ndarray, H: np.ndarray, gamma: float) -> float:
    return max_norm(master_rhs(rho, H, gamma).rhs)
