"""Right-hand side of the steepest-entropy-ascent master equation.

    drho/dt = -i[H, rho] - gamma (rho ln rho - mu rho + nu {rho, H})

with hbar = 1. mu and nu are the Lagrange-type coefficients that keep
tr(rho) and tr(rho H) fixed; both are built from ``rho ln rho`` so that
rank-deficient states never need a bare logarithm. ``generator_via_gram``
rebuilds the same dissipator from the Gram-determinant projection and is
kept as an independent cross-check.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from sea_dyn.errors import DimensionMismatchError, OracleRefusal
from sea_dyn.modules.operator_algebra import (
    check_hermitian,
    commutator,
    eig_hermitian,
    hermitize,
    max_norm,
    real_scalar_product,
    rho_log_rho,
    xlogx_operator,
)
from sea_dyn.modules.operator_algebra.linalg import NEGATIVE_EIG_TOL

logger = logging.getLogger(__name__)

DEGENERATE_VARIANCE_RTOL = 1e-12
GRAM_RANK_RTOL = 1e-14


@dataclass(frozen=True)
class SeaCoefficients:
    """Scalar functionals of the state entering the dissipator.

    ``s`` is tr(rho ln rho), the negative of the von Neumann entropy.
    On the degenerate branch ``mu`` equals ``s`` and ``nu`` is zero.
    """

    s: float
    mu: float
    nu: float
    sigma2: float
    mean_H: float
    mean_H2: float
    mean_logrho_H: float
    degenerate: bool = False


@dataclass(frozen=True)
class GeneratorOutput:
    rhs: np.ndarray
    unitary_part: np.ndarray
    dissipator_part: np.ndarray
    coeffs: SeaCoefficients
    degenerate_constraint_flag: bool


def is_degenerate_variance(sigma2: float, mean_H2: float) -> bool:
    return sigma2 < DEGENERATE_VARIANCE_RTOL * max(1.0, mean_H2)


def _coefficients(rho: np.ndarray, H: np.ndarray, g: np.ndarray) -> SeaCoefficients:
    s = float(np.real(np.trace(g)))
    mean_H = float(np.real(np.trace(rho @ H)))
    mean_H2 = float(np.real(np.trace(rho @ H @ H)))
    mean_logrho_H = float(np.real(np.trace(g @ H)))
    shifted = H - mean_H * np.eye(H.shape[0])
    sigma2 = float(np.real(np.trace(rho @ shifted @ shifted)))

    if is_degenerate_variance(sigma2, mean_H2):
        return SeaCoefficients(s, s, 0.0, sigma2, mean_H, mean_H2, mean_logrho_H, degenerate=True)

    mu = (s * mean_H2 - mean_H * mean_logrho_H) / sigma2
    nu = (s * mean_H - mean_logrho_H) / (2.0 * sigma2)
    return SeaCoefficients(s, mu, nu, sigma2, mean_H, mean_H2, mean_logrho_H)


def sea_coefficients(rho: np.ndarray, H: np.ndarray,
                     negative_tol: float = NEGATIVE_EIG_TOL) -> SeaCoefficients:
    rho = check_hermitian(rho)
    H = check_hermitian(H)
    return _coefficients(rho, H, rho_log_rho(rho, negative_tol))


def _dissipator_terms(rho: np.ndarray, H: np.ndarray, gamma: float,
                      negative_tol: float) -> tuple[np.ndarray, SeaCoefficients]:
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    g = xlogx_operator(rho, negative_tol)
    coeffs = _coefficients(rho, H, g)
    if coeffs.degenerate:
        # only normalisation is constrained; rho stays inside its energy eigenspace
        d = -gamma * (g - coeffs.s * rho)
    else:
        d = -gamma * (g - coeffs.mu * rho + coeffs.nu * (rho @ H + H @ rho))
    return hermitize(d), coeffs


def dissipator(rho: np.ndarray, H: np.ndarray, gamma: float,
               negative_tol: float = NEGATIVE_EIG_TOL) -> np.ndarray:
    rho = check_hermitian(rho)
    H = check_hermitian(H)
    if rho.shape != H.shape:
        raise DimensionMismatchError(rho.shape, H.shape)
    d, _ = _dissipator_terms(rho, H, gamma, negative_tol)
    return d


def dissipator_unchecked(rho: np.ndarray, H: np.ndarray, gamma: float,
                         negative_tol: float = NEGATIVE_EIG_TOL) -> np.ndarray:
    """``dissipator`` for callers that guarantee Hermitian complex arrays of equal shape."""
    d, _ = _dissipator_terms(rho, H, gamma, negative_tol)
    return d


def master_rhs(rho: np.ndarray, H_t: np.ndarray, gamma: float,
               negative_tol: float = NEGATIVE_EIG_TOL) -> GeneratorOutput:
    """Evaluate the full generator at the instantaneous Hamiltonian ``H_t``."""
    rho = check_hermitian(rho)
    H_t = check_hermitian(H_t)
    unitary = hermitize(-1j * commutator(H_t, rho))
    if gamma == 0.0:
        d = np.zeros_like(rho)
        coeffs = _coefficients(rho, H_t, rho_log_rho(rho, negative_tol))
    else:
        d, coeffs = _dissipator_terms(rho, H_t, gamma, negative_tol)
    return GeneratorOutput(
        rhs=unitary + d,
        unitary_part=unitary,
        dissipator_part=d,
        coeffs=coeffs,
        degenerate_constraint_flag=coeffs.degenerate,
    )


def generator_via_gram(rho: np.ndarray, H: np.ndarray, gamma: float) -> np.ndarray:
    """Dissipator from the Gram-determinant projection of the entropy gradient.

    E = det[[-ln rho, I, H], [-(ln rho|I), (I|I), (I|H)], [-(ln rho|H), (H|I), (H|H)]]
        / det[[(I|I), (I|H)], [(H|I), (H|H)]]
    with (X|Y) the real scalar product weighted by sqrt(rho); the result is
    gamma/2 (rho E + E^dagger rho).
    """
    rho = check_hermitian(rho)
    H = check_hermitian(H)
    dim = rho.shape[0]
    eig = eig_hermitian(rho)
    rank = int(np.sum(eig.values > GRAM_RANK_RTOL * max(1.0, float(eig.values[-1]))))
    if rank < dim:
        raise OracleRefusal(
            f"Gram construction needs full rank: rank {rank} of {dim}, "
            f"smallest eigenvalue {eig.values[0]:.3e}", rank=rank, dim=dim,
        )

    vecs = eig.vectors
    log_rho = (vecs * np.log(eig.values)) @ vecs.conj().T
    sqrt_rho = (vecs * np.sqrt(eig.values)) @ vecs.conj().T
    identity = np.eye(dim, dtype=complex)

    def weighted(x: np.ndarray, y: np.ndarray) -> float:
        return real_scalar_product(sqrt_rho @ x, sqrt_rho @ y)

    gram = np.array([
        [weighted(identity, identity), weighted(identity, H)],
        [weighted(H, identity), weighted(H, H)],
    ])
    denominator = float(np.linalg.det(gram))
    if is_degenerate_variance(denominator, gram[1, 1]):
        raise OracleRefusal(f"energy variance {denominator:.3e} is degenerate")

    lower_rows = np.array([
        [-weighted(log_rho, identity), gram[0, 0], gram[0, 1]],
        [-weighted(log_rho, H), gram[1, 0], gram[1, 1]],
    ])
    minors = [float(np.linalg.det(np.delete(lower_rows, j, axis=1))) for j in range(3)]
    e = (-log_rho * minors[0] - identity * minors[1] + H * minors[2]) / denominator
    return hermitize(0.5 * gamma * (rho @ e + e.conj().T @ rho))


def rescaling_residual(rho: np.ndarray, H: np.ndarray, sigma: float, gamma: float) -> float:
    """max|D(rho; sigma H) - D(rho; H)|, zero up to rounding for any sigma > 0."""
    if sigma <= 0:
        raise ValueError(f"rescaling factor must be positive, got {sigma}")
    reference = dissipator(rho, H, gamma)
    scaled = dissipator(rho, sigma * np.asarray(H, dtype=complex), gamma)
    residual = max_norm(scaled - reference)
    logger.debug(f"rescaling sigma={sigma:g}: residual {residual:.3e} vs |D| {max_norm(reference):.3e}")
    return residual
