"""Dense complex-matrix kernel.

Operators are plain ``numpy.ndarray`` values of shape (dim, dim) and dtype
complex128. Functions never mutate their inputs.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as la

from sea_dyn.errors import DimensionMismatchError, InvariantViolation, NonHermitianError

logger = logging.getLogger(__name__)

HERMITIAN_RTOL = 1e-12
TRACE_TOL = 1e-9
NEGATIVE_EIG_TOL = 1e-9
PHASE_TOL = 1e-12


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order; eigenvectors as columns of ``vectors``."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.values)

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T

    def vector(self, k: int) -> np.ndarray:
        return self.vectors[:, k]


def max_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(a.shape, (a.shape[0], a.shape[0]))
    if not np.all(np.isfinite(a)):
        raise InvariantViolation("matrix has non-finite entries")


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(a.shape, b.shape)


def check_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return ``m`` as complex array, raising when it is not Hermitian."""
    m = np.asarray(m, dtype=complex)
    _check_square(m)
    scale = max_norm(m)
    violation = max_norm(m - m.conj().T)
    if violation > rtol * scale:
        raise NonHermitianError(violation, scale)
    return m


def check_density_matrix(rho: np.ndarray, trace_tol: float = TRACE_TOL,
                         negative_tol: float = NEGATIVE_EIG_TOL) -> np.ndarray:
    rho = check_hermitian(rho)
    trace = float(np.real(np.trace(rho)))
    if abs(trace - 1.0) > trace_tol:
        raise InvariantViolation(f"trace of density matrix is {trace:.12g}, expected 1", trace)
    min_eig = float(la.eigvalsh(hermitize(rho))[0])
    if min_eig < -negative_tol:
        raise InvariantViolation(f"density matrix has eigenvalue {min_eig:.3e} below zero", min_eig)
    return rho


def fix_phase(vectors: np.ndarray, tol: float = PHASE_TOL) -> np.ndarray:
    """Rotate each column so its first non-negligible component is real positive."""
    fixed = np.array(vectors, dtype=complex, copy=True)
    for k in range(fixed.shape[1]):
        column = fixed[:, k]
        idx = int(np.argmax(np.abs(column) > tol * max(np.max(np.abs(column)), 1.0)))
        lead = column[idx]
        if lead != 0:
            fixed[:, k] = column * (abs(lead) / lead)
    return fixed


def eig_hermitian(m: np.ndarray) -> EigenSystem:
    """Ascending eigen-decomposition of a Hermitian matrix.

    Ties keep the order returned by LAPACK; eigenvectors are phase-fixed so
    the first non-negligible component is real and positive.
    """
    m = check_hermitian(m)
    values, vectors = la.eigh(hermitize(m))
    order = np.argsort(values, kind="stable")
    return EigenSystem(values=values[order], vectors=fix_phase(vectors[:, order]))


def matrix_function(m: np.ndarray, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply ``func`` to the spectrum of a Hermitian matrix."""
    eig = eig_hermitian(m)
    return (eig.vectors * func(eig.values)) @ eig.vectors.conj().T


def _xlogx(values: np.ndarray, negative_tol: float) -> np.ndarray:
    lowest = float(values.min())
    if lowest < -negative_tol:
        raise InvariantViolation(
            f"eigenvalue {lowest:.3e} is below -{negative_tol:g}; positivity lost", lowest
        )
    if lowest < 0.0:
        logger.debug(f"clamped {int(np.sum(values < 0))} negative eigenvalue(s), min {lowest:.3e}")
    out = np.zeros_like(values)
    positive = values > 0.0
    out[positive] = values[positive] * np.log(values[positive])
    return out


def xlogx_operator(rho: np.ndarray, negative_tol: float = NEGATIVE_EIG_TOL) -> np.ndarray:
    """Unchecked ``rho ln rho``; ``rho`` must already be a Hermitian complex array."""
    values, vectors = np.linalg.eigh(rho)
    return hermitize((vectors * _xlogx(values, negative_tol)) @ vectors.conj().T)


def rho_log_rho(rho: np.ndarray, negative_tol: float = NEGATIVE_EIG_TOL) -> np.ndarray:
    """``rho ln rho`` with the continuous extension 0 ln 0 = 0.

    Eigenvalues in (-negative_tol, 0] contribute zero.
    """
    return xlogx_operator(hermitize(check_hermitian(rho)), negative_tol)


def real_scalar_product(a: np.ndarray, b: np.ndarray) -> float:
    """(A|B) = tr(A B^dagger + A^dagger B) / 2."""
    _check_same_shape(a, b)
    return float(np.real(np.trace(a @ b.conj().T + a.conj().T @ b)) / 2.0)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same_shape(a, b)
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same_shape(a, b)
    return a @ b + b @ a


def pure_state(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * hermitize(g)


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Full-rank state from the Ginibre ensemble: G G^dagger / tr(G G^dagger)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return hermitize(rho / np.real(np.trace(rho)))
