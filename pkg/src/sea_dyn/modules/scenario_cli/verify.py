"""Stationarity and conservation checks run by ``sea-dyn verify``."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from sea_dyn.modules.observables_thermo import (
    canonical_state,
    effective_beta,
    restricted_canonical,
    stationarity_residual,
    thermal_energy,
)
from sea_dyn.modules.operator_algebra import (
    eig_hermitian,
    matrix_function,
    max_norm,
    pure_state,
    random_density_matrix,
    random_hermitian,
)
from sea_dyn.modules.sea_dissipator import dissipator, generator_via_gram, rescaling_residual

logger = logging.getLogger(__name__)

GAMMA = 1.0
CANONICAL_BETAS = (-1.0, -0.5, 0.0, 0.5, 2.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst_ratio: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= 1.0


def _corpus(rng: np.random.Generator, n: int, dims=(2, 3, 4)):
    for i in range(n):
        dim = dims[i % len(dims)]
        yield random_density_matrix(rng, dim), random_hermitian(rng, dim)


def _spread(H: np.ndarray) -> float:
    values = eig_hermitian(H).values
    return float(values[-1] - values[0])


def check_constraint_projection(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for rho, H in _corpus(rng, n):
        d = dissipator(rho, H, GAMMA)
        h = max(1.0, max_norm(H))
        worst = max(worst,
                    abs(np.trace(d)) / (1e-12 * GAMMA),
                    abs(np.trace(d @ H)) / (1e-12 * GAMMA * h * h))
    return worst


def check_oracle_equivalence(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for rho, H in _corpus(rng, n):
        d = dissipator(rho, H, GAMMA)
        worst = max(worst, max_norm(generator_via_gram(rho, H, GAMMA) - d) / (1e-10 * max(1.0, max_norm(d))))
    return worst


def check_entropy_ascent(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for rho, H in _corpus(rng, n):
        log_rho = matrix_function(rho, np.log)
        rate = float(np.real(np.trace(dissipator(rho, H, GAMMA) @ (log_rho + np.eye(len(rho))))))
        worst = max(worst, rate / (1e-12 * max(1.0, max_norm(log_rho))))
    return worst


def check_canonical_stationarity(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for i in range(max(1, n // 50)):
        H = random_hermitian(rng, 2 + i % 3)
        for beta in CANONICAL_BETAS:
            omega = canonical_state(H, beta / _spread(H)).omega
            worst = max(worst, stationarity_residual(omega, H, GAMMA) / (1e-10 * GAMMA))
    return worst


def check_projected_stationarity(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for i in range(max(1, n // 100)):
        H = random_hermitian(rng, 3 + i % 2)
        eig = eig_hermitian(H)
        beta = 1.0 / _spread(H)
        for size in range(1, eig.dim + 1):
            for subset in itertools.combinations(range(eig.dim), size):
                block = eig.vectors[:, list(subset)]
                omega = restricted_canonical(H, block @ block.conj().T, beta).omega
                worst = max(worst, stationarity_residual(omega, H, GAMMA) / (1e-10 * GAMMA))
    return worst


def check_pure_eigenstates(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for i in range(max(1, n // 50)):
        H = random_hermitian(rng, 2 + i % 3)
        eig = eig_hermitian(H)
        for k in range(eig.dim):
            rho = pure_state(eig.vector(k))
            worst = max(worst, stationarity_residual(rho, H, GAMMA) / (1e-12 * max(1.0, max_norm(H))))
    return worst


def check_rescaling(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for rho, H in _corpus(rng, max(1, n // 10), dims=(2,)):
        scale = max(1e-300, max_norm(dissipator(rho, H, GAMMA)))
        for sigma in (0.5, 3.0):
            worst = max(worst, rescaling_residual(rho, H, sigma, GAMMA) / (1e-10 * scale))
    return worst


def check_population_freezing(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for rho, H in _corpus(rng, max(1, n // 10), dims=(2,)):
        vectors = eig_hermitian(H).vectors
        d = vectors.conj().T @ dissipator(rho, H, GAMMA) @ vectors
        worst = max(worst, float(np.max(np.abs(np.diag(d)))) / (1e-12 * max(1.0, max_norm(d))))
    return worst


def check_beta_roundtrip(rng: np.random.Generator, n: int) -> float:
    worst = 0.0
    for i in range(max(1, n // 20)):
        H = random_hermitian(rng, 2 + i % 3)
        values = eig_hermitian(H).values
        beta = rng.uniform(-5.0, 5.0) / _spread(H)
        recovered = effective_beta(H, thermal_energy(values, beta))
        worst = max(worst, abs(recovered - beta) / 1e-8)
    return worst


CHECKS: dict[str, Callable[[np.random.Generator, int], float]] = {
    "constraint_projection": check_constraint_projection,
    "oracle_equivalence": check_oracle_equivalence,
    "entropy_ascent": check_entropy_ascent,
    "canonical_stationarity": check_canonical_stationarity,
    "projected_canonical_stationarity": check_projected_stationarity,
    "pure_eigenstate_stationarity": check_pure_eigenstates,
    "rescaling_invariance": check_rescaling,
    "population_freezing": check_population_freezing,
    "beta_roundtrip": check_beta_roundtrip,
}


def run_verify(n_states: int = 1000, seed: int = 20240601) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    for name, check in CHECKS.items():
        result = CheckResult(name=name, worst_ratio=float(check(rng, n_states)), samples=n_states)
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"{name}: worst residual/bound = {result.worst_ratio:.3g}")
        results.append(result)
    return results
