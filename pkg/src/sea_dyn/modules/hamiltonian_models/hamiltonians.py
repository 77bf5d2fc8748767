"""Time-dependent Hamiltonian families (hbar = 1, basis ordered {|1>, |0>}).

Every model is immutable, evaluates H(t) and its analytic derivative, and
may provide a closed-form eigensystem. ``instantaneous_eigensystem`` falls
back to numerical diagonalisation with the same phase convention.
"""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar

import numpy as np

from sea_dyn.errors import DomainError
from sea_dyn.modules.operator_algebra import EigenSystem, check_hermitian, eig_hermitian, fix_phase

logger = logging.getLogger(__name__)

DOMAIN_RTOL = 1e-12


class HamiltonianModel(ABC):
    kind: ClassVar[str]
    time_unit: ClassVar[str] = "1"

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @abstractmethod
    def _matrix(self, t: float) -> np.ndarray: ...

    @abstractmethod
    def _derivative(self, t: float) -> np.ndarray: ...

    @abstractmethod
    def params(self) -> dict[str, Any]:
        """Serializable parameters, keyed as in the scenario document."""

    @property
    def domain(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    @property
    def is_static(self) -> bool:
        return False

    def check_time(self, t: float) -> None:
        lo, hi = self.domain
        slack = DOMAIN_RTOL * max(1.0, abs(lo) if math.isfinite(lo) else 1.0, abs(hi) if math.isfinite(hi) else 1.0)
        if t < lo - slack or t > hi + slack:
            raise DomainError(f"t={t:g} outside {self.kind} domain [{lo:g}, {hi:g}]")

    def evaluate(self, t: float) -> np.ndarray:
        self.check_time(t)
        return self._matrix(t)

    def derivative(self, t: float) -> np.ndarray:
        self.check_time(t)
        return self._derivative(t)

    def analytic_eigensystem(self, t: float) -> EigenSystem | None:
        return None


@dataclass(frozen=True)
class StaticTss(HamiltonianModel):
    """H2 = diag(epsilon, 0)."""

    epsilon: float
    kind: ClassVar[str] = "static_tss"
    time_unit: ClassVar[str] = "1/epsilon"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def dim(self) -> int:
        return 2

    @property
    def is_static(self) -> bool:
        return True

    def _matrix(self, t: float) -> np.ndarray:
        return np.diag([self.epsilon, 0.0]).astype(complex)

    def _derivative(self, t: float) -> np.ndarray:
        return np.zeros((2, 2), dtype=complex)

    def analytic_eigensystem(self, t: float) -> EigenSystem:
        return EigenSystem(
            values=np.array([0.0, self.epsilon]),
            vectors=np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
        )

    def params(self) -> dict[str, Any]:
        return {"epsilon": self.epsilon}


@dataclass(frozen=True)
class StaticLevels(HamiltonianModel):
    """Diagonal static Hamiltonian with arbitrary levels."""

    levels: tuple[float, ...]
    kind: ClassVar[str] = "static_levels"
    time_unit: ClassVar[str] = "1/(level spread)"

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(float(x) for x in self.levels))
        if not 2 <= len(self.levels) <= 16:
            raise ValueError(f"static_levels needs 2 to 16 levels, got {len(self.levels)}")

    @property
    def dim(self) -> int:
        return len(self.levels)

    @property
    def is_static(self) -> bool:
        return True

    def _matrix(self, t: float) -> np.ndarray:
        return np.diag(self.levels).astype(complex)

    def _derivative(self, t: float) -> np.ndarray:
        return np.zeros((self.dim, self.dim), dtype=complex)

    def analytic_eigensystem(self, t: float) -> EigenSystem:
        order = np.argsort(self.levels, kind="stable")
        return EigenSystem(
            values=np.asarray(self.levels)[order],
            vectors=np.eye(self.dim, dtype=complex)[:, order],
        )

    def params(self) -> dict[str, Any]:
        return {"levels": list(self.levels)}


@dataclass(frozen=True)
class RotatingField(HamiltonianModel):
    """H_rot(t) = Omega [[0, e^{i omega t}], [e^{-i omega t}, 0]]."""

    Omega: float
    omega: float
    kind: ClassVar[str] = "rotating_field"
    time_unit: ClassVar[str] = "1/Omega"

    def __post_init__(self):
        if not self.Omega > 0:
            raise ValueError(f"Omega must be positive, got {self.Omega}")

    @property
    def dim(self) -> int:
        return 2

    @property
    def period(self) -> float:
        """Revival time 2 pi / omega of the matrix entries."""
        return 2.0 * math.pi / self.omega

    def _matrix(self, t: float) -> np.ndarray:
        phase = np.exp(1j * self.omega * t)
        return self.Omega * np.array([[0.0, phase], [phase.conjugate(), 0.0]], dtype=complex)

    def _derivative(self, t: float) -> np.ndarray:
        phase = np.exp(1j * self.omega * t)
        return self.Omega * self.omega * np.array(
            [[0.0, 1j * phase], [-1j * phase.conjugate(), 0.0]], dtype=complex
        )

    def analytic_eigensystem(self, t: float) -> EigenSystem:
        # |+-> = (|1> +- e^{-i omega t}|0>) / sqrt 2
        back = np.exp(-1j * self.omega * t)
        vectors = np.array([[1.0, 1.0], [-back, back]], dtype=complex) / math.sqrt(2.0)
        return EigenSystem(values=np.array([-self.Omega, self.Omega]), vectors=fix_phase(vectors))

    def params(self) -> dict[str, Any]:
        return {"Omega": self.Omega, "omega": self.omega}


@dataclass(frozen=True)
class LandauZener(HamiltonianModel):
    """H_LZ(t) = [[kappa t, xi], [xi, -kappa t]] on t in [-T, T]."""

    kappa: float
    xi: float
    T: float
    kind: ClassVar[str] = "landau_zener"
    time_unit: ClassVar[str] = "1/xi"

    def __post_init__(self):
        for name in ("kappa", "xi", "T"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def dim(self) -> int:
        return 2

    @property
    def domain(self) -> tuple[float, float]:
        return (-self.T, self.T)

    def _matrix(self, t: float) -> np.ndarray:
        kt = self.kappa * t
        return np.array([[kt, self.xi], [self.xi, -kt]], dtype=complex)

    def _derivative(self, t: float) -> np.ndarray:
        return np.array([[self.kappa, 0.0], [0.0, -self.kappa]], dtype=complex)

    def mixing_angle(self, t: float) -> float:
        """theta with |+> = cos(theta)|1> + sin(theta)|0>."""
        kt = self.kappa * t
        energy = math.hypot(self.xi, kt)
        # (E - kt)/xi written without cancellation for kt > 0
        ratio = self.xi / (energy + kt) if kt >= 0 else (energy - kt) / self.xi
        return math.atan(ratio)

    def analytic_eigensystem(self, t: float) -> EigenSystem:
        self.check_time(t)
        energy = math.hypot(self.xi, self.kappa * t)
        theta = self.mixing_angle(t)
        c, s = math.cos(theta), math.sin(theta)
        vectors = np.array([[-s, c], [c, s]], dtype=complex)
        return EigenSystem(values=np.array([-energy, energy]), vectors=fix_phase(vectors))

    def params(self) -> dict[str, Any]:
        return {"kappa": self.kappa, "xi": self.xi, "T": self.T}


@dataclass(frozen=True)
class CustomTable(HamiltonianModel):
    """Piecewise-linear interpolation of sampled Hamiltonians."""

    times: tuple[float, ...]
    matrices: tuple[np.ndarray, ...] = field(compare=False)
    kind: ClassVar[str] = "custom_table"

    def __post_init__(self):
        times = tuple(float(x) for x in self.times)
        if len(times) < 2:
            raise ValueError("custom_table needs at least two samples")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("custom_table times must be strictly increasing")
        if len(self.matrices) != len(times):
            raise ValueError(f"{len(times)} times but {len(self.matrices)} matrices")
        mats = tuple(check_hermitian(np.asarray(m, dtype=complex)) for m in self.matrices)
        if len({m.shape for m in mats}) != 1:
            raise ValueError("custom_table matrices must share one shape")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "_stack", np.stack(mats))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CustomTable):
            return NotImplemented
        return self.times == other.times and np.array_equal(self._stack, other._stack)

    def __hash__(self) -> int:
        return hash(self.times)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def domain(self) -> tuple[float, float]:
        return (self.times[0], self.times[-1])

    def _segment(self, t: float) -> int:
        idx = int(np.searchsorted(self.times, t, side="right")) - 1
        return min(max(idx, 0), len(self.times) - 2)

    def _matrix(self, t: float) -> np.ndarray:
        k = self._segment(t)
        t0, t1 = self.times[k], self.times[k + 1]
        w = (t - t0) / (t1 - t0)
        return (1.0 - w) * self._stack[k] + w * self._stack[k + 1]

    def _derivative(self, t: float) -> np.ndarray:
        k = self._segment(t)
        return (self._stack[k + 1] - self._stack[k]) / (self.times[k + 1] - self.times[k])

    def params(self) -> dict[str, Any]:
        return {
            "times": list(self.times),
            "matrices": [
                [[[float(z.real), float(z.imag)] for z in row] for row in m] for m in self.matrices
            ],
        }


MODEL_KINDS: dict[str, type[HamiltonianModel]] = {
    cls.kind: cls for cls in (StaticTss, StaticLevels, RotatingField, LandauZener, CustomTable)
}


def evaluate(model: HamiltonianModel, t: float) -> np.ndarray:
    return model.evaluate(t)


def instantaneous_eigensystem(model: HamiltonianModel, t: float, analytic: bool = True) -> EigenSystem:
    """Ascending eigensystem of H(t); first non-negligible vector component real positive."""
    if analytic:
        eig = model.analytic_eigensystem(t)
        if eig is not None:
            model.check_time(t)
            return eig
    return eig_hermitian(model.evaluate(t))
