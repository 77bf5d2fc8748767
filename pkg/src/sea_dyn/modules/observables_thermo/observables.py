"""Per-time observables written to the trajectory CSV."""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np
import scipy.linalg as la

from sea_dyn.errors import DegenerateSpectrumError
from sea_dyn.modules.hamiltonian_models import HamiltonianModel, adiabaticity_metric, instantaneous_eigensystem

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class ObservableRow:
    """One CSV row. Populations and coherence refer to the instantaneous
    eigenbasis of H(t): index 1 is the highest level, index 0 the lowest.
    ``sigma_x`` is taken in the bare basis."""

    t: float
    p1: float
    p0: float
    re_rho01: float
    im_rho01: float
    abs_rho01: float
    entropy: float
    energy: float
    fidelity: float
    sigma_x: float
    trace: float
    min_eig: float
    adiab_metric: float

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)


CSV_COLUMNS: tuple[str, ...] = tuple(f.name for f in fields(ObservableRow))


def _entropy_of_spectrum(values: np.ndarray) -> float:
    values = values[values > 0.0]
    return float(-np.sum(values * np.log(values)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S = -tr(rho ln rho) in nats; negative rounding noise counts as zero."""
    return _entropy_of_spectrum(la.eigvalsh(0.5 * (rho + rho.conj().T)))


def fidelity(rho: np.ndarray, psi0: np.ndarray) -> float:
    psi0 = np.asarray(psi0, dtype=complex)
    return float(np.real(psi0.conj() @ rho @ psi0))


def observables(rho: np.ndarray, model: HamiltonianModel, t: float, psi0: np.ndarray) -> ObservableRow:
    eig = instantaneous_eigensystem(model, t)
    spectrum = la.eigvalsh(0.5 * (rho + rho.conj().T))
    low, high = eig.vectors[:, 0], eig.vectors[:, -1]
    rho01 = complex(low.conj() @ rho @ high)
    try:
        metric = adiabaticity_metric(model, t, eig).max_metric
    except DegenerateSpectrumError:
        metric = math.nan
    return ObservableRow(
        t=float(t),
        p1=float(np.real(high.conj() @ rho @ high)),
        p0=float(np.real(low.conj() @ rho @ low)),
        re_rho01=rho01.real,
        im_rho01=rho01.imag,
        abs_rho01=abs(rho01),
        entropy=_entropy_of_spectrum(spectrum),
        energy=float(np.real(np.trace(rho @ model.evaluate(t)))),
        fidelity=fidelity(rho, psi0),
        sigma_x=float(np.real(np.trace(rho[:2, :2] @ SIGMA_X))),
        trace=float(np.real(np.trace(rho))),
        min_eig=float(spectrum[0]),
        adiab_metric=metric,
    )
