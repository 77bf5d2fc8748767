import math

import numpy as np
import pytest

from sea_dyn.errors import ThermoError
from sea_dyn.modules.hamiltonian_models import LandauZener, StaticLevels, StaticTss
from sea_dyn.modules.observables_thermo import (
    CSV_COLUMNS,
    canonical_state,
    effective_beta,
    fidelity,
    observables,
    restricted_canonical,
    stationarity_residual,
    thermal_energy,
    von_neumann_entropy,
)
from sea_dyn.modules.operator_algebra import max_norm, pure_state

H3 = np.diag([0.0, 1.0, 2.5]).astype(complex)


def tss_state(lam=1e-2):
    psi = np.array([math.sqrt(0.7), math.sqrt(0.3)], dtype=complex)
    return (1 - lam) * pure_state(psi) + lam / 2 * np.eye(2)


class TestObservables:

    def test_column_order(self):
        assert CSV_COLUMNS == (
            "t", "p1", "p0", "re_rho01", "im_rho01", "abs_rho01", "entropy", "energy",
            "fidelity", "sigma_x", "trace", "min_eig", "adiab_metric",
        )

    def test_entropy_limits(self, random_state):
        assert von_neumann_entropy(np.eye(3) / 3) == pytest.approx(math.log(3), rel=1e-13)
        assert von_neumann_entropy(pure_state(np.array([0.6, 0.8]))) == pytest.approx(0.0, abs=1e-14)
        assert 0.0 < von_neumann_entropy(random_state(4)) < math.log(4)

    def test_fidelity(self):
        psi = np.array([0.6, 0.8j])
        assert fidelity(pure_state(psi), psi) == pytest.approx(1.0)
        assert fidelity(np.eye(2) / 2, psi) == pytest.approx(0.5)

    def test_static_tss_row(self):
        rho = tss_state()
        row = observables(rho, StaticTss(epsilon=2.0), 3.0, np.array([math.sqrt(0.7), math.sqrt(0.3)]))
        assert row.t == 3.0
        assert row.p1 == pytest.approx(rho[0, 0].real)
        assert row.p0 == pytest.approx(rho[1, 1].real)
        assert row.p1 + row.p0 == pytest.approx(1.0)
        assert complex(row.re_rho01, row.im_rho01) == pytest.approx(rho[1, 0])
        assert row.abs_rho01 == pytest.approx(0.99 * math.sqrt(0.21))
        assert row.energy == pytest.approx(2.0 * rho[0, 0].real)
        assert row.sigma_x == pytest.approx(2 * rho[0, 1].real)
        assert row.trace == pytest.approx(1.0)
        assert row.min_eig == pytest.approx(0.005, rel=1e-9)
        assert row.adiab_metric == 0.0
        assert row.fidelity == pytest.approx(0.99 + 0.005)

    def test_populations_follow_instantaneous_basis(self):
        model = LandauZener(kappa=0.1, xi=1.0, T=10.0)
        high = np.array([1.0, 1.0]) / math.sqrt(2)
        row = observables(pure_state(high), model, 0.0, high)
        assert row.p1 == pytest.approx(1.0)
        assert row.p0 == pytest.approx(0.0, abs=1e-14)
        assert row.abs_rho01 == pytest.approx(0.0, abs=1e-14)
        assert row.adiab_metric == pytest.approx(0.025)

    def test_degenerate_metric_is_nan(self):
        row = observables(np.eye(2) / 2, StaticLevels(levels=(1.0, 1.0)), 0.0, np.array([1.0, 0.0]))
        assert math.isnan(row.adiab_metric)

    def test_coherence_bounded_by_populations(self, random_state):
        model = LandauZener(kappa=0.1, xi=1.0, T=50.0)
        psi0 = np.array([1.0, 0.0])
        for t in np.linspace(-50.0, 50.0, 41):
            row = observables(random_state(2), model, t, psi0)
            assert row.abs_rho01 ** 2 <= row.p0 * row.p1 + 1e-9
        psi = np.array([math.sqrt(0.7), math.sqrt(0.3)])
        row = observables(pure_state(psi), StaticTss(epsilon=1.0), 0.0, psi)
        assert row.abs_rho01 ** 2 <= row.p0 * row.p1 + 1e-9
        assert row.abs_rho01 ** 2 == pytest.approx(row.p0 * row.p1, abs=1e-12)

    def test_entropy_and_min_eig_share_spectrum(self, random_state):
        rho = random_state(3)
        row = observables(rho, StaticLevels(levels=(0.0, 1.0, 2.0)), 0.0, np.array([1.0, 0.0, 0.0]))
        assert row.entropy == pytest.approx(von_neumann_entropy(rho), rel=1e-13)
        assert row.min_eig == pytest.approx(float(np.linalg.eigvalsh(rho)[0]), rel=1e-10)


class TestCanonicalState:

    def test_infinite_temperature(self):
        assert np.allclose(canonical_state(H3, 0.0).omega, np.eye(3) / 3)

    def test_populations(self):
        omega = canonical_state(H3, 0.8).omega
        weights = np.exp(-0.8 * np.array([0.0, 1.0, 2.5]))
        assert np.allclose(np.diag(omega).real, weights / weights.sum(), rtol=1e-13)
        assert np.trace(omega).real == pytest.approx(1.0, abs=1e-14)

    def test_negative_beta_inverts(self):
        pos = np.diag(canonical_state(H3, 0.8).omega).real
        neg = np.diag(canonical_state(H3, -0.8).omega).real
        assert np.argmax(pos) == 0
        assert np.argmax(neg) == 2

    def test_large_beta_stays_finite(self):
        omega = canonical_state(H3, 250.0).omega
        assert np.all(np.isfinite(omega))
        assert omega[0, 0].real == pytest.approx(1.0)

    def test_overflow_rejected(self):
        with pytest.raises(ThermoError):
            canonical_state(H3, 400.0)
        with pytest.raises(ThermoError):
            canonical_state(H3, math.inf)

    def test_restricted_on_subspace(self):
        P = np.diag([0.0, 1.0, 1.0]).astype(complex)
        state = restricted_canonical(H3, P, 1.0)
        assert state.rank_deficient
        assert state.omega[0, 0] == 0
        assert state.omega[1, 1].real / state.omega[2, 2].real == pytest.approx(math.exp(1.5))

    def test_restricted_checks_projector(self):
        with pytest.raises(ThermoError):
            restricted_canonical(H3, 0.5 * np.eye(3), 1.0)
        plus = pure_state(np.array([1.0, 1.0, 0.0]) / math.sqrt(2))
        with pytest.raises(ThermoError):
            restricted_canonical(H3, plus, 1.0)


class TestEffectiveBeta:

    def test_thermal_energy_decreases(self):
        values = np.array([0.0, 1.0, 2.5])
        energies = [thermal_energy(values, b) for b in np.linspace(-5, 5, 21)]
        assert all(a > b for a, b in zip(energies, energies[1:]))

    @pytest.mark.parametrize("beta", [-3.0, -0.4, 0.0, 0.05, 1.0, 7.5])
    def test_roundtrip(self, beta):
        U = thermal_energy(np.array([0.0, 1.0, 2.5]), beta)
        assert effective_beta(H3, U) == pytest.approx(beta, abs=1e-9)

    def test_midpoint_of_two_level_system(self):
        assert effective_beta(np.diag([1.0, 0.0]), 0.5) == 0.0

    def test_two_level_closed_form(self):
        eps, p1 = 1.0, 0.3
        beta = effective_beta(np.diag([eps, 0.0]), p1 * eps)
        assert beta == pytest.approx(math.log((1 - p1) / p1) / eps, rel=1e-10)

    @pytest.mark.parametrize("U", [0.0, 1.0, -0.2, 1.3])
    def test_outside_open_interval(self, U):
        with pytest.raises(ThermoError):
            effective_beta(np.diag([1.0, 0.0]), U)


class TestStationarity:

    def test_canonical_state_is_stationary(self):
        for beta in (-1.0, 0.3, 2.0):
            assert stationarity_residual(canonical_state(H3, beta).omega, H3, 1.0) < 1e-12

    def test_generic_state_is_not(self, random_state):
        assert stationarity_residual(random_state(3), H3, 1.0) > 1e-6

    def test_canonical_state_fixes_energy(self):
        omega = canonical_state(H3, 0.7).omega
        assert max_norm(omega - canonical_state(H3, effective_beta(H3, np.trace(omega @ H3).real)).omega) < 1e-10
