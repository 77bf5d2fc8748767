import math

import numpy as np
import pytest

from sea_dyn.errors import DegenerateSpectrumError, DomainError
from sea_dyn.modules.evolution_engine import IntegratorConfig, evolve_unitary
from sea_dyn.modules.hamiltonian_models import (
    AdiabaticCoefficients,
    CustomTable,
    LandauZener,
    RotatingField,
    StaticLevels,
    StaticTss,
    adiabatic_coefficient_step,
    adiabaticity_metric,
    evaluate,
    instantaneous_eigensystem,
    integrate_coefficients,
)
from sea_dyn.modules.operator_algebra import max_norm, pure_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def custom_table():
    times = (0.0, 1.0, 2.5)
    matrices = (np.diag([1.0, -1.0]), SX, np.array([[0.5, 0.3j], [-0.3j, -0.2]]))
    return CustomTable(times=times, matrices=matrices)


MODELS = [
    StaticTss(epsilon=1.3),
    StaticLevels(levels=(0.0, 1.0, 2.5)),
    RotatingField(Omega=1.0, omega=2 * math.pi / 10),
    LandauZener(kappa=0.1, xi=1.0, T=500.0),
]


class TestEvaluate:

    def test_static_tss(self):
        assert np.array_equal(evaluate(StaticTss(epsilon=2.0), 17.0), np.diag([2.0, 0.0]))

    def test_rotating_field_at_zero(self):
        assert np.allclose(evaluate(RotatingField(Omega=0.4, omega=3.0), 0.0), 0.4 * SX)

    def test_landau_zener_at_zero(self):
        assert np.allclose(evaluate(LandauZener(kappa=0.1, xi=0.8, T=5.0), 0.0), 0.8 * SX)

    def test_landau_zener_domain(self):
        with pytest.raises(DomainError):
            evaluate(LandauZener(kappa=0.1, xi=1.0, T=5.0), 5.5)

    def test_rotating_field_periodicity(self, rng):
        model = RotatingField(Omega=1.0, omega=2 * math.pi / 100)
        for t in rng.uniform(0, 300, size=20):
            assert max_norm(model.evaluate(t + model.period) - model.evaluate(t)) < 1e-12

    @pytest.mark.parametrize("model", MODELS + [custom_table()], ids=lambda m: m.kind)
    def test_derivative_matches_finite_difference(self, model, rng):
        h = 1e-4
        lo, hi = model.domain
        lo, hi = (max(lo, -50.0), min(hi, 50.0))
        for t in rng.uniform(lo + 2 * h, hi - 2 * h, size=100):
            if isinstance(model, CustomTable) and min(abs(t - s) for s in model.times) < 2 * h:
                continue
            fd = (model.evaluate(t + h) - model.evaluate(t - h)) / (2 * h)
            assert max_norm(fd - model.derivative(t)) < 1e-6

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            StaticTss(epsilon=0.0)
        with pytest.raises(ValueError):
            StaticLevels(levels=(1.0,))
        with pytest.raises(ValueError):
            LandauZener(kappa=0.1, xi=-1.0, T=5.0)

    def test_custom_table_interpolates(self):
        table = custom_table()
        assert np.allclose(table.evaluate(0.5), 0.5 * np.diag([1.0, -1.0]) + 0.5 * SX)
        assert table == custom_table()
        assert hash(table) == hash(custom_table())


class TestEigensystem:

    def test_rotating_field_values(self, rng):
        model = RotatingField(Omega=0.9, omega=0.3)
        for t in rng.uniform(0, 100, size=10):
            assert np.allclose(instantaneous_eigensystem(model, t).values, [-0.9, 0.9])

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: m.kind)
    def test_analytic_matches_numeric(self, model, rng):
        lo, hi = model.domain
        for t in rng.uniform(max(lo, -50.0), min(hi, 50.0), size=20):
            analytic = instantaneous_eigensystem(model, t)
            numeric = instantaneous_eigensystem(model, t, analytic=False)
            assert np.allclose(analytic.values, numeric.values, atol=1e-10)
            assert max_norm(analytic.vectors - numeric.vectors) < 1e-8

    def test_landau_zener_late_time_limit(self):
        model = LandauZener(kappa=1.0, xi=1.0, T=1e4)
        plus = instantaneous_eigensystem(model, model.T).vector(1)
        assert max_norm(plus - np.array([1.0, 0.0])) < 1e-3

    def test_landau_zener_symmetric_combinations_at_zero(self):
        model = LandauZener(kappa=0.1, xi=0.5, T=10.0)
        eig = instantaneous_eigensystem(model, 0.0)
        assert np.allclose(eig.values, [-0.5, 0.5])
        assert np.allclose(np.abs(eig.vectors), 1 / math.sqrt(2))
        assert model.mixing_angle(0.0) == pytest.approx(math.pi / 4)

    def test_landau_zener_spectrum_symmetric_in_time(self, rng):
        model = LandauZener(kappa=0.1, xi=1.0, T=500.0)
        for t in rng.uniform(0, 500, size=10):
            assert np.allclose(instantaneous_eigensystem(model, t).values,
                               instantaneous_eigensystem(model, -t).values)


class TestAdiabaticityMetric:

    def test_rotating_field_closed_form(self):
        model = RotatingField(Omega=1.0, omega=2 * math.pi / 100)
        diagnostics = adiabaticity_metric(model, 12.3)
        assert diagnostics.max_metric == pytest.approx(2 * math.pi / 400, rel=1e-10)
        assert set(diagnostics.metric_per_pair) == {(0, 1), (1, 0)}

    def test_static_model_is_zero(self):
        assert adiabaticity_metric(StaticLevels(levels=(0.0, 1.0, 3.0)), 4.0).max_metric == 0.0

    def test_landau_zener_at_crossing(self):
        model = LandauZener(kappa=0.1, xi=1.0, T=500.0)
        assert adiabaticity_metric(model, 0.0).max_metric == pytest.approx(0.1 / 4, rel=1e-10)

    def test_degenerate_spectrum_rejected(self):
        with pytest.raises(DegenerateSpectrumError):
            adiabaticity_metric(StaticLevels(levels=(1.0, 1.0)), 0.0)

    def test_supplied_eigensystem_gives_same_metric(self):
        model = LandauZener(kappa=0.1, xi=1.0, T=500.0)
        for t in (-40.0, 0.0, 3.7):
            eig = instantaneous_eigensystem(model, t)
            assert adiabaticity_metric(model, t, eig) == adiabaticity_metric(model, t)


class TestAdiabaticCoefficients:

    def test_static_model_leaves_coefficients_unchanged(self):
        coeffs = AdiabaticCoefficients(amplitudes=np.array([1.0 + 0j, 0.0]), phases=np.zeros(2))
        stepped = adiabatic_coefficient_step(StaticTss(epsilon=1.0), 0.0, coeffs, 0.1)
        assert np.array_equal(stepped.amplitudes, coeffs.amplitudes)

    def test_from_state_projects_onto_eigenbasis(self):
        model = RotatingField(Omega=1.0, omega=0.1)
        plus = instantaneous_eigensystem(model, 0.0).vector(1)
        coeffs = AdiabaticCoefficients.from_state(model, 0.0, plus)
        assert np.allclose(coeffs.populations, [0.0, 1.0])
        assert np.array_equal(coeffs.phases, np.zeros(2))

    @pytest.mark.slow
    def test_adiabatic_survival_over_one_period(self):
        model = RotatingField(Omega=1.0, omega=2 * math.pi / 1000)
        plus = instantaneous_eigensystem(model, 0.0).vector(1)
        coeffs = integrate_coefficients(model, AdiabaticCoefficients.from_state(model, 0.0, plus),
                                        0.0, model.period, 0.1)
        assert abs(coeffs.norm - 1.0) < 1e-8
        survival = coeffs.populations[1]
        assert survival >= 0.999

        cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12)
        record = evolve_unitary(pure_state(plus), model, (0.0, model.period), cfg, psi0=plus)
        final_plus = instantaneous_eigensystem(model, model.period).vector(1)
        unitary_survival = np.real(final_plus.conj() @ record.final_state @ final_plus)
        assert abs(unitary_survival - survival) < 1e-3
