import itertools
import math

import numpy as np
import pytest

from sea_dyn.errors import DimensionMismatchError, OracleRefusal
from sea_dyn.modules.observables_thermo import canonical_state, restricted_canonical
from sea_dyn.modules.operator_algebra import (
    anticommutator,
    commutator,
    eig_hermitian,
    matrix_function,
    max_norm,
    pure_state,
    rho_log_rho,
)
from sea_dyn.modules.sea_dissipator import (
    dissipator,
    dissipator_unchecked,
    generator_via_gram,
    master_rhs,
    rescaling_residual,
    sea_coefficients,
)

H2 = np.diag([1.0, 0.0]).astype(complex)


def fig1_state(lam=1e-4):
    psi = np.array([math.sqrt(0.7), math.sqrt(0.3)], dtype=complex)
    return (1 - lam) * pure_state(psi) + lam / 2 * np.eye(2)


class TestSeaCoefficients:

    def test_pure_state_coefficients_vanish(self, random_herm):
        psi = np.array([0.6, 0.8j])
        c = sea_coefficients(pure_state(psi), random_herm(2))
        assert abs(c.s) < 1e-13
        assert abs(c.mu) < 1e-11
        assert abs(c.nu) < 1e-11

    def test_maximally_mixed(self):
        c = sea_coefficients(np.eye(2) / 2, 1.7 * H2)
        assert c.mu == pytest.approx(-math.log(2), rel=1e-12)
        assert c.nu == pytest.approx(0.0, abs=1e-14)
        assert c.sigma2 == pytest.approx(1.7 ** 2 / 4)

    def test_diagonal_state_nu(self):
        eps, p1, p0 = 1.3, 0.7, 0.3
        c = sea_coefficients(np.diag([p1, p0]), eps * H2)
        assert c.nu == pytest.approx(math.log(p0 / p1) / (2 * eps), rel=1e-12)

    def test_entropy_functional_non_positive(self, random_state, random_herm):
        for dim in (2, 3, 4):
            c = sea_coefficients(random_state(dim), random_herm(dim))
            assert c.s <= 0
            assert c.sigma2 >= -1e-12 * max(1.0, c.mean_H2)


class TestDissipator:

    def test_constraints_conserved(self, random_state, random_herm):
        gamma = 0.8
        for i in range(1000):
            dim = 2 + i % 3
            rho, h = random_state(dim), random_herm(dim)
            d = dissipator(rho, h, gamma)
            scale = max(1.0, max_norm(h))
            assert abs(np.trace(d)) <= 1e-12 * gamma
            assert abs(np.trace(d @ h)) <= 1e-12 * gamma * scale ** 2

    def test_entropy_ascent(self, random_state, random_herm):
        for i in range(300):
            dim = 2 + i % 3
            rho, h = random_state(dim), random_herm(dim)
            log_rho = matrix_function(rho, np.log)
            rate = np.trace(dissipator(rho, h, 1.0) @ (log_rho + np.eye(dim))).real
            assert rate <= 1e-12 * max(1.0, max_norm(log_rho))

    def test_canonical_state_is_fixed_point(self, random_herm):
        h = random_herm(3)
        for beta in (-1.0, 0.0, 0.7):
            omega = canonical_state(h, beta).omega
            assert max_norm(dissipator(omega, h, 1.0)) < 1e-10

    def test_diagonal_full_rank_state_is_fixed_point(self):
        assert max_norm(dissipator(np.diag([0.2, 0.8]), 2.0 * H2, 1.0)) < 1e-12

    def test_two_level_populations_frozen(self, random_state, random_herm):
        for _ in range(200):
            rho, h = random_state(2), random_herm(2)
            vecs = eig_hermitian(h).vectors
            d = vecs.conj().T @ dissipator(rho, h, 1.0) @ vecs
            assert np.max(np.abs(np.diag(d))) <= 1e-12 * max(1.0, max_norm(d))

    def test_fig1_state_moves_only_coherence(self):
        d = dissipator(fig1_state(), H2, 0.25)
        assert abs(d[0, 1]) > 1e-8
        assert max(abs(d[0, 0]), abs(d[1, 1])) < 1e-12 * abs(d[0, 1])

    def test_degenerate_variance_branch(self, random_state):
        rho = random_state(3)
        h = 2.0 * np.eye(3)
        out = master_rhs(rho, h, 1.0)
        assert out.degenerate_constraint_flag
        g = rho_log_rho(rho)
        assert np.allclose(out.dissipator_part, -(g - np.trace(g).real * rho), atol=1e-14)
        assert abs(np.trace(out.dissipator_part)) < 1e-14

    def test_eigenstate_in_degenerate_branch_is_stationary(self, random_herm):
        h = random_herm(3)
        rho = pure_state(eig_hermitian(h).vector(1))
        assert max_norm(master_rhs(rho, h, 1.0).rhs) < 1e-12 * max(1.0, max_norm(h))

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            dissipator(np.eye(2) / 2, H2, -0.1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            dissipator(np.eye(3) / 3, H2, 1.0)

    def test_unchecked_variant_agrees(self, random_state, random_herm):
        for dim in (2, 3, 4):
            rho, h = random_state(dim), random_herm(dim)
            assert np.array_equal(dissipator_unchecked(rho, h, 0.7), dissipator(rho, h, 0.7))


class TestMasterRhs:

    def test_pure_state_evolves_unitarily(self, random_herm):
        h = random_herm(3)
        rho = pure_state(np.array([1.0, 1.0j, -1.0]) / math.sqrt(3))
        out = master_rhs(rho, h, 2.0)
        assert max_norm(out.dissipator_part) < 1e-12
        assert np.allclose(out.rhs, -1j * commutator(h, rho), atol=1e-12)

    def test_decomposition_and_hermiticity(self, random_state, random_herm):
        rho, h = random_state(4), random_herm(4)
        out = master_rhs(rho, h, 0.5)
        assert max_norm(out.rhs - out.unitary_part - out.dissipator_part) <= 1e-14 * max_norm(out.rhs)
        assert max_norm(out.rhs - out.rhs.conj().T) <= 1e-13

    def test_canonical_stationarity_residual(self, random_herm):
        h = random_herm(2)
        omega = canonical_state(h, 0.4).omega
        assert max_norm(master_rhs(omega, h, 1.5).rhs) < 1e-10 * 1.5

    def test_conservation_of_full_rhs(self, random_state, random_herm):
        rho, h = random_state(3), random_herm(3)
        rhs = master_rhs(rho, h, 1.0).rhs
        assert abs(np.trace(rhs)) < 1e-12
        assert abs(np.trace(rhs @ h)) < 1e-12 * max(1.0, max_norm(h)) ** 2

    def test_projected_canonical_states_are_stationary(self, random_herm):
        for dim in (3, 4):
            h = random_herm(dim)
            eig = eig_hermitian(h)
            beta = 1.0 / (eig.values[-1] - eig.values[0])
            for size in range(1, dim + 1):
                for subset in itertools.combinations(range(dim), size):
                    block = eig.vectors[:, list(subset)]
                    omega = restricted_canonical(h, block @ block.conj().T, beta).omega
                    assert max_norm(master_rhs(omega, h, 1.0).rhs) < 1e-10


class TestGramOracle:

    def test_matches_dissipator(self, random_state, random_herm):
        for i in range(300):
            dim = 2 + i % 3
            rho, h = random_state(dim), random_herm(dim)
            d = dissipator(rho, h, 0.7)
            assert max_norm(generator_via_gram(rho, h, 0.7) - d) < 1e-10 * max(1.0, max_norm(d))

    def test_canonical_state_gives_zero(self, random_herm):
        h = random_herm(3)
        omega = canonical_state(h, 0.3).omega
        assert max_norm(generator_via_gram(omega, h, 1.0)) < 1e-10

    def test_maximally_mixed_gives_zero(self):
        assert max_norm(generator_via_gram(np.eye(2) / 2, H2, 1.0)) < 1e-12

    def test_refuses_rank_deficient_state(self):
        with pytest.raises(OracleRefusal) as excinfo:
            generator_via_gram(np.diag([1.0, 0.0]), H2, 1.0)
        assert excinfo.value.rank == 1
        assert excinfo.value.dim == 2

    def test_refuses_degenerate_variance(self, random_state):
        with pytest.raises(OracleRefusal):
            generator_via_gram(random_state(2), 3.0 * np.eye(2), 1.0)


class TestRescaling:

    def test_unit_scale_is_exact(self, random_state, random_herm):
        assert rescaling_residual(random_state(2), random_herm(2), 1.0, 1.0) == 0.0

    @pytest.mark.parametrize("sigma", [0.5, 3.0])
    def test_random_two_level_states(self, sigma, random_state, random_herm):
        for _ in range(100):
            rho, h = random_state(2), random_herm(2)
            reference = max_norm(dissipator(rho, h, 1.0))
            assert rescaling_residual(rho, h, sigma, 1.0) < 1e-10 * reference

    def test_fig1_state(self):
        reference = max_norm(dissipator(fig1_state(), H2, 0.25))
        assert rescaling_residual(fig1_state(), H2, 0.5, 0.25) < 1e-10 * reference

    def test_non_positive_scale_rejected(self):
        with pytest.raises(ValueError):
            rescaling_residual(np.eye(2) / 2, H2, 0.0, 1.0)

    def test_nu_scales_inversely(self, random_state, random_herm):
        rho, h = random_state(3), random_herm(3)
        base, scaled = sea_coefficients(rho, h), sea_coefficients(rho, 3.0 * h)
        assert scaled.mu == pytest.approx(base.mu, rel=1e-10)
        assert scaled.nu == pytest.approx(base.nu / 3.0, rel=1e-10)

    def test_anticommutator_term_scale_free(self, random_state, random_herm):
        rho, h = random_state(2), random_herm(2)
        base, scaled = sea_coefficients(rho, h), sea_coefficients(rho, 2.0 * h)
        assert np.allclose(scaled.nu * anticommutator(rho, 2.0 * h), base.nu * anticommutator(rho, h), atol=1e-12)
