import math

import numpy as np
import pytest

from appellf2.errors import DomainError, ParameterError
from appellf2.oracle import integrate_semiinfinite
from appellf2.physics import (
    KratzerBasis,
    MatrixBlock,
    OscillatorBasis,
    build_perturbation_matrix,
    gk_energy,
    gk_overlap,
    gk_wavefunction,
    kratzer_element_integrand,
    kratzer_energy,
    kratzer_matrix_element,
    kratzer_normalization,
    kratzer_wavefunction,
    spiked_element_integrand,
    spiked_matrix_element,
    unperturbed_energies,
    variational_eigenvalues,
)
from appellf2.special_core import gamma, pochhammer

from conftest import rel_err

# mpmath quadrature at 40 digits, see scripts/derive_reference_values.py
REF_SPIKED_11 = 0.77544855977116326
REF_SPIKED_24 = 0.64691466324941534
REF_KRATZER_10 = -2.9797421561112126
REF_KRATZER_23 = -5.3232949567621389


def quad(f, scale=2.0):
    return integrate_semiinfinite(f, 1e-13, scale=scale).value


class TestOscillatorBasis:
    def test_gamma_from_A(self):
        assert OscillatorBasis(0.0).gamma == 1.5
        b = OscillatorBasis.from_gamma(2.7)
        assert b.gamma == 2.7
        assert abs(OscillatorBasis(b.A).gamma - 2.7) <= 1e-12

    def test_invalid(self):
        with pytest.raises(DomainError):
            OscillatorBasis(-0.1)
        with pytest.raises(DomainError):
            OscillatorBasis.from_gamma(1.2)

    def test_energies(self):
        assert gk_energy(0, OscillatorBasis(0.0)) == 3.0
        b = OscillatorBasis.from_gamma(2)
        assert gk_energy(2, b) == 12.0
        assert all(gk_energy(n + 1, b) - gk_energy(n, b) == 4.0 for n in range(10))
        with pytest.raises(ParameterError):
            gk_energy(-1, b)

    def test_wavefunction_values(self):
        b = OscillatorBasis.from_gamma(2)
        assert gk_wavefunction(0, b, 1.0) == pytest.approx(math.sqrt(2) * math.exp(-0.5), rel=1e-14)
        assert abs(gk_wavefunction(3, b, 1e-6)) < 1e-8
        with pytest.raises(DomainError):
            gk_wavefunction(0, b, 0.0)

    @pytest.mark.parametrize("g", [1.6, 2.0, 3.5])
    def test_normalised_by_quadrature(self, g):
        b = OscillatorBasis.from_gamma(g)
        for n in range(6):
            assert quad(lambda x: gk_wavefunction(n, b, x) ** 2) == pytest.approx(1.0, abs=1e-11)

    def test_overlap_values(self):
        b = OscillatorBasis.from_gamma(2.3)
        assert gk_overlap(3, 3, b) == pytest.approx(1.0, abs=1e-13)
        assert gk_overlap(2, 5, b) == pytest.approx(0.0, abs=1e-13)
        assert gk_overlap(0, 0, b) == 1.0

    @pytest.mark.parametrize("g", [1.6, 2.0, 3.5])
    def test_orthonormality_matrix(self, g):
        b = OscillatorBasis.from_gamma(g)
        M = np.array([[gk_overlap(n, m, b) for m in range(11)] for n in range(11)])
        assert np.max(np.abs(M - np.eye(11))) <= 1e-10


class TestSpikedElements:
    def test_ground_state_closed_form(self):
        b = OscillatorBasis.from_gamma(2)
        assert spiked_matrix_element(0, 0, b, 2.0) == pytest.approx(1.0, rel=1e-14)
        b = OscillatorBasis.from_gamma(2.6)
        assert rel_err(spiked_matrix_element(0, 0, b, 1.3), gamma(2.6 - 0.65) / gamma(2.6)) <= 1e-14

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_first_column(self, n):
        g, alpha = 2.4, 1.7
        b = OscillatorBasis.from_gamma(g)
        expected = ((-1) ** n * math.sqrt(pochhammer(g, n) / math.factorial(n)) * gamma(g - alpha / 2) / gamma(g)
                    * pochhammer(alpha / 2, n) / pochhammer(g, n))
        assert rel_err(spiked_matrix_element(n, 0, b, alpha), expected) <= 1e-13

    def test_references(self):
        assert rel_err(spiked_matrix_element(1, 1, OscillatorBasis.from_gamma(2), 1.0), REF_SPIKED_11) <= 1e-13
        assert rel_err(spiked_matrix_element(2, 4, OscillatorBasis.from_gamma(1.6), 1.5), REF_SPIKED_24) <= 1e-13

    def test_inverse_square_ground_state(self):
        assert spiked_matrix_element(0, 0, OscillatorBasis.from_gamma(2), 2.0) == pytest.approx(1.0, rel=1e-14)

    def test_vanishing_exponent_limit(self):
        b = OscillatorBasis.from_gamma(2.2)
        for n in range(6):
            for m in range(6):
                assert abs(spiked_matrix_element(n, m, b, 1e-8) - float(n == m)) <= 1e-6

    def test_symmetric(self, rng):
        for _ in range(20):
            g = rng.uniform(1.6, 3.5)
            alpha = rng.uniform(0.1, 3.0)
            n, m = (int(v) for v in rng.integers(0, 8, 2))
            b = OscillatorBasis.from_gamma(g)
            assert rel_err(spiked_matrix_element(n, m, b, alpha), spiked_matrix_element(m, n, b, alpha)) <= 1e-10

    @pytest.mark.parametrize("g", [1.6, 3.0])
    @pytest.mark.parametrize("alpha", [0.5, 3.0])
    def test_against_quadrature(self, g, alpha):
        b = OscillatorBasis.from_gamma(g)
        for n in range(6):
            for m in range(n, 6):
                q = quad(spiked_element_integrand(n, m, b, alpha))
                assert rel_err(spiked_matrix_element(n, m, b, alpha), q) <= 1e-8

    def test_divergent_exponent(self):
        with pytest.raises(DomainError):
            spiked_matrix_element(0, 0, OscillatorBasis.from_gamma(1.6), 3.5)


class TestKratzer:
    def test_coulomb_limit(self):
        for l in range(4):
            b = KratzerBasis(0.0, 2.0, l)
            assert b.s == l
            for n in range(5):
                assert kratzer_energy(n, b) == pytest.approx(-4.0 / (4 * (n + l + 1) ** 2), rel=1e-15)

    def test_energy_values(self):
        b = KratzerBasis(0.0, 2.0, 0)
        assert kratzer_energy(0, b) == -1.0
        assert kratzer_energy(1, b) == -0.25
        e = [kratzer_energy(n, KratzerBasis(1.3, 2.0, 1)) for n in range(8)]
        assert all(u < v < 0 for u, v in zip(e, e[1:]))

    def test_s_at_least_l(self):
        assert KratzerBasis(0.7, 1.0, 2).s > 2

    def test_normalisation(self):
        assert kratzer_normalization(0, KratzerBasis(0.0, 2.0, 0)) == pytest.approx(2.0, rel=1e-15)
        b = KratzerBasis(1.0, 2.0, 1)
        for n in range(5):
            assert kratzer_normalization(n, b) > 0
            scale = 2 * (n + b.s + 1) / b.B
            q = quad(lambda r: kratzer_wavefunction(n, b, r) ** 2 * r**2, scale)
            assert q == pytest.approx(1.0, abs=1e-11)

    def test_expectation_of_r(self):
        assert kratzer_matrix_element(0, 0, KratzerBasis(0.0, 2.0, 0), 1.0) == pytest.approx(1.5, rel=1e-14)

    def test_references(self):
        assert rel_err(kratzer_matrix_element(1, 0, KratzerBasis(0.0, 2.0, 0), 2.0), REF_KRATZER_10) <= 1e-13
        assert rel_err(kratzer_matrix_element(2, 3, KratzerBasis(1.0, 2.0, 0), 1.0), REF_KRATZER_23) <= 1e-12

    def test_symmetric(self, rng):
        for _ in range(20):
            b = KratzerBasis(rng.uniform(0, 2), rng.uniform(0.5, 3), int(rng.integers(0, 3)))
            alpha = rng.uniform(0.2, 3)
            n, m = (int(v) for v in rng.integers(0, 7, 2))
            assert rel_err(kratzer_matrix_element(n, m, b, alpha), kratzer_matrix_element(m, n, b, alpha)) <= 1e-10

    @pytest.mark.parametrize("A, B, l", [(0.0, 2.0, 0), (1.0, 2.0, 0), (0.0, 2.0, 1)])
    def test_orthonormality_matrix(self, A, B, l):
        b = KratzerBasis(A, B, l)
        M = np.array([[quad(kratzer_element_integrand(n, m, b), 2 * (11 + b.s) / B) for m in range(11)]
                      for n in range(11)])
        assert np.max(np.abs(M - np.eye(11))) <= 1e-10

    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_against_quadrature(self, alpha):
        b = KratzerBasis(1.0, 2.0, 0)
        for n in range(6):
            for m in range(n, 6):
                q = quad(kratzer_element_integrand(n, m, b, alpha), 2 * (6 + b.s) / b.B)
                assert rel_err(kratzer_matrix_element(n, m, b, alpha), q) <= 1e-8


class TestMatrixBlock:
    def test_single_entry(self):
        blk = build_perturbation_matrix(OscillatorBasis.from_gamma(2), 2.0, 1)
        assert blk.entries.shape == (1, 1) and blk.entries[0, 0] == pytest.approx(1.0, rel=1e-14)
        blk = build_perturbation_matrix(KratzerBasis(0.0, 2.0, 0), 1.0, 1)
        assert blk.entries[0, 0] == pytest.approx(1.5, rel=1e-14)

    def test_oscillator_block(self):
        g, alpha = 2.0, 1.0
        b = OscillatorBasis.from_gamma(g)
        blk = build_perturbation_matrix(b, alpha, 4)
        assert np.allclose(blk.entries, blk.entries.T, rtol=1e-10, atol=0)
        for n in range(1, 4):
            expected = ((-1) ** n * math.sqrt(pochhammer(g, n) / math.factorial(n)) * gamma(g - alpha / 2) / gamma(g)
                        * pochhammer(alpha / 2, n) / pochhammer(g, n))
            assert rel_err(blk.entries[n, 0], expected) <= 1e-12
        assert list(blk.rows())[1] == (0, 1, float(blk.entries[0, 1]))

    def test_kratzer_block_against_quadrature(self):
        b = KratzerBasis(0.0, 2.0, 0)
        blk = build_perturbation_matrix(b, 1.0, 3)
        for n in range(3):
            for m in range(3):
                q = quad(kratzer_element_integrand(n, m, b, 1.0), 2 * (3 + b.s) / b.B)
                assert rel_err(blk.entries[n, m], q) <= 1e-8

    def test_entries_read_only(self):
        blk = build_perturbation_matrix(OscillatorBasis.from_gamma(2), 1.0, 2)
        with pytest.raises(ValueError):
            blk.entries[0, 0] = 3.0
        with pytest.raises(ValueError):
            MatrixBlock(2, np.zeros((3, 3)), 1.0, {})

    def test_bad_size(self):
        with pytest.raises(ParameterError):
            build_perturbation_matrix(OscillatorBasis.from_gamma(2), 1.0, 0)

    def test_variational_reduces_to_unperturbed(self):
        b = OscillatorBasis.from_gamma(2.5)
        blk = build_perturbation_matrix(b, 1.0, 5)
        np.testing.assert_allclose(variational_eigenvalues(b, blk, 0.0), unperturbed_energies(b, 5))
        # a positive perturbation raises every Ritz value
        assert np.all(variational_eigenvalues(b, blk, 0.3) > unperturbed_energies(b, 5) - 1e-12)
