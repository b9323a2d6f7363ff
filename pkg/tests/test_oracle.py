"""Unit tests for the truncated-Fock brute-force referee."""

import itertools
import math

import numpy as np
import pytest

from bogofock import (
    Displacement,
    ResourceLimitError,
    Rotation,
    ShapeError,
    Squeezing,
    TruncationRiskError,
    elementary_matrix,
    ladder_matrices,
    oracle_element,
    oracle_quadrature_element,
    transform_matrix,
    unitarity_leakage,
)


class TestLadders:
    def test_single_mode_matrix(self):
        (a,) = ladder_matrices(1, 3)
        expected = np.array([[0, 1, 0], [0, 0, np.sqrt(2)], [0, 0, 0]])
        np.testing.assert_allclose(a, expected)

    def test_commutator_has_corner_artifact(self):
        """[a, adag] = diag(1, ..., 1, -(d-1)) on the truncated space."""
        (a,) = ladder_matrices(1, 3)
        comm = a @ a.conj().T - a.conj().T @ a
        np.testing.assert_allclose(comm, np.diag([1.0, 1.0, -2.0]), atol=1e-14)

    def test_cross_mode_commutator_vanishes(self):
        a1, a2 = ladder_matrices(2, 4)
        comm = a1 @ a2.conj().T - a2.conj().T @ a1
        assert np.max(np.abs(comm)) == 0.0

    def test_cutoff_too_small(self):
        with pytest.raises(ValueError, match="cutoff"):
            ladder_matrices(1, 1)

    def test_dense_cap(self):
        with pytest.raises(ResourceLimitError):
            ladder_matrices(4, 16)


class TestElementaryMatrices:
    def test_displacement_column_is_coherent_state(self):
        t = 0.6 - 0.3j
        op = elementary_matrix(Displacement([t]), 24)
        for k in range(6):
            expected = np.exp(-abs(t) ** 2 / 2) * t ** k / math.sqrt(math.factorial(k))
            assert op.matrix[k, 0] == pytest.approx(expected, abs=1e-12)

    def test_rotation_is_number_phase(self):
        theta = 0.7
        op = elementary_matrix(Rotation([[np.exp(1j * theta)]]), 8)
        for k in range(8):
            assert op.matrix[k, k] == pytest.approx(np.exp(1j * k * theta), abs=1e-12)
        off = op.matrix - np.diag(np.diag(op.matrix))
        assert np.max(np.abs(off)) <= 1e-12

    def test_zero_squeezing_is_identity(self):
        op = elementary_matrix(Squeezing([0.0]), 6)
        np.testing.assert_allclose(op.matrix, np.eye(6), atol=1e-14)

    def test_squeeze_guard(self):
        with pytest.raises(TruncationRiskError):
            elementary_matrix(Squeezing([1.2]), 16)
        # explicit opt-out builds anyway
        op = elementary_matrix(Squeezing([1.2]), 16, guard=False)
        assert op.matrix.shape == (16, 16)

    def test_squeezed_vacuum_two_photon_sign(self):
        """The (2, 0) element of exp(r(adag^2 - a^2)/2) is positive for r > 0."""
        r = 0.4
        op = elementary_matrix(Squeezing([r]), 30)
        expected = np.tanh(r) / np.sqrt(2) / np.sqrt(np.cosh(r))
        assert op.matrix[2, 0] == pytest.approx(expected, abs=1e-12)


class TestTransformMatrix:
    def test_single_displacement_vacuum(self):
        t = 0.8
        op = transform_matrix([Displacement([t])], 20)
        assert oracle_element(op, [0], [0]) == pytest.approx(np.exp(-t ** 2 / 2), abs=1e-12)

    def test_squeeze_unsqueeze_identity_on_low_subspace(self):
        cutoff = 30
        op = transform_matrix([Squeezing([0.5]), Squeezing([-0.5])], cutoff)
        for m in range(cutoff // 2):
            for n in range(cutoff // 2):
                expected = 1.0 if m == n else 0.0
                assert op.matrix[m, n] == pytest.approx(expected, abs=1e-10)

    def test_empty_product_is_identity(self):
        op = transform_matrix([], 5, n_modes=1)
        np.testing.assert_allclose(op.matrix, np.eye(5))

    def test_empty_needs_modes(self):
        with pytest.raises(ValueError, match="n_modes"):
            transform_matrix([], 5)

    def test_expm_inverse_pair_displacement(self):
        """exp(G) exp(-G) recovers the identity on the low-photon subspace."""
        t = 0.7 + 0.2j
        op = transform_matrix([Displacement([t]), Displacement([-t])], 24)
        low = op.matrix[:8, :8]
        np.testing.assert_allclose(low, np.eye(8), atol=1e-10)


class TestOracleElements:
    def test_identity_kronecker(self):
        op = transform_matrix([], 4, n_modes=2)
        for m in itertools.product(range(3), repeat=2):
            for n in itertools.product(range(3), repeat=2):
                expected = 1.0 if m == n else 0.0
                assert oracle_element(op, m, n) == pytest.approx(expected)

    def test_out_of_range_rejected(self):
        op = transform_matrix([], 4, n_modes=1)
        with pytest.raises(IndexError):
            oracle_element(op, [4], [0])

    def test_squeezed_vacuum_odd_element_zero(self):
        op = transform_matrix([Squeezing([0.7])], 24)
        assert abs(oracle_element(op, [1], [0])) <= 1e-12

    def test_convergence_in_cutoff(self):
        """Elements are stable to 1e-9 against a cutoff increase of 4."""
        ops = [Displacement([0.5 - 0.5j]), Squeezing([0.6])]
        coarse = transform_matrix(ops, 32)
        fine = transform_matrix(ops, 36)
        for m in range(5):
            for n in range(5):
                a = oracle_element(coarse, [m], [n])
                b = oracle_element(fine, [m], [n])
                assert abs(a - b) <= 1e-9

    def test_unitarity_leakage_low_columns(self):
        ops = [Displacement([0.4]), Squeezing([0.5])]
        op = transform_matrix(ops, 30)
        assert unitarity_leakage(op, max_total=10) <= 1e-8


class TestOracleQuadrature:
    def test_vacuum_second_moment(self):
        op = transform_matrix([], 10, n_modes=1)
        assert oracle_quadrature_element(op, [0], [0], [2], "position") == pytest.approx(0.5)
        assert oracle_quadrature_element(op, [0], [0], [2], "momentum") == pytest.approx(0.5)

    def test_single_photon_overlap(self):
        op = transform_matrix([], 10, n_modes=1)
        assert oracle_quadrature_element(op, [1], [0], [1], "position") == pytest.approx(
            1 / np.sqrt(2)
        )
        assert oracle_quadrature_element(op, [1], [0], [1], "momentum") == pytest.approx(
            1j / np.sqrt(2)
        )

    def test_zero_powers_match_element(self):
        op = transform_matrix([Displacement([0.3])], 12)
        a = oracle_quadrature_element(op, [2], [1], [0], "position")
        assert a == oracle_element(op, [2], [1])

    def test_headroom_check(self):
        op = transform_matrix([], 6, n_modes=1)
        with pytest.raises(IndexError):
            oracle_quadrature_element(op, [0], [4], [2], "position")
