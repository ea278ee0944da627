"""Dense Hermitian primitives: eigensolver, operator powers, traces."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qleak.errors import DimensionMismatch, ValidationError
from qleak.linalg import (
    DensityOperator,
    HermitianOperator,
    eig_hermitian,
    kron,
    operator_power,
    partial_trace,
    random_density,
    random_unitary,
    support_contained,
    trace_distance,
    von_neumann_entropy,
)


def _random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2.0


@settings(deadline=None, max_examples=60)
@given(dim=st.integers(1, 6), seed=st.integers(0, 10**6))
def test_eigendecomposition_reconstructs(dim, seed):
    h = _random_hermitian(dim, seed)
    spec = eig_hermitian(HermitianOperator(h))
    w, v = spec.eigenvalues, spec.eigenvectors
    assert np.allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-9)
    assert np.allclose(v.conj().T @ v, np.eye(dim), atol=1e-10)
    assert np.all(np.diff(w) >= -1e-12)


def test_eigendecomposition_of_diagonal_is_sorted_diagonal():
    spec = eig_hermitian(HermitianOperator(np.diag([3.0, -1.0, 2.0])))
    assert np.allclose(spec.eigenvalues, [-1.0, 2.0, 3.0])
    assert spec.min == -1.0 and spec.max == 3.0


def test_hermitian_operator_rejects_bad_shapes():
    with pytest.raises(DimensionMismatch):
        HermitianOperator(np.zeros((2, 3)))
    with pytest.raises(ValidationError):
        HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_density_operator_validation():
    with pytest.raises(ValidationError):
        DensityOperator.from_matrix(np.diag([0.5, 0.4]))
    with pytest.raises(ValidationError):
        DensityOperator.from_matrix(np.diag([1.5, -0.5]))
    rho = DensityOperator.from_matrix(np.diag([0.5, 0.5]))
    assert rho.dim == 2


def test_pure_state_normalises_and_rejects_zero():
    rho = DensityOperator.pure([2.0, 0.0])
    assert np.allclose(rho.mat, np.diag([1.0, 0.0]))
    with pytest.raises(ValidationError):
        DensityOperator.pure([0.0, 0.0])


def test_operator_power_square_root_and_inverse():
    h = HermitianOperator(np.diag([4.0, 9.0]))
    assert np.allclose(operator_power(h, 0.5).mat, np.diag([2.0, 3.0]))
    assert np.allclose(operator_power(h, -1.0).mat, np.diag([0.25, 1.0 / 9.0]))


def test_operator_power_uses_support_for_negative_exponents():
    h = HermitianOperator(np.diag([2.0, 0.0]))
    inv = operator_power(h, -1.0).mat
    assert np.allclose(inv, np.diag([0.5, 0.0]))
    root = operator_power(h, -0.5).mat
    assert np.allclose(root @ root, np.diag([0.5, 0.0]))


@settings(deadline=None, max_examples=30)
@given(dim=st.integers(2, 5), seed=st.integers(0, 10**6))
def test_operator_power_matches_spectral_definition(dim, seed):
    rho = random_density(dim, dim, seed)
    half = operator_power(HermitianOperator(rho.mat), 0.5).mat
    assert np.allclose(half @ half, rho.mat, atol=1e-10)


def test_support_containment():
    ket0 = DensityOperator.pure([1.0, 0.0])
    assert support_contained(ket0, DensityOperator.from_matrix(np.diag([0.7, 0.3])))
    assert not support_contained(
        DensityOperator.from_matrix(np.diag([0.7, 0.3])), ket0
    )
    assert support_contained(ket0, ket0)


def test_partial_trace_of_product_factors():
    a = _random_hermitian(2, 1)
    b = _random_hermitian(3, 2)
    prod = kron(HermitianOperator(a), HermitianOperator(b))
    left = partial_trace(prod, (2, 3), 1)
    right = partial_trace(prod, (2, 3), 0)
    assert np.allclose(left.mat, a * np.trace(b).real, atol=1e-12)
    assert np.allclose(right.mat, b * np.trace(a).real, atol=1e-12)


def test_trace_distance_extremes():
    ket0 = DensityOperator.pure([1.0, 0.0])
    ket1 = DensityOperator.pure([0.0, 1.0])
    assert trace_distance(ket0, ket1) == pytest.approx(2.0, abs=1e-12)
    assert trace_distance(ket0, ket0) == pytest.approx(0.0, abs=1e-12)


def test_von_neumann_entropy_known_values():
    assert von_neumann_entropy(DensityOperator.maximally_mixed(4)) == pytest.approx(2.0)
    assert von_neumann_entropy(DensityOperator.pure([1.0, 0.0])) == pytest.approx(
        0.0, abs=1e-12
    )
    rho = DensityOperator.from_matrix(np.diag([0.75, 0.25]))
    expect = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
    assert von_neumann_entropy(rho) == pytest.approx(expect, abs=1e-12)


def test_random_density_rank_and_determinism():
    rho = random_density(4, 2, seed=7)
    w = eig_hermitian(rho.op).eigenvalues
    assert np.sum(w > 1e-9) == 2
    assert abs(float(np.sum(w)) - 1.0) < 1e-9
    again = random_density(4, 2, seed=7)
    assert np.array_equal(rho.mat, again.mat)
    other = random_density(4, 2, seed=8)
    assert not np.allclose(rho.mat, other.mat)


def test_random_unitary_is_unitary_and_seeded():
    u = random_unitary(5, seed=3)
    assert np.allclose(u.conj().T @ u, np.eye(5), atol=1e-10)
    assert np.array_equal(u, random_unitary(5, seed=3))


def test_unitary_conjugation_preserves_spectrum():
    h = _random_hermitian(4, 11)
    u = random_unitary(4, seed=4)
    before = eig_hermitian(HermitianOperator(h)).eigenvalues
    after = eig_hermitian(HermitianOperator(u @ h @ u.conj().T)).eigenvalues
    assert np.allclose(before, after, atol=1e-9)
