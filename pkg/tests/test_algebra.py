import numpy as np
import pytest
from hypothesis import given, strategies as st

from statemetric.algebra import (Algebra, DensityState, basis_state, hermitian_basis, maximally_mixed,
                                 numerical_radius, operator_norm, pair_state, quotient_norm, random_element,
                                 random_hermitian, random_state)
from statemetric.errors import InputError

from conftest import PAULI_X, PAULI_Y, PAULI_Z

seeds = st.integers(0, 2 ** 32 - 1)
dims = st.integers(1, 5)


def power_iteration_norm(a, iters=2000):
    # independent singular-value oracle
    m = a.conj().T @ a
    v = np.ones(a.shape[1], dtype=complex) / np.sqrt(a.shape[1])
    v = v + 0.1j * np.arange(a.shape[1])
    for _ in range(iters):
        v = m @ v
        v /= np.linalg.norm(v)
    return np.sqrt(np.real(v.conj() @ m @ v))


def test_operator_norm_examples():
    assert operator_norm(np.eye(2)) == pytest.approx(1.0)
    assert operator_norm([[0, 1], [0, 0]]) == pytest.approx(1.0)
    a = random_element(4, 7)
    assert abs(operator_norm(a) - power_iteration_norm(a)) <= 1e-10
    assert abs(operator_norm(a) - np.sqrt(np.linalg.eigvalsh(a.conj().T @ a)[-1])) <= 1e-10


def test_operator_norm_rejects_nonfinite():
    with pytest.raises(InputError):
        operator_norm([[np.nan, 0], [0, 1]])
    with pytest.raises(InputError):
        operator_norm(np.zeros((2, 3)))


@given(seeds, dims)
def test_norm_axioms(seed, n):
    a, b = random_element(n, [seed, 0]), random_element(n, [seed, 1])
    t = np.random.default_rng(seed).standard_normal() * 3
    assert operator_norm(a + b) <= operator_norm(a) + operator_norm(b) + 1e-10
    assert abs(operator_norm(t * a) - abs(t) * operator_norm(a)) <= 1e-10 * max(1, abs(t) * operator_norm(a))
    # C*-identity
    assert abs(operator_norm(a.conj().T @ a) - operator_norm(a) ** 2) <= 1e-10 * max(1, operator_norm(a) ** 2)


def test_block_norm_is_max_of_blocks():
    a = np.zeros((3, 3), dtype=complex)
    a[:2, :2] = [[1, 2], [0, 1]]
    a[2, 2] = 5
    assert operator_norm(a) == pytest.approx(5.0)


def test_pair_state_examples():
    mu = random_state(3, 0)
    assert pair_state(mu, np.eye(3)) == pytest.approx(1.0)
    assert pair_state(DensityState(np.diag([1.0, 0.0])), np.diag([3.0, 7.0])) == pytest.approx(3.0)
    assert pair_state(maximally_mixed(2), PAULI_Z) == pytest.approx(0.0)
    with pytest.raises(InputError):
        pair_state(mu, np.eye(2))


@given(seeds, dims)
def test_pair_state_adjoint(seed, n):
    mu = random_state(n, seed)
    a = random_element(n, seed + 1)
    assert pair_state(mu, a.conj().T) == pytest.approx(np.conj(pair_state(mu, a)), abs=1e-12)


@given(seeds, dims)
def test_pair_state_real_on_hermitian(seed, n):
    mu = random_state(n, seed)
    assert abs(pair_state(mu, random_hermitian(n, seed + 3)).imag) <= 1e-12


def test_density_state_validation():
    with pytest.raises(InputError):
        DensityState(np.array([[0.5, 1j], [0, 0.5]]))
    with pytest.raises(InputError):
        DensityState(np.diag([0.6, 0.6]))
    with pytest.raises(InputError):
        DensityState(np.diag([1.5, -0.5]))
    DensityState(np.diag([1.0, 0.0]))


def test_random_state_examples():
    assert np.array_equal(random_state(3, 5).rho, random_state(3, 5).rho)
    assert np.allclose(random_state(1, 0).rho, [[1.0]])
    for s in range(1000):
        rho = random_state(3, s).rho
        assert np.max(np.abs(rho - rho.conj().T)) <= 1e-12
        assert abs(np.trace(rho) - 1) <= 1e-12
        assert np.linalg.eigvalsh(rho)[0] >= -1e-12


def test_random_state_in_subalgebra():
    alg = Algebra((2, 1))
    mu = random_state(3, 1, alg)
    assert alg.contains(mu.rho)


@pytest.mark.parametrize("blocks", [(1,), (2,), (3,), (4,), (2, 1), (1, 1, 1), (2, 2)])
def test_hermitian_basis_orthonormal(blocks):
    alg = Algebra(blocks)
    hb = hermitian_basis(alg)
    n = alg.dim
    assert len(hb) == sum(k * k for k in blocks) - 1
    gram = np.einsum("aij,bji->ab", hb.elements, hb.elements).real / n
    assert np.max(np.abs(gram - np.eye(len(hb))), initial=0.0) <= 1e-12
    for b in hb.elements:
        assert abs(np.trace(b)) <= 1e-12
        assert np.max(np.abs(b - b.conj().T)) <= 1e-12
        assert alg.contains(b)


def test_hermitian_basis_pauli():
    hb = hermitian_basis(2)
    assert np.allclose(hb.elements, [PAULI_X, PAULI_Y, PAULI_Z])
    assert np.allclose(hb.coords_of(np.eye(2)), 0)
    assert np.allclose(hb.coords_of(PAULI_X), [1, 0, 0])


@given(seeds, st.integers(1, 5))
def test_coords_round_trip(seed, n):
    hb = hermitian_basis(n)
    a = random_hermitian(n, seed)
    back = hb.element_of(hb.coords_of(a))
    assert np.max(np.abs(back - (a - np.trace(a) / n * np.eye(n)))) <= 1e-12


def test_coords_reject_non_hermitian():
    with pytest.raises(InputError):
        hermitian_basis(2).coords_of([[0, 1], [0, 0]])


def test_quotient_norm():
    assert quotient_norm(np.diag([3.0, -1.0, 0.0])) == pytest.approx(2.0)
    assert quotient_norm(np.eye(3)) == pytest.approx(0.0)


def brute_numerical_radius(a, samples=200000, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((samples, a.shape[0])) + 1j * rng.standard_normal((samples, a.shape[0]))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.max(np.abs(np.einsum("si,ij,sj->s", v.conj(), a, v)))


def test_numerical_radius_examples():
    assert numerical_radius([[0, 1], [0, 0]]) == pytest.approx(0.5, abs=1e-6)
    assert numerical_radius(np.zeros((3, 3))) == 0.0
    h = random_hermitian(4, 2)
    assert numerical_radius(h) == pytest.approx(np.max(np.abs(np.linalg.eigvalsh(h))), abs=1e-9)
    with pytest.raises(InputError):
        numerical_radius(np.eye(2), samples=0)


def test_numerical_radius_against_vector_sampling():
    a = random_element(3, 4)
    w = numerical_radius(a)
    assert w >= brute_numerical_radius(a) - 1e-9
    assert w <= brute_numerical_radius(a) + 1e-2


@given(seeds, st.integers(1, 4))
def test_numerical_radius_bounds(seed, n):
    a = random_element(n, seed)
    w = numerical_radius(a, samples=32)
    assert w <= operator_norm(a) + 1e-10
    assert operator_norm(a) <= 2 * w + 1e-9


def test_numerical_radius_monotone_in_samples():
    a = random_element(4, 11)
    vals = [numerical_radius(a, samples=s) for s in (1, 2, 4, 8, 16, 32)]
    assert all(x <= y + 1e-15 for x, y in zip(vals, vals[1:]))


def test_basis_state():
    assert basis_state(3, 1)(np.diag([1.0, 2.0, 3.0])) == pytest.approx(2.0)
    with pytest.raises(InputError):
        basis_state(2, 2)
