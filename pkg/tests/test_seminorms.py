import numpy as np
import pytest
from hypothesis import given, strategies as st

from statemetric.algebra import hermitian_basis, operator_norm, random_element, random_hermitian
from statemetric.errors import ConstructionError, InputError
from statemetric.groups import (LengthFunction, LieGenerators, act, conjugation_invariance_check,
                                cyclic_group, word_length)
from statemetric.instances import (cyclic_commutative, fuzzy_sphere, fuzzy_torus, pauli_z_action,
                                   translation_action)
from statemetric.seminorms import (DiracSeminorm, LengthLipschitzSeminorm, LieSeminorm, build_dirac_matrix,
                                   dirac_commutator, dirac_seminorm, frame_derivatives, holder_seminorm,
                                   left_multiplication, length_lipschitz_seminorm, lie_seminorm,
                                   max_pencil_norm, scale_seminorm, seminorm_cut)

from conftest import PAULI_X, PAULI_Y, PAULI_Z

seeds = st.integers(0, 2 ** 32 - 1)


@pytest.fixture(scope="module")
def torus2():
    inst = fuzzy_torus(2)
    return inst, LengthLipschitzSeminorm(inst.action, inst.length)


@pytest.fixture(scope="module")
def sphere2():
    return fuzzy_sphere(2)


def bloch(x, y, z):
    return x * PAULI_X + y * PAULI_Y + z * PAULI_Z


def test_length_seminorm_closed_form(torus2):
    inst, L = torus2
    rng = np.random.default_rng(0)
    for x, y, z in rng.standard_normal((100, 3)):
        expected = 2 * max(np.hypot(y, z), np.hypot(x, y))
        assert L(bloch(x, y, z)) == pytest.approx(expected, abs=1e-12)


def test_length_seminorm_examples(torus2):
    inst, L = torus2
    assert L(np.eye(2)) == 0.0
    a = random_element(2, 3)
    assert L(3 * a) == pytest.approx(3 * L(a), rel=1e-14)
    assert length_lipschitz_seminorm(inst.action, inst.length, PAULI_Z) == pytest.approx(2.0)
    with pytest.raises(InputError):
        L(np.eye(3))


def seminorms_under_test():
    t3 = fuzzy_torus(3)
    s3 = fuzzy_sphere(3)
    c5 = cyclic_commutative(5)
    return [LengthLipschitzSeminorm(t3.action, t3.length),
            LengthLipschitzSeminorm(t3.action, t3.length, r=0.5),
            LengthLipschitzSeminorm(c5.action, c5.length),
            DiracSeminorm(s3.dirac),
            scale_seminorm(LengthLipschitzSeminorm(t3.action, t3.length), 2.5)]


SEMINORMS = seminorms_under_test()


@pytest.mark.parametrize("L", SEMINORMS, ids=lambda L: L.kind)
@given(seed=seeds)
def test_seminorm_invariants(L, seed):
    n = L.dim
    alg = L.algebra
    a, b = random_element(n, [seed, 1], alg), random_element(n, [seed, 2], alg)
    t = float(np.random.default_rng(seed).standard_normal())
    assert L(np.eye(n)) <= 1e-12
    assert L(a + b) <= L(a) + L(b) + 1e-9
    assert abs(L(t * a) - abs(t) * L(a)) <= 1e-9 * max(1.0, L(a))
    assert abs(L(a.conj().T) - L(a)) <= 1e-12 * max(1.0, L(a))


@pytest.mark.parametrize("L", [s for s in SEMINORMS if s.kind in ("length_lipschitz", "dirac")], ids=lambda L: L.kind)
@given(seed=seeds)
def test_leibniz(L, seed):
    n = L.dim
    a, b = random_element(n, [seed, 3], L.algebra), random_element(n, [seed, 4], L.algebra)
    assert L(a @ b) <= L(a) * operator_norm(b) + operator_norm(a) * L(b) + 1e-9


@pytest.mark.parametrize("L", SEMINORMS, ids=lambda L: L.kind)
def test_kernel_is_scalars(L):
    assert L.kernel_dimension(hermitian_basis(L.algebra)) == 0
    for b in hermitian_basis(L.algebra).elements:
        assert L(b) > 1e-8


def test_non_ergodic_kernel_and_warning():
    with pytest.warns(RuntimeWarning):
        L = LengthLipschitzSeminorm(pauli_z_action(), word_length(cyclic_group(2), [1]))
    assert L(PAULI_Z) == 0.0
    assert L.kernel_dimension(hermitian_basis(2)) == 1


def test_holder():
    inst = fuzzy_torus(2)
    L = LengthLipschitzSeminorm(inst.action, inst.length, warn=False)
    H1 = LengthLipschitzSeminorm(inst.action, inst.length, r=1.0, warn=False)
    for s in range(100):
        a = random_element(2, s)
        assert abs(H1(a) - L(a)) <= 1e-12
    # r = 1/2 on sigma_x: exhaustive max over the three non-identity elements
    u = inst.action.implementers
    brute = max(operator_norm(u[x] @ PAULI_X @ u[x].conj().T - PAULI_X) / inst.length.values[x] ** 0.5
                for x in (1, 2, 3))
    assert holder_seminorm(inst.action, inst.length, 0.5, PAULI_X) == pytest.approx(brute, abs=1e-14)
    assert holder_seminorm(inst.action, inst.length, 0.5, np.eye(2)) == 0.0
    for r in (0.0, -1.0, 1.5):
        with pytest.raises(InputError):
            holder_seminorm(inst.action, inst.length, r, PAULI_X)


def test_holder_below_lipschitz_when_length_at_most_one():
    # l <= 1 gives l^r >= l, so the Hoelder seminorm is the smaller one
    inst = fuzzy_torus(3)
    lf = LengthFunction(inst.length.group, inst.length.values / inst.length.values.max())
    L = LengthLipschitzSeminorm(inst.action, lf)
    H = LengthLipschitzSeminorm(inst.action, lf, r=0.5)
    for s in range(50):
        a = random_element(3, s)
        assert H(a) <= L(a) + 1e-12


def test_conjugation_invariant_length_gives_invariant_seminorm():
    from statemetric.groups import symmetric_group
    g = symmetric_group(3)
    lf = word_length(g, [g.index((1, 0, 2)), g.index((0, 2, 1)), g.index((2, 1, 0))])
    assert conjugation_invariance_check(lf)
    action = translation_action(g)
    L = LengthLipschitzSeminorm(action, lf)
    for s in range(20):
        a = random_element(6, s, action.algebra)
        for z in range(g.order):
            assert abs(L(act(action, z, a)) - L(a)) <= 1e-10


def dense_lie_sweep(mats, k=400):
    th, ph = np.meshgrid(np.linspace(0, np.pi, k), np.linspace(0, 2 * np.pi, 2 * k))
    y = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], -1).reshape(-1, 3)
    return np.max(np.linalg.svd(np.tensordot(y, mats, axes=1), compute_uv=False)[:, 0])


def test_lie_seminorm_examples(sphere2):
    gens = sphere2.lie
    assert lie_seminorm(gens, np.eye(2)) == 0.0
    assert lie_seminorm(gens, PAULI_Z) == pytest.approx(1.0, abs=1e-12)
    assert dense_lie_sweep(LieSeminorm(gens).terms(PAULI_Z)) == pytest.approx(1.0, abs=1e-5)
    ders = frame_derivatives(sphere2.dirac, PAULI_Z)
    assert np.allclose(ders[0], -PAULI_Y) and np.allclose(ders[1], PAULI_X) and np.allclose(ders[2], 0)


def test_lie_seminorm_lower_estimate_vs_sweep():
    gens = fuzzy_sphere(3).lie
    L = LieSeminorm(gens)
    for s in range(5):
        a = random_hermitian(3, s)
        est = L(a)
        sweep = dense_lie_sweep(L.terms(a), k=200)
        assert est >= sweep - 1e-9
        terms = L.terms(a)
        assert est <= np.sqrt(sum(operator_norm(t) ** 2 for t in terms)) + 1e-12


def test_lie_seminorm_circle_exact():
    gens = LieGenerators(np.array([-1j * np.diag([0.0, 1.0, 2.0])]))
    L = LieSeminorm(gens)
    assert L.exact
    a = random_element(3, 2)
    h = gens.generators[0]
    assert L(a) == pytest.approx(operator_norm(h @ a - a @ h), abs=1e-14)
    with pytest.raises(InputError):
        LieSeminorm(gens, budget=0)


def test_max_pencil_norm_ascent_not_below_samples():
    rng = np.random.default_rng(3)
    mats = rng.standard_normal((4, 3, 3)) + 1j * rng.standard_normal((4, 3, 3))
    val, y = max_pencil_norm(mats, budget=256)
    assert np.linalg.norm(y) == pytest.approx(1.0)
    assert val == pytest.approx(np.linalg.svd(np.tensordot(y, mats, axes=1), compute_uv=False)[0])
    ys = rng.standard_normal((2000, 4))
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)
    assert val >= np.max(np.linalg.svd(np.tensordot(ys, mats, axes=1), compute_uv=False)[:, 0]) - 1e-3


def test_dirac_commutator_examples(sphere2):
    dd = sphere2.dirac
    e = dd.clifford.e
    assert np.allclose(dirac_commutator(dd, np.eye(2)), 0)
    assert np.allclose(dirac_commutator(dd, PAULI_Z), np.kron(-PAULI_Y, e[0]) + np.kron(PAULI_X, e[1]))
    assert dirac_seminorm(dd, PAULI_Z) == pytest.approx(2.0, abs=1e-12)
    assert dirac_seminorm(dd, np.eye(2)) == 0.0
    a, b = random_element(2, 0), random_element(2, 1)
    assert np.max(np.abs(dirac_commutator(dd, a + b) - dirac_commutator(dd, a) - dirac_commutator(dd, b))) <= 1e-12
    with pytest.raises(InputError):
        dirac_commutator(dd, np.eye(3))


def test_dirac_sigma_z_square():
    # K^2 = 2I - 2 sz (x) sz for K = sx (x) sy - sy (x) sx
    k = np.kron(PAULI_X, PAULI_Y) - np.kron(PAULI_Y, PAULI_X)
    assert np.allclose(k @ k, 2 * np.eye(4) - 2 * np.kron(PAULI_Z, PAULI_Z))
    assert np.sqrt(np.max(np.linalg.eigvalsh(k @ k))) == pytest.approx(2.0)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sandwich(n):
    inst = fuzzy_sphere(n)
    dd = inst.dirac
    for s in range(40):
        a = random_element(n, [n, s])
        norms = [operator_norm(x) for x in frame_derivatives(dd, a)]
        ld = dirac_seminorm(dd, a)
        assert max(norms) <= ld + 1e-9
        assert ld <= sum(norms) + 1e-9


def test_sandwich_closed_form_point(sphere2):
    dd = sphere2.dirac
    norms = [operator_norm(x) for x in frame_derivatives(dd, PAULI_Z)]
    assert max(norms) == pytest.approx(1.0)
    assert dirac_seminorm(dd, PAULI_Z) == pytest.approx(2.0)
    assert sum(norms) == pytest.approx(2.0)


def lift(dd, t):
    # operator on C^n (x) S acting on the left factor of b in L^2(A) (x) S
    n, s = dd.n, dd.clifford.rep_dim
    full = np.einsum("iajb,kl->ikajlb", t.reshape(n, s, n, s), np.eye(n))
    return full.reshape(n * n * s, n * n * s)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dirac_matrix(n):
    dd = fuzzy_sphere(n).dirac
    d = build_dirac_matrix(dd)
    assert d.shape == (n * n * dd.clifford.rep_dim,) * 2
    assert np.max(np.abs(d - d.conj().T)) <= 1e-12
    for s in range(50 if n == 2 else 10):
        a = random_element(n, [n, 7, s])
        lam = left_multiplication(dd, a)
        assert np.max(np.abs(d @ lam - lam @ d - lift(dd, dirac_commutator(dd, a)))) <= 1e-10
    lam = left_multiplication(dd, 3 * np.eye(n))
    assert np.allclose(d @ lam - lam @ d, 0)


def test_dirac_matrix_sphere2_size(sphere2):
    assert build_dirac_matrix(sphere2.dirac).shape == (16, 16)


def test_dirac_matrix_requires_faithful_state(sphere2):
    from statemetric.algebra import basis_state
    with pytest.raises(ConstructionError):
        build_dirac_matrix(sphere2.dirac, basis_state(2, 0))


def subgradient_ok(L, basis, c, probes=100, seed=0):
    cut = seminorm_cut(L, basis, c)
    lin = L.linearize(basis)
    assert cut.normal @ c == pytest.approx(lin.evaluate(c), abs=1e-10)
    rng = np.random.default_rng(seed)
    for p in rng.standard_normal((probes, len(basis))):
        assert cut.normal @ p <= lin.evaluate(p) + 1e-9
    return cut


def test_seminorm_cut_length(torus2):
    _, L = torus2
    hb = hermitian_basis(2)
    c = np.array([0.3, -0.7, 0.4])
    cut = subgradient_ok(L, hb, c)
    assert cut.value == pytest.approx(L(hb.element_of(c)), abs=1e-10)


def test_seminorm_cut_dirac():
    inst = fuzzy_sphere(3)
    L = DiracSeminorm(inst.dirac)
    hb = hermitian_basis(3)
    subgradient_ok(L, hb, np.random.default_rng(1).standard_normal(8))


def test_seminorm_cut_scaled(torus2):
    _, L = torus2
    hb = hermitian_basis(2)
    c = np.array([0.1, 0.2, 0.9])
    base = seminorm_cut(L, hb, c)
    scaled = seminorm_cut(scale_seminorm(L, 3.0), hb, c)
    assert np.allclose(scaled.normal, 3 * base.normal)
    assert seminorm_cut(L, hb, np.zeros(3)) is None


def test_scale_seminorm(torus2):
    _, L = torus2
    a = random_element(2, 5)
    assert scale_seminorm(L, 1.0)(a) == L(a)
    assert scale_seminorm(L, 2.0)(PAULI_Z / 2) == pytest.approx(2.0)
    for t in (0.0, -1.0):
        with pytest.raises(InputError):
            scale_seminorm(L, t)
