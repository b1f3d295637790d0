import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from statemetric.algebra import basis_state, maximally_mixed, random_state
from statemetric.errors import InputError
from statemetric.groups import cyclic_group, product_group, word_length
from statemetric.oracles import (FiniteMetricSpace, bloch_bruteforce_m2, kantorovich_dual, kantorovich_lp,
                                 metric_from_length, torus_q2_closed_form)


def cyclic_space(n):
    g = cyclic_group(n)
    return metric_from_length(g, word_length(g, [1]))


def test_metric_from_length_examples():
    assert np.array_equal(cyclic_space(2).d, [[0, 1], [1, 0]])
    assert np.array_equal(cyclic_space(3).d, [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert np.array_equal(cyclic_space(4).d, [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])


def test_metric_is_right_invariant():
    g = product_group(cyclic_group(3), cyclic_group(2))
    lf = word_length(g, [g.index((1, 0)), g.index((0, 1))])
    d = metric_from_length(g, lf).d
    for w in range(g.order):
        yw = g.mul[np.arange(g.order), w]
        assert np.array_equal(d[np.ix_(yw, yw)], d)


def test_finite_metric_space_validation():
    with pytest.raises(InputError):
        FiniteMetricSpace(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(InputError):
        FiniteMetricSpace(np.array([[0.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(InputError):
        FiniteMetricSpace(np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float))
    with pytest.raises(InputError):
        FiniteMetricSpace(np.zeros((2, 3)))


def test_kantorovich_examples():
    z2, z3, z4 = cyclic_space(2), cyclic_space(3), cyclic_space(4)
    assert kantorovich_lp(z2, [1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-12)
    assert kantorovich_lp(z3, [1, 0, 0], np.ones(3) / 3) == pytest.approx(2 / 3, abs=1e-12)
    assert kantorovich_lp(z4, [1, 0, 0, 0], [0, 0, 1, 0]) == pytest.approx(2.0, abs=1e-12)
    # 0 -> 3 and 1 -> 2 are both neighbours
    assert kantorovich_lp(z4, [0.5, 0.5, 0, 0], [0, 0, 0.5, 0.5]) == pytest.approx(1.0, abs=1e-12)
    assert kantorovich_lp(z4, [0.25] * 4, [0.25] * 4) == 0.0
    with pytest.raises(InputError):
        kantorovich_lp(z3, [0.5, 0.5], [1, 0, 0])
    with pytest.raises(InputError):
        kantorovich_lp(z3, [0.5, 0.6, -0.1], [1, 0, 0])


@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(2, 6))
def test_primal_dual_agree(seed, n):
    space = cyclic_space(n)
    rng = np.random.default_rng(seed)
    mu, nu = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
    assert abs(kantorovich_lp(space, mu, nu) - kantorovich_dual(space, mu, nu)) <= 1e-9


@given(seed=st.integers(0, 2 ** 32 - 1))
def test_kantorovich_is_a_metric(seed):
    space = cyclic_space(5)
    rng = np.random.default_rng(seed)
    a, b, c = rng.dirichlet(np.ones(5), size=3)
    ab, bc, ac = kantorovich_lp(space, a, b), kantorovich_lp(space, b, c), kantorovich_lp(space, a, c)
    assert ac <= ab + bc + 1e-9
    assert ab == pytest.approx(kantorovich_lp(space, b, a), abs=1e-9)


def q2_seminorm():
    g = product_group(cyclic_group(2), cyclic_group(2))
    lf = word_length(g, [g.index((1, 0)), g.index((0, 1))])
    return torus_q2_closed_form(lf.values)


def test_bloch_oracle_pure_states():
    L = q2_seminorm()
    assert bloch_bruteforce_m2(L, basis_state(2, 0), basis_state(2, 1)) == pytest.approx(1.0, abs=1e-9)
    assert bloch_bruteforce_m2(L, basis_state(2, 0), basis_state(2, 0)) == 0.0


def test_bloch_oracle_resolution():
    L = q2_seminorm()
    mu, nu = random_state(2, 1), random_state(2, 2)
    coarse = bloch_bruteforce_m2(L, mu, nu, resolution=32, refine=False)
    fine = bloch_bruteforce_m2(L, mu, nu, resolution=64, refine=False)
    assert fine >= coarse - 1e-15
    r1 = bloch_bruteforce_m2(L, mu, nu, resolution=128)
    r2 = bloch_bruteforce_m2(L, mu, nu, resolution=256)
    assert abs(r2 - r1) < 1e-4


def test_bloch_oracle_scalar_callable():
    def L(x, y, z):
        # rejects arrays, so the oracle has to fall back to pointwise calls
        return 2 * max(math.hypot(y, z), math.hypot(x, y), math.hypot(x, z))
    mu, nu = basis_state(2, 0), maximally_mixed(2)
    assert bloch_bruteforce_m2(L, mu, nu, resolution=16) == pytest.approx(0.5, abs=1e-8)


def test_bloch_oracle_rejects_other_dimensions():
    with pytest.raises(InputError):
        bloch_bruteforce_m2(q2_seminorm(), basis_state(3, 0), basis_state(3, 1))
