"""Standard ergodic (and a few non-ergodic) test instances."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra
from .groups import (FiniteGroup, LengthFunction, LieGenerators, UnitaryImplementedAction,
                     cyclic_group, product_group, torus_embedding_length, trivial_group, word_length)
from .seminorms import DiracData, dirac_data


def clock_and_shift(q: int):
    omega = np.exp(2j * np.pi / q)
    clock = np.diag(omega ** np.arange(q))
    shift = np.roll(np.eye(q, dtype=complex), 1, axis=0)
    return clock, shift


def weyl_action(q: int) -> UnitaryImplementedAction:
    """``Z_q x Z_q`` on ``M_q``: element ``(m, n)`` acts by conjugation with ``S^m C^n``.

    For ``q = 2`` the shift is ``sigma_x`` and the clock is ``sigma_z``.
    """
    group = product_group(cyclic_group(q), cyclic_group(q))
    clock, shift = clock_and_shift(q)
    mp = np.linalg.matrix_power
    u = np.array([mp(shift, m) @ mp(clock, n) for m in range(q) for n in range(q)])
    return UnitaryImplementedAction(group, Algebra.full(q), u, cocycle_tolerant=True)


def torus_word_length(group: FiniteGroup, q: int) -> LengthFunction:
    return word_length(group, [group.index((1, 0)), group.index((0, 1))])


def translation_action(group: FiniteGroup) -> UnitaryImplementedAction:
    """``C(G)`` as diagonal matrices; ``x`` acts by the permutation ``e_y -> e_{xy}``."""
    n = group.order
    u = np.zeros((n, n, n), dtype=complex)
    for x in range(n):
        u[x, group.mul[x], np.arange(n)] = 1
    return UnitaryImplementedAction(group, Algebra.diagonal(n), u, cocycle_tolerant=False)


def pauli_z_action() -> UnitaryImplementedAction:
    return UnitaryImplementedAction(cyclic_group(2), Algebra.full(2),
                                    np.array([np.eye(2), np.diag([1.0, -1.0])]))


def trivial_action(n: int = 2) -> UnitaryImplementedAction:
    return UnitaryImplementedAction(trivial_group(), Algebra.full(n), np.eye(n)[None])


def spin_matrices(n: int):
    """``(J_x, J_y, J_z)`` of the ``n``-dimensional irreducible representation of su(2)."""
    j = (n - 1) / 2
    m = j - np.arange(n)
    jp = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        jp[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / 2j
    jz = np.diag(m).astype(complex)
    return jx, jy, jz


def fuzzy_sphere_generators(n: int, metric=None) -> LieGenerators:
    """``X_j = -i J_j``: the adjoint action of SU(2) on ``M_n``; for ``n = 2``, ``X_j = -(i/2) sigma_j``."""
    return LieGenerators(np.array([-1j * s for s in spin_matrices(n)]), metric)


@dataclass
class Instance:
    """An algebra together with the symmetry data needed to build seminorms."""

    kind: str
    algebra: Algebra
    action: UnitaryImplementedAction | None = None
    length: LengthFunction | None = None
    lie: LieGenerators | None = None
    dirac: DiracData | None = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.algebra.dim


def fuzzy_torus(q: int, length: str = "word", weights=(1.0, 1.0)) -> Instance:
    action = weyl_action(q)
    if length == "word":
        lf = torus_word_length(action.group, q)
    elif length == "torus":
        lf = torus_embedding_length(q, weights, group=action.group)
    else:
        raise ValueError(f"unknown torus length {length!r}")
    return Instance("fuzzy_torus", action.algebra, action=action, length=lf,
                    params={"q": q, "length": length, "weights": list(map(float, weights))})


def fuzzy_sphere(n: int, metric=None) -> Instance:
    gens = fuzzy_sphere_generators(n, metric)
    return Instance("fuzzy_sphere", gens.algebra, lie=gens, dirac=dirac_data(gens), params={"n": n})


def commutative(group: FiniteGroup, length: LengthFunction) -> Instance:
    action = translation_action(group)
    return Instance("commutative", action.algebra, action=action, length=length,
                    params={"group": group.name, "order": group.order})


def cyclic_commutative(n: int) -> Instance:
    g = cyclic_group(n)
    return commutative(g, word_length(g, [1]))
