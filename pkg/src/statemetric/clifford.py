"""Complex Clifford algebra generators and their spinor representation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import dagger
from .errors import ConstructionError, InputError

CLIFFORD_TOL = 1e-12

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def euclidean_gammas(m: int) -> list[np.ndarray]:
    """Hermitian ``g_j`` with ``g_j g_k + g_k g_j = 2 delta_jk``, irreducible, size ``2^(m//2)``."""
    if m < 1:
        raise InputError("m must be >= 1")
    if m == 1:
        return [np.ones((1, 1), dtype=complex)]
    gam = [_SX, _SY]
    while len(gam) + 2 <= m:
        eye = np.eye(gam[0].shape[0], dtype=complex)
        gam = [np.kron(_SX, g) for g in gam] + [np.kron(_SY, eye), np.kron(_SZ, eye)]
    if len(gam) < m:
        # odd m: append the chirality element
        top = gam[0]
        for g in gam[1:]:
            top = top @ g
        if np.allclose(top @ top, -np.eye(top.shape[0])):
            top = -1j * top
        gam.append(top)
    return gam


@dataclass(frozen=True, eq=False)
class CliffordGenerators:
    """Skew-adjoint ``e_j`` with ``e_j^2 = -1`` and pairwise anticommutation."""

    e: np.ndarray = field(repr=False)
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        e = np.asarray(self.e, dtype=complex)
        if e.ndim != 3 or e.shape[1] != e.shape[2]:
            raise InputError("generators must be an (m, s, s) array")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "e", e)
        if self.check:
            res = clifford_residuals(self)
            bad = {k: v for k, v in res.items() if v > CLIFFORD_TOL}
            if bad:
                raise ConstructionError(f"Clifford relations fail: {bad}")

    @property
    def m(self) -> int:
        return self.e.shape[0]

    @property
    def rep_dim(self) -> int:
        return self.e.shape[1]


def clifford_generators(m: int, metric=None) -> CliffordGenerators:
    """Generators for an orthonormal frame of ``(g', metric)`` on a faithful spinor module.

    Even ``m``: the irreducible ``2^(m/2)``-dimensional representation. Odd ``m``:
    the direct sum of the two inequivalent irreducibles (all generators negated on
    the second block), which is faithful.
    """
    if m < 1:
        raise InputError("m must be >= 1")
    if metric is not None:
        g = np.asarray(metric, dtype=float)
        if g.shape != (m, m) or not np.allclose(g, g.T) or np.linalg.eigvalsh(g)[0] <= 0:
            raise ConstructionError("metric must be symmetric positive definite")
    gam = euclidean_gammas(m)
    if m % 2 == 0:
        e = [1j * g for g in gam]
    else:
        k = gam[0].shape[0]
        z = np.zeros((k, k), dtype=complex)
        e = [np.block([[1j * g, z], [z, -1j * g]]) for g in gam]
    return CliffordGenerators(np.array(e))


def clifford_products(cg: CliffordGenerators) -> np.ndarray:
    """The ``2^m`` ordered products of distinct generators (empty product = identity)."""
    s = cg.rep_dim
    out = []
    for r in range(cg.m + 1):
        for idx in itertools.combinations(range(cg.m), r):
            p = np.eye(s, dtype=complex)
            for j in idx:
                p = p @ cg.e[j]
            out.append(p)
    return np.array(out)


def clifford_residuals(cg: CliffordGenerators) -> dict[str, float]:
    """Max-abs residuals of each defining relation, plus faithfulness rank deficit."""
    e = cg.e
    ident = np.eye(cg.rep_dim)
    skew = float(np.max(np.abs(dagger(e) + e), initial=0.0))
    square = float(np.max(np.abs(e @ e + ident), initial=0.0))
    anti = 0.0
    for j, k in itertools.combinations(range(cg.m), 2):
        anti = max(anti, float(np.max(np.abs(e[j] @ e[k] + e[k] @ e[j]))))
    prods = clifford_products(cg).reshape(2 ** cg.m, -1)
    rank = np.linalg.matrix_rank(prods, tol=1e-8)
    return {"skew": skew, "square": square, "anticommute": anti,
            "faithfulness_deficit": float(2 ** cg.m - rank)}


def auxiliary_projections(cg: CliffordGenerators):
    """``f_j = i e_j``, ``p_j = (1 + f_j)/2``, ``q_j = 1 - p_j``."""
    ident = np.eye(cg.rep_dim)
    f = 1j * cg.e
    p = (ident + f) / 2
    q = ident - p
    return f, p, q
