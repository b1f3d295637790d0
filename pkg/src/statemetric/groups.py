"""Finite groups acting by conjugation, length functions, and Lie generators."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import expm, sqrtm

from .algebra import Algebra, as_matrix, dagger, hermitian_basis, operator_norm
from .errors import ConstructionError, InputError

UNITARY_TOL = 1e-12
ACTION_LAW_TOL = 1e-10
ERGODIC_TOL = 1e-10
SKEW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Finite group given by its multiplication table ``mul[x, y] = x*y``."""

    mul: np.ndarray = field(repr=False)
    labels: tuple = ()
    name: str = ""

    def __post_init__(self):
        mul = np.asarray(self.mul)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] < 1:
            raise InputError(f"group table must be square and non-empty, got shape {mul.shape}")
        if not np.issubdtype(mul.dtype, np.integer):
            if not np.all(np.equal(np.mod(mul, 1), 0)):
                raise InputError("group table entries must be integers")
            mul = mul.astype(int)
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            raise InputError("group table entries out of range")
        r = np.arange(n)
        if not np.array_equal(mul[mul[:, :, None], r[None, None, :]],
                              mul[r[:, None, None], mul[None, :, :]]):
            raise InputError("group table is not associative")
        ids = [e for e in range(n)
               if np.array_equal(mul[e], np.arange(n)) and np.array_equal(mul[:, e], np.arange(n))]
        if len(ids) != 1:
            raise InputError("group table has no two-sided identity")
        e = ids[0]
        inv = np.full(n, -1)
        for x in range(n):
            hits = np.flatnonzero(mul[x] == e)
            if len(hits) != 1 or mul[hits[0], x] != e:
                raise InputError(f"element {x} has no two-sided inverse")
            inv[x] = hits[0]
        mul = mul.copy()
        mul.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "_identity", int(e))
        object.__setattr__(self, "_inv", inv)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def inv(self) -> np.ndarray:
        return self._inv

    def index(self, label) -> int:
        return self.labels.index(label)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))


def cyclic_group(n: int) -> FiniteGroup:
    r = np.arange(n)
    return FiniteGroup((r[:, None] + r[None, :]) % n, name=f"Z{n}")


def product_group(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Direct product; element ``(x, y)`` has index ``x * |h| + y``."""
    a, b = g.order, h.order
    mul = np.empty((a * b, a * b), dtype=int)
    for (x1, y1), (x2, y2) in itertools.product(itertools.product(range(a), range(b)), repeat=2):
        mul[x1 * b + y1, x2 * b + y2] = g.mul[x1, x2] * b + h.mul[y1, y2]
    labels = tuple((lx, ly) for lx in g.labels for ly in h.labels)
    return FiniteGroup(mul, labels=labels, name=f"{g.name}x{h.name}")


def symmetric_group(k: int) -> FiniteGroup:
    """S_k acting on {0..k-1}; labels are image tuples, product is composition ``(p*q)(i) = p(q(i))``."""
    perms = list(itertools.permutations(range(k)))
    pos = {p: i for i, p in enumerate(perms)}
    mul = np.array([[pos[tuple(p[q[i]] for i in range(k))] for q in perms] for p in perms])
    return FiniteGroup(mul, labels=tuple(perms), name=f"S{k}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=int), name="trivial")


@dataclass(frozen=True, eq=False)
class LengthFunction:
    group: FiniteGroup
    values: np.ndarray = field(repr=False)
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.group.order,):
            raise InputError(f"need {self.group.order} length values, got shape {vals.shape}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.check and not verify_length_function(self):
            raise ConstructionError("values violate the length-function axioms")

    def __getitem__(self, x: int) -> float:
        return float(self.values[x])

    def scaled(self, t: float) -> "LengthFunction":
        return LengthFunction(self.group, t * self.values)

    def mean(self) -> float:
        return float(self.values.mean())


def length_function_violations(lf: LengthFunction) -> list[str]:
    g, v = lf.group, lf.values
    scale = max(1.0, float(np.max(np.abs(v), initial=0.0)))
    tol = 1e-12 * scale
    out = []
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        out.append("values must be finite and nonnegative")
    if np.any(v[g.mul] > v[:, None] + v[None, :] + tol):
        out.append("subadditivity l(xy) <= l(x) + l(y) fails")
    if np.any(np.abs(v[g.inv] - v) > tol):
        out.append("symmetry l(x^-1) = l(x) fails")
    zero = np.abs(v) <= tol
    if not zero[g.identity] or zero.sum() != 1:
        out.append("l(x) = 0 must hold exactly at the identity")
    return out


def verify_length_function(lf: LengthFunction) -> bool:
    return not length_function_violations(lf)


def word_length(group: FiniteGroup, generators: Sequence[int]) -> LengthFunction:
    """Word length with respect to a generating set (closed under inverses automatically)."""
    gens = set(generators) | {int(group.inv[s]) for s in generators}
    dist = np.full(group.order, -1)
    dist[group.identity] = 0
    queue = deque([group.identity])
    while queue:
        x = queue.popleft()
        for s in sorted(gens):
            y = group.mul[x, s]
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    if np.any(dist < 0):
        raise ConstructionError("generators do not generate the group")
    return LengthFunction(group, dist.astype(float))


def length_from_representation(group: FiniteGroup, rep) -> LengthFunction:
    """``l(x) = ||pi_x - pi_e||`` for a faithful unitary representation ``pi``."""
    mats = np.asarray(rep, dtype=complex)
    if mats.ndim != 3 or mats.shape[0] != group.order:
        raise InputError("need one matrix per group element")
    d = mats.shape[1]
    ident = np.eye(d)
    for x in range(group.order):
        if np.max(np.abs(mats[x] @ dagger(mats[x]) - ident)) > UNITARY_TOL:
            raise ConstructionError(f"pi({x}) is not unitary")
        for y in range(group.order):
            if np.max(np.abs(mats[x] @ mats[y] - mats[group.mul[x, y]])) > 1e-10:
                raise ConstructionError("pi is not a representation")
    vals = np.array([operator_norm(mats[x] - ident) for x in range(group.order)])
    if np.sum(vals <= 1e-12) != 1:
        raise ConstructionError("representation is not faithful")
    return LengthFunction(group, vals)


def torus_embedding_length(q: int, weights=(1.0, 1.0), group: FiniteGroup | None = None) -> LengthFunction:
    """Restriction to ``Z_q x Z_q`` of the flat weighted geodesic length on the 2-torus."""
    if q < 2:
        raise InputError("q must be >= 2")
    w1, w2 = (float(w) for w in weights)
    if w1 <= 0 or w2 <= 0:
        raise InputError("weights must be positive")
    group = group or product_group(cyclic_group(q), cyclic_group(q))
    step = 2 * np.pi / q
    vals = [w1 * step * min(m, q - m) + w2 * step * min(n, q - n) for m in range(q) for n in range(q)]
    return LengthFunction(group, np.array(vals))


def conjugation_invariance_check(lf: LengthFunction) -> bool:
    g, v = lf.group, lf.values
    x = np.arange(g.order)
    for z in range(g.order):
        conj = g.mul[g.mul[z, x], g.inv[z]]
        if np.any(np.abs(v[conj] - v) > 1e-12 * max(1.0, v.max())):
            return False
    return True


@dataclass(frozen=True, eq=False)
class UnitaryImplementedAction:
    """``alpha_x(a) = U_x a U_x^*``; projective implementers allowed when ``cocycle_tolerant``."""

    group: FiniteGroup
    algebra: Algebra
    implementers: np.ndarray = field(repr=False)
    cocycle_tolerant: bool = True

    def __post_init__(self):
        u = np.asarray(self.implementers, dtype=complex)
        n = self.algebra.dim
        if u.shape != (self.group.order, n, n):
            raise InputError(f"implementers must have shape {(self.group.order, n, n)}, got {u.shape}")
        if not np.all(np.isfinite(u)):
            raise InputError("implementers have non-finite entries")
        ident = np.eye(n)
        if np.max(np.abs(u @ dagger(u) - ident)) > UNITARY_TOL:
            raise ConstructionError("implementers are not unitary")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "implementers", u)
        basis = hermitian_basis(self.algebra).elements
        for x in range(self.group.order):
            moved = u[x] @ basis @ dagger(u[x])
            if np.max(np.abs(moved[:, ~self.algebra.mask]), initial=0.0) > ACTION_LAW_TOL:
                raise ConstructionError(f"U_{x} does not preserve the algebra")
        for x, y in itertools.product(range(self.group.order), repeat=2):
            xy = self.group.mul[x, y]
            if not self.cocycle_tolerant and np.max(np.abs(u[x] @ u[y] - u[xy])) > ACTION_LAW_TOL:
                raise ConstructionError("implementers do not form a representation")
            lhs = self._conj(u[x] @ u[y], basis)
            rhs = self._conj(u[xy], basis)
            if np.max(np.abs(lhs - rhs), initial=0.0) > ACTION_LAW_TOL:
                raise ConstructionError(f"conjugation does not respect the group law at ({x}, {y})")

    @staticmethod
    def _conj(w, a):
        return w @ a @ dagger(w)

    @property
    def dim(self) -> int:
        return self.algebra.dim


def act(action: UnitaryImplementedAction, x: int, a) -> np.ndarray:
    if not 0 <= x < action.group.order:
        raise InputError(f"group element index {x} out of range")
    m = as_matrix(a, action.dim)
    u = action.implementers[x]
    return u @ m @ dagger(u)


def orbit(action: UnitaryImplementedAction, a) -> np.ndarray:
    """All ``alpha_x(a)`` stacked along the first axis."""
    m = as_matrix(a, action.dim)
    u = action.implementers
    return u @ m @ dagger(u)


def conditional_expectation(action: UnitaryImplementedAction, a) -> np.ndarray:
    """Haar average ``(1/|G|) sum_x alpha_x(a)``."""
    return orbit(action, a).mean(axis=0)


def is_ergodic(action: UnitaryImplementedAction, tol: float = ERGODIC_TOL) -> bool:
    n = action.dim
    ident = np.eye(n)
    for b in hermitian_basis(action.algebra).elements:
        e = conditional_expectation(action, b)
        if np.max(np.abs(e - np.trace(e) / n * ident)) > tol:
            return False
    return True


@dataclass(frozen=True, eq=False)
class LieGenerators:
    """Skew-adjoint images ``X_j`` of a basis ``E_j`` of the Lie algebra.

    ``metric`` is the Gram matrix ``<E_j, E_k>`` of that basis (identity means the
    basis is already orthonormal).
    """

    generators: np.ndarray = field(repr=False)
    metric: np.ndarray | None = field(default=None, repr=False)
    algebra: Algebra | None = None

    def __post_init__(self):
        gens = np.asarray(self.generators, dtype=complex)
        if gens.ndim != 3 or gens.shape[1] != gens.shape[2] or gens.shape[0] < 1:
            raise InputError("generators must be an (m, n, n) array with m >= 1")
        if np.max(np.abs(gens + dagger(gens))) > SKEW_TOL:
            raise ConstructionError("generators are not skew-adjoint")
        m = gens.shape[0]
        metric = np.eye(m) if self.metric is None else np.asarray(self.metric, dtype=float)
        if metric.shape != (m, m) or not np.allclose(metric, metric.T, atol=1e-12):
            raise ConstructionError("metric must be a symmetric m x m matrix")
        if np.linalg.eigvalsh(metric)[0] <= 1e-12:
            raise ConstructionError("metric is not positive definite")
        gens = gens.copy()
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "metric", metric)
        if self.algebra is None:
            object.__setattr__(self, "algebra", Algebra.full(gens.shape[1]))

    @property
    def lie_dim(self) -> int:
        return self.generators.shape[0]

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def norm(self, X) -> float:
        X = np.asarray(X, dtype=float)
        return float(np.sqrt(X @ self.metric @ X))

    def infinitesimal(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape != (self.lie_dim,):
            raise InputError(f"expected a Lie algebra vector of length {self.lie_dim}")
        return np.tensordot(X, self.generators, axes=1)

    def whitening(self) -> np.ndarray:
        """``W = metric^{-1/2}``: coefficients ``W[:, k]`` give the k-th orthonormal frame vector."""
        return np.real(sqrtm(np.linalg.inv(self.metric)))

    def orthonormal_frame(self) -> np.ndarray:
        """Images of an orthonormal basis of the Lie algebra."""
        return np.tensordot(self.whitening().T, self.generators, axes=1)


def lie_derivative(gens: LieGenerators, X, a) -> np.ndarray:
    """``d_X a = [sum_j X_j X_j_hat, a]``."""
    m = as_matrix(a, gens.dim)
    h = gens.infinitesimal(X)
    return h @ m - m @ h


def sample_group_element(gens: LieGenerators, X):
    """``(exp(X_hat), ||X||)``; the norm bounds the geodesic distance to the identity."""
    return expm(gens.infinitesimal(X)), gens.norm(X)


def act_by_unitary(u: np.ndarray, a) -> np.ndarray:
    m = as_matrix(a, u.shape[0])
    return u @ m @ dagger(u)
