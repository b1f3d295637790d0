"""Lipschitz-type seminorms from group actions, Lie derivatives and Dirac operators.

Every seminorm is a maximum of operator norms of linear images of ``a``
("terms"). The lie seminorm is a maximum over a continuum of directions and is
only estimated from below; all other kinds are evaluated exactly.

For optimization a seminorm is *linearized* on a :class:`HermitianBasis`: the
images of the basis elements are tabulated once, after which evaluation and
supporting cuts at a coordinate vector are cheap tensor contractions.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import (Algebra, HermitianBasis, as_matrix, dagger, maximally_mixed,
                      DensityState, top_singular_triple)
from .clifford import CliffordGenerators, auxiliary_projections, clifford_generators
from .errors import ConstructionError, InputError, KernelError
from .groups import (LengthFunction, LieGenerators, UnitaryImplementedAction, is_ergodic)

SEMINORM_KINDS = ("length_lipschitz", "holder", "lie", "dirac", "scaled")


@dataclass(frozen=True)
class Cut:
    """Linear functional ``c -> normal @ c`` with ``normal @ c <= L(c)`` for all ``c``."""

    normal: np.ndarray
    value: float


def _batched_norms(mats: np.ndarray) -> np.ndarray:
    if mats.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.svd(mats, compute_uv=False)[:, 0]


class Seminorm:
    kind: str = ""
    exact: bool = True

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def __call__(self, a) -> float:
        return self.evaluate(as_matrix(a, self.dim))

    def evaluate(self, a: np.ndarray) -> float:
        terms = self.terms(a)
        return float(np.max(_batched_norms(terms), initial=0.0))

    def terms(self, a: np.ndarray) -> np.ndarray:
        """Stack of linear images of ``a`` whose norms lower-bound (exact kinds: attain) ``L(a)``."""
        raise NotImplementedError

    def linearize(self, basis: HermitianBasis) -> "Linearization":
        return TermLinearization(self, basis)

    def box_radius(self, basis: HermitianBasis) -> float:
        """A-priori bound on ``max |c_k|`` over traceless Hermitian ``a`` with ``L(a) <= 1``."""
        images = self.linearize(basis).images
        t, k, p, _ = images.shape
        flat = np.concatenate([images.real, images.imag], axis=-1).transpose(1, 0, 2, 3).reshape(k, -1)
        lam = np.linalg.eigvalsh(flat @ flat.T)[0] if k else 1.0
        if lam <= 1e-12 * max(1.0, np.max(np.abs(flat), initial=1.0)) ** 2:
            raise KernelError("seminorm vanishes on a non-scalar element")
        return float(np.sqrt(t * p / lam))

    def kernel_dimension(self, basis: HermitianBasis, tol: float = 1e-10) -> int:
        images = self.linearize(basis).images
        k = images.shape[1]
        if k == 0:
            return 0
        flat = np.concatenate([images.real, images.imag], axis=-1).transpose(1, 0, 2, 3).reshape(k, -1)
        s = np.linalg.svd(flat, compute_uv=False)
        return int(np.sum(s <= tol * max(1.0, s[0])))

    def describe(self) -> dict:
        return {"kind": self.kind}


class Linearization:
    """Seminorm tabulated on a basis: ``evaluate(c)`` and ``cuts(c)`` on coordinate vectors."""

    exact = True

    def evaluate(self, coords) -> float:
        raise NotImplementedError

    def cuts(self, coords, threshold: float = 0.0, max_cuts: int | None = None,
             per_term: int = 1) -> tuple[float, list[Cut]]:
        raise NotImplementedError


class TermLinearization(Linearization):
    def __init__(self, seminorm: Seminorm, basis: HermitianBasis, factor: float = 1.0):
        self.seminorm = seminorm
        self.basis = basis
        self.exact = seminorm.exact
        self.images = np.stack([seminorm.terms(b) for b in basis.elements], axis=1) * factor \
            if len(basis) else np.zeros((0, 0, 1, 1), dtype=complex)

    def _mats(self, coords) -> np.ndarray:
        return np.tensordot(np.asarray(coords, dtype=float), self.images, axes=([0], [1]))

    def evaluate(self, coords) -> float:
        return float(np.max(_batched_norms(self._mats(coords)), initial=0.0))

    def cuts(self, coords, threshold=0.0, max_cuts=None, per_term=1):
        """Cuts from the singular pairs of every term whose singular value exceeds ``threshold``.

        The dominant term comes first; ``per_term`` caps the pairs taken from each term.
        """
        mats = self._mats(coords)
        norms = _batched_norms(mats)
        value = float(np.max(norms, initial=0.0))
        order = np.argsort(-norms, kind="stable")
        out = []
        for t in order:
            if norms[t] <= max(threshold, 0.0):
                break
            us, ss, vhs = np.linalg.svd(mats[t])
            for i in range(min(per_term, ss.size)):
                if ss[i] <= threshold or (max_cuts is not None and len(out) >= max_cuts):
                    break
                normal = np.einsum("i,kij,j->k", np.conj(us[:, i]), self.images[t], np.conj(vhs[i])).real
                out.append(Cut(normal, float(ss[i])))
            if max_cuts is not None and len(out) >= max_cuts:
                break
        return value, out


def _ergodic_warning(action):
    if not is_ergodic(action):
        warnings.warn("action is not ergodic; the seminorm vanishes on non-scalar elements",
                      RuntimeWarning, stacklevel=3)


class LengthLipschitzSeminorm(Seminorm):
    """``sup_{x != e} ||alpha_x(a) - a|| / l(x)^r``; ``r = 1`` is the Lipschitz case."""

    def __init__(self, action: UnitaryImplementedAction, length: LengthFunction, r: float = 1.0,
                 warn: bool = True):
        if length.group is not action.group and length.group.order != action.group.order:
            raise InputError("length function is defined on a different group")
        if not 0 < r <= 1:
            raise InputError("Hoelder exponent must lie in (0, 1]")
        self.action = action
        self.length = length
        self.r = float(r)
        self.kind = "length_lipschitz" if r == 1 else "holder"
        self.algebra = action.algebra
        e = action.group.identity
        self._others = np.array([x for x in range(action.group.order) if x != e], dtype=int)
        self._weights = 1.0 / length.values[self._others] ** self.r
        if warn:
            _ergodic_warning(action)

    def terms(self, a):
        u = self.action.implementers[self._others]
        moved = u @ a @ dagger(u)
        return (moved - a) * self._weights[:, None, None]

    def maximizing_element(self, a) -> int:
        norms = _batched_norms(self.terms(as_matrix(a, self.dim)))
        return int(self._others[int(np.argmax(norms))])

    def box_radius(self, basis):
        return diameter_bound_values(self.length.values ** self.r)

    def describe(self):
        return {"kind": self.kind, "r": self.r}


def length_lipschitz_seminorm(action, length, a) -> float:
    return LengthLipschitzSeminorm(action, length, warn=False)(a)


def holder_seminorm(action, length, r, a) -> float:
    return LengthLipschitzSeminorm(action, length, r=r, warn=False)(a)


def diameter_bound_values(values) -> float:
    return 2.0 * float(np.mean(values))


def _sphere_points(m: int, budget: int) -> np.ndarray:
    """Deterministic, roughly uniform points on the unit sphere in R^m (antipodes identified)."""
    if m == 1:
        return np.ones((1, 1))
    if m == 2:
        th = np.pi * (np.arange(budget) + 0.5) / budget
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    if m == 3:
        i = np.arange(budget) + 0.5
        z = 1 - i / budget  # upper hemisphere
        phi = np.pi * (1 + 5 ** 0.5) * i
        rr = np.sqrt(1 - z ** 2)
        return np.stack([rr * np.cos(phi), rr * np.sin(phi), z], axis=1)
    from scipy.special import ndtri
    from scipy.stats import qmc
    u = qmc.Halton(d=m, scramble=False).random(budget + 1)[1:]
    g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def max_pencil_norm(mats: np.ndarray, budget: int = 2048, ascent_steps: int = 50, starts: int = 4):
    """Estimate ``max_{|y| = 1} || sum_k y_k M_k ||`` from below.

    Sphere sampling followed by the fixed-point ascent ``y <- g/|g|`` with
    ``g_k = Re <u, M_k v>``; each ascent step cannot decrease the value because
    the objective is convex. Returns ``(value, y)``.
    """
    m = mats.shape[0]
    if m == 1:
        return float(np.linalg.svd(mats[0], compute_uv=False)[0]), np.ones(1)
    pts = _sphere_points(m, budget)
    vals = _batched_norms(np.tensordot(pts, mats, axes=1))
    best_val, best_y = -1.0, pts[0]
    for idx in np.argsort(-vals, kind="stable")[:starts]:
        y = pts[idx]
        val = float(vals[idx])
        for _ in range(ascent_steps):
            u, s, v = top_singular_triple(np.tensordot(y, mats, axes=1))
            g = np.einsum("i,kij,j->k", np.conj(u), mats, v).real
            gn = np.linalg.norm(g)
            if gn == 0:
                break
            y_new = g / gn
            s_new = float(np.linalg.svd(np.tensordot(y_new, mats, axes=1), compute_uv=False)[0])
            if s_new <= val + 1e-15:
                break
            y, val = y_new, s_new
        if val > best_val:
            best_val, best_y = val, y
    return best_val, best_y


class LieSeminorm(Seminorm):
    """``||da||``: operator norm of ``X -> d_X a`` from (Lie algebra, metric) to the algebra.

    Exact for one-dimensional Lie algebras; otherwise a lower estimate.
    """

    kind = "lie"

    def __init__(self, gens: LieGenerators, budget: int | None = None, ascent_steps: int = 50):
        if budget is not None and budget < 1:
            raise InputError("budget must be >= 1")
        self.gens = gens
        self.algebra = gens.algebra
        self.frame = gens.orthonormal_frame()
        self.whitening = gens.whitening()
        self.budget = budget or (2048 if gens.lie_dim >= 3 else 512)
        self.ascent_steps = ascent_steps
        self.exact = gens.lie_dim == 1

    def terms(self, a):
        """Derivatives along the orthonormal frame; each norm is at most ``||da||``."""
        return self.frame @ a - a @ self.frame

    def estimate(self, a):
        """``(value, X)`` with ``||X||_metric = 1`` attaining ``value = ||d_X a||``."""
        val, y = max_pencil_norm(self.terms(as_matrix(a, self.dim)), self.budget, self.ascent_steps)
        return val, self.whitening @ y

    def evaluate(self, a):
        return self.estimate(a)[0]

    def linearize(self, basis):
        return LieLinearization(self, basis)

    def describe(self):
        return {"kind": self.kind, "budget": self.budget}


class LieLinearization(TermLinearization):
    def evaluate(self, coords):
        return max_pencil_norm(self._mats(coords), self.seminorm.budget, self.seminorm.ascent_steps)[0]

    def cuts(self, coords, threshold=0.0, max_cuts=None, per_term=1):
        mats = self._mats(coords)
        value, y = max_pencil_norm(mats, self.seminorm.budget, self.seminorm.ascent_steps)
        if value <= threshold or value <= 0:
            return value, []
        u, s, v = top_singular_triple(np.tensordot(y, mats, axes=1))
        combined = np.tensordot(y, self.images, axes=1)
        normal = np.einsum("i,kij,j->k", np.conj(u), combined, v).real
        return value, [Cut(normal, float(s))]


def lie_seminorm(gens: LieGenerators, a, budget: int | None = None) -> float:
    return LieSeminorm(gens, budget=budget)(a)


@dataclass(frozen=True, eq=False)
class DiracData:
    """Lie generators (orthonormal frame) paired with Clifford generators of the same rank."""

    gens: LieGenerators
    clifford: CliffordGenerators
    frame: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.gens.lie_dim != self.clifford.m:
            raise ConstructionError("Lie algebra and Clifford ranks differ")
        f, p, q = auxiliary_projections(self.clifford)
        ident = np.eye(self.clifford.rep_dim)
        if np.max(np.abs(f - dagger(f))) > 1e-12 or np.max(np.abs(f @ f - ident)) > 1e-12:
            raise ConstructionError("f_j = i e_j must be self-adjoint involutions")
        for proj in (p, q):
            if np.max(np.abs(proj @ proj - proj)) > 1e-12 or np.max(np.abs(proj - dagger(proj))) > 1e-12:
                raise ConstructionError("p_j, q_j must be orthogonal projections")
        object.__setattr__(self, "frame", self.gens.orthonormal_frame())

    @property
    def n(self) -> int:
        return self.gens.dim

    @property
    def algebra(self) -> Algebra:
        return self.gens.algebra


def dirac_data(gens: LieGenerators) -> DiracData:
    return DiracData(gens, clifford_generators(gens.lie_dim, gens.metric))


def frame_derivatives(dd: DiracData, a) -> np.ndarray:
    """``d_{E_j} a`` for the orthonormal frame ``E_j``."""
    m = as_matrix(a, dd.n)
    return dd.frame @ m - m @ dd.frame


def dirac_commutator(dd: DiracData, a) -> np.ndarray:
    """``sum_j d_{E_j}(a) (x) e_j`` acting on ``C^n (x) spinors``."""
    ders = frame_derivatives(dd, a)
    return sum(np.kron(ders[j], dd.clifford.e[j]) for j in range(dd.gens.lie_dim))


class DiracSeminorm(Seminorm):
    kind = "dirac"

    def __init__(self, dd: DiracData):
        self.dd = dd
        self.algebra = dd.algebra

    def terms(self, a):
        return dirac_commutator(self.dd, a)[None]


def dirac_seminorm(dd: DiracData, a) -> float:
    return DiracSeminorm(dd)(a)


def build_dirac_matrix(dd: DiracData, gns_state: DensityState | None = None) -> np.ndarray:
    """Matrix of ``D`` on ``L^2(A, eta) (x) spinors`` in an orthonormal basis.

    Vectors ``b (x) s`` are stored as ``vec(b) (x) s`` with row-major ``vec``; the
    inner product is ``eta(b^* c) <s, t>``. Left multiplication by ``a`` is
    ``lambda_a = a (x) 1 (x) 1`` in these coordinates.
    """
    n = dd.n
    state = gns_state or maximally_mixed(n)
    w, vecs = np.linalg.eigh(state.rho)
    if w[0] <= 1e-12:
        raise ConstructionError("GNS state is not faithful")
    ident = np.eye(n)
    d = sum(np.kron(np.kron(x, ident) - np.kron(ident, x.T), e)
            for x, e in zip(dd.frame, dd.clifford.e))
    # b -> b rho^{1/2} is an isometry from L^2(A, eta) onto Hilbert-Schmidt space
    root = (vecs * np.sqrt(w)) @ dagger(vecs)
    r = np.kron(np.kron(ident, root.T), np.eye(dd.clifford.rep_dim))
    return r @ d @ np.linalg.inv(r)


def left_multiplication(dd: DiracData, a) -> np.ndarray:
    m = as_matrix(a, dd.n)
    return np.kron(np.kron(m, np.eye(dd.n)), np.eye(dd.clifford.rep_dim))


class ScaledSeminorm(Seminorm):
    kind = "scaled"

    def __init__(self, inner: Seminorm, t: float):
        if not t > 0:
            raise InputError("scale factor must be positive")
        self.inner = inner
        self.t = float(t)
        self.algebra = inner.algebra
        self.exact = inner.exact

    def terms(self, a):
        return self.t * self.inner.terms(a)

    def evaluate(self, a):
        return self.t * self.inner.evaluate(a)

    def linearize(self, basis):
        return ScaledLinearization(self.inner.linearize(basis), self.t)

    def box_radius(self, basis):
        return self.inner.box_radius(basis) / self.t

    def kernel_dimension(self, basis, tol=1e-10):
        return self.inner.kernel_dimension(basis, tol)

    def describe(self):
        return {"kind": self.kind, "t": self.t, "inner": self.inner.describe()}


class ScaledLinearization(Linearization):
    def __init__(self, inner: Linearization, t: float):
        self.inner = inner
        self.t = t
        self.exact = inner.exact
        self.images = inner.images * t

    def evaluate(self, coords):
        return self.t * self.inner.evaluate(coords)

    def cuts(self, coords, threshold=0.0, max_cuts=None, per_term=1):
        value, cuts = self.inner.cuts(coords, threshold / self.t, max_cuts, per_term)
        return self.t * value, [Cut(self.t * c.normal, self.t * c.value) for c in cuts]


def scale_seminorm(seminorm: Seminorm, t: float) -> ScaledSeminorm:
    return ScaledSeminorm(seminorm, t)


def seminorm_cut(seminorm: Seminorm, basis: HermitianBasis, coords) -> Cut | None:
    """Supporting cut at ``coords`` from the dominant term; ``None`` when ``L(a) = 0``."""
    value, cuts = seminorm.linearize(basis).cuts(coords, threshold=0.0, max_cuts=1)
    return cuts[0] if cuts and value > 0 else None
