"""Finite-dimensional C*-algebra arithmetic.

Elements are plain complex ``numpy`` arrays. An :class:`Algebra` records the
block structure of a direct sum of full matrix algebras sitting block-diagonally
inside ``M_N``; the commutative algebra ``C(X)`` on ``n`` points is the
all-ones block structure (diagonal matrices).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InputError

HERMITIAN_TOL = 1e-12
POSITIVITY_TOL = 1e-12
TRACE_TOL = 1e-12


def as_matrix(a, dim: int | None = None) -> np.ndarray:
    """Coerce ``a`` to a finite square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InputError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    if dim is not None and m.shape[0] != dim:
        raise InputError(f"dimension mismatch: expected {dim}, got {m.shape[0]}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(a - dagger(a)), initial=0.0) <= tol)


def operator_norm(a) -> float:
    """C*-norm of ``a``: its largest singular value.

    For block-diagonal elements this equals the max of the block norms.
    """
    m = as_matrix(a)
    return float(np.linalg.svd(m, compute_uv=False)[0])


def top_singular_triple(a: np.ndarray):
    """Return ``(u, s, v)`` with ``u^H a v = s = ||a||``."""
    u, s, vh = np.linalg.svd(a)
    return u[:, 0], float(s[0]), np.conj(vh[0])


def quotient_norm(a) -> float:
    """Distance from a Hermitian ``a`` to the real scalars: (max eig - min eig)/2."""
    m = as_matrix(a)
    if not is_hermitian(m, 1e-9):
        raise InputError("quotient_norm expects a Hermitian element")
    w = np.linalg.eigvalsh((m + dagger(m)) / 2)
    return float((w[-1] - w[0]) / 2)


@dataclass(frozen=True)
class Algebra:
    """Block-diagonal direct sum of full matrix algebras."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        if not self.blocks or any(int(k) < 1 for k in self.blocks):
            raise InputError(f"invalid block structure {self.blocks!r}")
        object.__setattr__(self, "blocks", tuple(int(k) for k in self.blocks))

    @classmethod
    def full(cls, n: int) -> "Algebra":
        return cls((int(n),))

    @classmethod
    def diagonal(cls, n: int) -> "Algebra":
        return cls((1,) * int(n))

    @property
    def dim(self) -> int:
        return sum(self.blocks)

    @property
    def is_full(self) -> bool:
        return len(self.blocks) == 1

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=bool)
        start = 0
        for k in self.blocks:
            m[start:start + k, start:start + k] = True
            start += k
        return m

    def contains(self, a, tol: float = HERMITIAN_TOL) -> bool:
        m = as_matrix(a, self.dim)
        return bool(np.max(np.abs(m[~self.mask]), initial=0.0) <= tol)

    def project(self, a) -> np.ndarray:
        """Block-diagonal compression (a conditional expectation onto the algebra)."""
        m = as_matrix(a, self.dim).copy()
        m[~self.mask] = 0
        return m

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)


@dataclass(frozen=True, eq=False)
class DensityState:
    """A state ``mu(a) = trace(rho a)`` given by a density matrix."""

    rho: np.ndarray
    name: str = ""

    def __post_init__(self):
        rho = as_matrix(self.rho)
        if not is_hermitian(rho, HERMITIAN_TOL):
            raise InputError("density matrix is not Hermitian")
        rho = (rho + dagger(rho)) / 2
        if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
            raise InputError(f"density matrix has trace {np.trace(rho).real!r}, expected 1")
        if np.linalg.eigvalsh(rho)[0] < -POSITIVITY_TOL:
            raise InputError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def __call__(self, a) -> complex:
        return pair_state(self, a)


def pair_state(mu: DensityState, a) -> complex:
    m = as_matrix(a, mu.dim)
    return complex(np.sum(mu.rho.T * m))


def basis_state(dim: int, index: int) -> DensityState:
    if not 0 <= index < dim:
        raise InputError(f"basis index {index} out of range for dim {dim}")
    rho = np.zeros((dim, dim), dtype=complex)
    rho[index, index] = 1
    return DensityState(rho, name=f"e{index}")


def maximally_mixed(dim: int) -> DensityState:
    return DensityState(np.eye(dim, dtype=complex) / dim, name="mixed")


def vector_state(v) -> DensityState:
    v = np.asarray(v, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return DensityState(np.outer(v, np.conj(v)))


def _complex_gaussian(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_state(dim: int, seed, algebra: Algebra | None = None) -> DensityState:
    """Random density matrix ``G G^* / trace(G G^*)``, compressed into ``algebra`` if given."""
    if dim < 1:
        raise InputError("dim must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = _complex_gaussian(rng, dim)
    rho = g @ dagger(g)
    if algebra is not None:
        rho = algebra.project(rho)
    rho = (rho + dagger(rho)) / 2
    return DensityState(rho / np.trace(rho).real)


def random_hermitian(dim: int, seed, algebra: Algebra | None = None) -> np.ndarray:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = _complex_gaussian(rng, dim)
    h = (g + dagger(g)) / 2
    if algebra is not None:
        h = algebra.project(h)
    return h


def random_element(dim: int, seed, algebra: Algebra | None = None) -> np.ndarray:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = _complex_gaussian(rng, dim)
    return algebra.project(g) if algebra is not None else g


def numerical_radius(a, samples: int = 256, window: float = 0.2) -> float:
    """sup over unit vectors ``v`` of ``|<v, a v>|``.

    Uses ``w(a) = max_theta lambda_max(Re(e^{i theta} a))``. The angles are the
    first ``samples`` points of a van der Corput sequence, and each is refined
    by an independent bounded search in a fixed window, so the result is
    nondecreasing in ``samples``.
    """
    from scipy.optimize import minimize_scalar

    if samples < 1:
        raise InputError("samples must be positive")
    m = as_matrix(a)
    if not np.any(m):
        return 0.0
    if is_hermitian(m, 0.0):
        w = np.linalg.eigvalsh(m)
        return float(max(abs(w[0]), abs(w[-1])))

    def value(theta: float) -> float:
        z = np.exp(1j * theta) * m
        return float(np.linalg.eigvalsh((z + dagger(z)) / 2)[-1])

    best = 0.0
    for k in range(samples):
        theta = 2 * np.pi * _van_der_corput(k)
        res = minimize_scalar(lambda t: -value(t), bounds=(theta - window, theta + window),
                              method="bounded", options={"xatol": 1e-10})
        best = max(best, value(theta), -float(res.fun))
    return best


def _van_der_corput(k: int, base: int = 2) -> float:
    q, denom = 0.0, 1.0
    while k:
        k, rem = divmod(k, base)
        denom *= base
        q += rem / denom
    return q


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Orthonormal basis of the traceless Hermitian part of an algebra.

    Orthonormal for the real pairing ``<a, b> = Re trace(a b) / N``; the identity
    is kept separately and excluded from coordinates.
    """

    algebra: Algebra
    elements: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def __len__(self) -> int:
        return self.elements.shape[0]

    def coords_of(self, a) -> np.ndarray:
        m = as_matrix(a, self.dim)
        if not is_hermitian(m, 1e-9):
            raise InputError("coords_of expects a Hermitian element")
        return np.einsum("kij,ji->k", self.elements, m).real / self.dim

    def element_of(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=float)
        if c.shape != (len(self),):
            raise InputError(f"expected {len(self)} coordinates, got shape {c.shape}")
        return np.tensordot(c, self.elements, axes=1)


def hermitian_basis(algebra: Algebra | int) -> HermitianBasis:
    """Generalized Gell-Mann style basis, normalized so that ``trace(B_k B_l)/N = delta_kl``.

    For ``M_2`` the result is exactly ``(sigma_x, sigma_y, sigma_z)``.
    """
    if isinstance(algebra, int):
        algebra = Algebra.full(algebra)
    n = algebra.dim
    cands = []
    start = 0
    for k in algebra.blocks:
        for i in range(start, start + k):
            for j in range(i + 1, start + k):
                s = np.zeros((n, n), dtype=complex)
                s[i, j] = s[j, i] = 1
                t = np.zeros((n, n), dtype=complex)
                t[i, j], t[j, i] = -1j, 1j
                cands += [s, t]
        start += k
    for i in range(n):
        d = np.zeros((n, n), dtype=complex)
        d[i, i] = 1
        cands.append(d)

    ident = np.eye(n, dtype=complex)
    basis: list[np.ndarray] = []
    for c in cands:
        v = c - np.trace(c).real / n * ident
        for b in basis:
            v = v - (np.trace(b @ v).real / n) * b
        nrm = np.sqrt(np.trace(v @ v).real / n)
        if nrm > 1e-9:
            basis.append(v / nrm)
    elements = np.array(basis, dtype=complex).reshape(len(basis), n, n)
    elements.setflags(write=False)
    return HermitianBasis(algebra, elements)
