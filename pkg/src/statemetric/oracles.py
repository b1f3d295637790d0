"""Independent ground truth for the metric engine.

* Commutative algebras: the metric is the Monge-Kantorovich (Wasserstein-1)
  distance for ``d(y, z) = l(y z^-1)``, solved as a transport LP.
* ``M_2`` instances: direct search over the Bloch sphere of traceless
  Hermitian directions with a closed-form seminorm.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import DensityState
from .errors import InputError
from .groups import FiniteGroup, LengthFunction
from .lp import lp_solve

PROB_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    d: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        n = d.shape[0]
        if d.shape != (n, n) or n < 1:
            raise InputError("distance matrix must be square")
        if np.any(np.diag(d) != 0) or np.any(d < 0) or not np.array_equal(d, d.T):
            raise InputError("distance matrix must be symmetric, nonnegative, zero on the diagonal")
        if np.any(d[~np.eye(n, dtype=bool)] == 0):
            raise InputError("distinct points at distance zero")
        scale = max(1.0, d.max())
        if np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + 1e-12 * scale):
            raise InputError("triangle inequality fails")
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def size(self) -> int:
        return self.d.shape[0]


def metric_from_length(group: FiniteGroup, length: LengthFunction) -> FiniteMetricSpace:
    """Right-invariant metric ``d(y, z) = l(y z^-1)``."""
    y = np.arange(group.order)
    yz_inv = group.mul[y[:, None], group.inv[None, :]]
    return FiniteMetricSpace(length.values[yz_inv])


def _probability(p, n) -> np.ndarray:
    p = np.asarray(p, dtype=float).ravel()
    if p.size != n or np.any(p < -PROB_TOL) or abs(p.sum() - 1) > PROB_TOL:
        raise InputError("expected a probability vector of length %d" % n)
    return np.clip(p, 0.0, None)


def kantorovich_lp(space: FiniteMetricSpace, mu, nu) -> float:
    """Optimal transport cost ``min sum pi_yz d(y, z)`` over couplings of ``mu`` and ``nu``."""
    n = space.size
    mu, nu = _probability(mu, n), _probability(nu, n)
    if np.array_equal(mu, nu):
        return 0.0
    rows = np.kron(np.eye(n), np.ones(n))
    cols = np.kron(np.ones(n), np.eye(n))
    res = lp_solve(-space.d.ravel(), A_eq=np.vstack([rows, cols]), b_eq=np.concatenate([mu, nu]),
                   bounds=(0.0, 1.0))
    return max(0.0, -res.value)


def kantorovich_dual(space: FiniteMetricSpace, mu, nu) -> float:
    """``max sum f(y) (mu - nu)(y)`` over 1-Lipschitz ``f``."""
    n = space.size
    mu, nu = _probability(mu, n), _probability(nu, n)
    pairs = [(y, z) for y in range(n) for z in range(n) if y != z]
    if not pairs:
        return 0.0
    A = np.zeros((len(pairs), n))
    for r, (y, z) in enumerate(pairs):
        A[r, y], A[r, z] = 1.0, -1.0
    b = np.array([space.d[y, z] for y, z in pairs])
    dmax = space.d.max()
    res = lp_solve(mu - nu, A_ub=A, b_ub=b, bounds=(-dmax, dmax))
    return max(0.0, res.value)


PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


def bloch_bruteforce_m2(seminorm: Callable[[float, float, float], float], mu: DensityState,
                        nu: DensityState, resolution: int = 256, refine: bool = True) -> float:
    """``sup (mu - nu)(a) / L(a)`` over ``a = x sx + y sy + z sz`` by sphere search.

    ``seminorm(x, y, z)`` must evaluate ``L`` exactly. The grid over polar and
    azimuthal angles is nested under doubling of ``resolution``; refinement
    starts from a fixed coarse grid, so the result never decreases as the
    resolution grows.
    """
    from scipy.optimize import minimize

    if mu.dim != 2 or nu.dim != 2:
        raise InputError("the Bloch oracle only covers 2 x 2 instances")
    diff = mu.rho - nu.rho
    if not np.any(np.abs(diff) > 1e-15):
        return 0.0
    dv = np.einsum("kij,ji->k", PAULI, diff).real

    def ratio(theta, phi):
        x, y, z = np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)
        return (dv[0] * x + dv[1] * y + dv[2] * z) / seminorm(x, y, z)

    def grid(res):
        th, ph = np.meshgrid(np.pi * np.arange(res + 1) / res,
                             2 * np.pi * np.arange(2 * res) / (2 * res), indexing="ij")
        th, ph = th.ravel(), ph.ravel()
        try:
            vals = np.asarray(ratio(th, ph), dtype=float)
        except (ValueError, TypeError):
            vals = None
        if vals is None or vals.shape != th.shape:
            vals = np.array([ratio(t, p) for t, p in zip(th, ph)])
        return list(zip(th, ph, vals))

    pts = grid(resolution)
    best = max(v for _, _, v in pts)
    if refine:
        coarse = sorted(grid(16), key=lambda r: -r[2])[:8]
        for t0, p0, _ in coarse:
            res = minimize(lambda v: -ratio(v[0], v[1]), (t0, p0), method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
            best = max(best, -float(res.fun))
    return float(max(best, 0.0))


def torus_q2_closed_form(length_values) -> Callable[[float, float, float], float]:
    """Closed-form length seminorm for the ``Z_2 x Z_2`` Weyl action on ``M_2``.

    Conjugation by ``sigma_x``, ``sigma_z`` and ``sigma_y`` flips the sign of the
    two Bloch components orthogonal to the conjugating axis.
    ``length_values`` are indexed like the product group ``(m, n) -> 2m + n``.
    """
    l10, l01, l11 = length_values[2], length_values[1], length_values[3]

    def L(x, y, z):
        return np.maximum.reduce([2 * np.hypot(y, z) / l10, 2 * np.hypot(x, y) / l01,
                                  2 * np.hypot(x, z) / l11])

    return L
