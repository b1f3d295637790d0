"""State-space metric ``rho(mu, nu) = sup{|mu(a) - nu(a)| : L(a) <= 1}`` with certified bounds.

The supremum is taken over traceless Hermitian ``a`` written in coordinates of a
:class:`HermitianBasis`. Neither restriction loses anything: both states take
the same value on the identity, and an adjoint-invariant ``L`` lets any
maximizer be replaced by the Hermitian part of a phase rotation.

The unit ball ``{L <= 1}`` is approximated from outside by supporting cuts.
Each linear program over the current cuts yields an upper bound ``hi``; its
optimizer ``c``, rescaled by the exact value ``L(c)``, is feasible and yields a
lower bound ``lo``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import DensityState, HermitianBasis, hermitian_basis, quotient_norm
from .errors import InputError, KernelError
from .lp import CuttingPlaneLP
from .seminorms import Seminorm, diameter_bound_values

DEFAULT_TOLERANCE = 1e-6
DEFAULT_MAX_ITERATIONS = 500
EQUAL_STATES_TOL = 1e-14
CUTS_PER_TERM = 2
PRUNE_FACTOR = 4


@dataclass
class DistanceResult:
    lo: float
    hi: float
    witness: np.ndarray
    iterations: int
    certified: bool
    cuts_used: int
    converged: bool = True

    @property
    def value(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "iterations": self.iterations,
                "certified": self.certified, "converged": self.converged,
                "cuts_used": self.cuts_used, "witness": [float(x) for x in self.witness]}


class MetricContext:
    """Per-seminorm data shared by every distance computation: basis, tabulated terms, box."""

    def __init__(self, seminorm: Seminorm, basis: HermitianBasis | None = None):
        self.seminorm = seminorm
        self.basis = basis or hermitian_basis(seminorm.algebra)
        if len(self.basis) and seminorm.kernel_dimension(self.basis) > 0:
            raise KernelError("seminorm vanishes on non-scalar elements (action not ergodic); "
                              "the metric would ignore part of the state space")
        self.linear = seminorm.linearize(self.basis)
        self.radius = seminorm.box_radius(self.basis) if len(self.basis) else 0.0
        self._seed_cuts = None

    def seed_cuts(self) -> list[np.ndarray]:
        """Cuts at plus/minus each basis element."""
        if self._seed_cuts is None:
            cuts = []
            for k in range(len(self.basis)):
                e = np.zeros(len(self.basis))
                e[k] = 1.0
                _, found = self.linear.cuts(e, max_cuts=1)
                cuts += [c.normal for c in found]
            self._seed_cuts = cuts
        return self._seed_cuts

    def delta(self, mu: DensityState, nu: DensityState) -> np.ndarray:
        if mu.dim != self.basis.dim or nu.dim != self.basis.dim:
            raise InputError("state dimension does not match the algebra")
        diff = mu.rho - nu.rho
        return np.einsum("kij,ji->k", self.basis.elements, diff).real


@dataclass
class DistanceProblem:
    seminorm: Seminorm
    mu: DensityState
    nu: DensityState
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    basis: HermitianBasis | None = None
    context: MetricContext | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        if self.max_iterations < 1:
            raise InputError("max_iterations must be positive")

    def solve(self) -> DistanceResult:
        ctx = self.context or MetricContext(self.seminorm, self.basis)
        return _solve(ctx, self.mu, self.nu, self.tolerance, self.max_iterations)


def spectral_distance(seminorm_or_problem, mu=None, nu=None, *, tolerance=DEFAULT_TOLERANCE,
                      max_iterations=DEFAULT_MAX_ITERATIONS, context: MetricContext | None = None
                      ) -> DistanceResult:
    """Bounds ``lo <= rho(mu, nu) <= hi`` for the metric defined by a seminorm.

    Accepts either a :class:`DistanceProblem` or ``(seminorm, mu, nu)``.
    """
    if isinstance(seminorm_or_problem, DistanceProblem):
        return seminorm_or_problem.solve()
    return DistanceProblem(seminorm_or_problem, mu, nu, tolerance, max_iterations,
                           context=context).solve()


def _solve(ctx: MetricContext, mu, nu, tol, max_iterations) -> DistanceResult:
    k = len(ctx.basis)
    d = ctx.delta(mu, nu)
    exact = ctx.linear.exact
    if k == 0 or np.max(np.abs(mu.rho - nu.rho)) <= EQUAL_STATES_TOL or not np.any(d):
        return DistanceResult(0.0, 0.0, np.zeros(k), 0, True, 0)

    lp = CuttingPlaneLP(d, ctx.radius)
    seeds = ctx.seed_cuts()
    if seeds:
        g = np.array(seeds)
        lp.add_cuts(np.vstack([g, -g]))
    lo, hi = 0.0, np.inf
    witness = np.zeros(k)
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        res = lp.solve()
        hi = min(hi, res.value)
        if lp.ncuts > PRUNE_FACTOR * k:
            lp.prune()
        c = res.x
        value, cuts = ctx.linear.cuts(c, threshold=1.0, per_term=CUTS_PER_TERM)
        if value > 0:
            cand = float(d @ c) / value
            if cand > lo:
                lo, witness = cand, c / value
        if hi - lo <= tol:
            converged = True
            break
        if not cuts:
            # optimizer already inside the unit ball; hi and lo agree up to LP round-off
            converged = hi - lo <= max(tol, 1e-9 * max(1.0, hi))
            break
        g = np.array([cut.normal for cut in cuts])
        lp.add_cuts(np.vstack([g, -g]))
    hi = max(hi, lo)
    return DistanceResult(float(lo), float(hi), witness, it, bool(converged and exact), lp.ncuts, converged)


@dataclass
class DistanceMatrix:
    names: list[str]
    results: list[list[DistanceResult]]

    def values(self, which: str = "hi") -> np.ndarray:
        return np.array([[getattr(r, which) if which != "value" else r.value for r in row]
                         for row in self.results])


def distance_matrix(seminorm: Seminorm, states, tolerance=DEFAULT_TOLERANCE,
                    max_iterations=DEFAULT_MAX_ITERATIONS, context: MetricContext | None = None
                    ) -> DistanceMatrix:
    """All pairwise distances; the upper triangle is computed and mirrored."""
    states = list(states)
    if len({s.dim for s in states}) > 1:
        raise InputError("states have different dimensions")
    ctx = context or MetricContext(seminorm)
    n = len(states)
    k = len(ctx.basis)
    zero = DistanceResult(0.0, 0.0, np.zeros(k), 0, True, 0)
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            r = _solve(ctx, states[i], states[j], tolerance, max_iterations)
            rows[i][j] = r
            rows[j][i] = DistanceResult(r.lo, r.hi, -r.witness, r.iterations, r.certified,
                                        r.cuts_used, r.converged)
    names = [s.name or f"s{i}" for i, s in enumerate(states)]
    return DistanceMatrix(names, rows)


def diameter_bound(action, length) -> float:
    """``2 * (1/|G|) sum_x l(x)``: an upper bound on every distance for the length seminorm."""
    if length.group.order != action.group.order:
        raise InputError("length function and action use different groups")
    return diameter_bound_values(length.values)


def quotient_radius(seminorm: Seminorm, basis: HermitianBasis | None = None, samples: int = 1000,
                    seed=0, refine: bool = True) -> float:
    """Sampled estimate (from below) of ``sup ||a||~ / L(a)`` over traceless Hermitian ``a``."""
    from scipy.optimize import minimize

    basis = basis or hermitian_basis(seminorm.algebra)
    lin = seminorm.linearize(basis)
    k = len(basis)
    if k == 0:
        return 0.0
    rng = np.random.default_rng(seed)

    def ratio(c):
        c = np.asarray(c, dtype=float)
        val = lin.evaluate(c)
        if val <= 1e-14 * max(1.0, np.linalg.norm(c)):
            if np.linalg.norm(c) > 0:
                raise KernelError("seminorm vanishes on a non-scalar element")
            return 0.0
        return quotient_norm(basis.element_of(c)) / val

    pts = rng.standard_normal((samples, k))
    vals = np.array([ratio(p) for p in pts])
    best_i = int(np.argmax(vals))
    best = float(vals[best_i])
    if refine and k > 1:
        res = minimize(lambda c: -ratio(c) if np.linalg.norm(c) > 1e-12 else 0.0, pts[best_i],
                       method="Nelder-Mead", options={"maxiter": 200 * k, "xatol": 1e-10, "fatol": 1e-12})
        best = max(best, -float(res.fun))
    return best
