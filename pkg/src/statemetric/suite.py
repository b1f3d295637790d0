"""Named numerical checks of the inequalities and identities behind the metric.

Every check returns a :class:`Verdict` with a signed ``margin`` (``bound - value``
for upper-bound checks); a check passes when its margin is nonnegative. Failures
are verdicts, never exceptions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (dagger, numerical_radius, operator_norm, random_element,
                      random_hermitian, random_state)
from .clifford import CliffordGenerators, auxiliary_projections, clifford_residuals
from .groups import (LengthFunction, conditional_expectation, is_ergodic, sample_group_element,
                     act_by_unitary, verify_length_function, length_function_violations)
from .instances import Instance
from .metric import MetricContext, diameter_bound, spectral_distance, _solve
from .oracles import kantorovich_lp, metric_from_length
from .seminorms import (DiracSeminorm, LengthLipschitzSeminorm, LieSeminorm, build_dirac_matrix,
                        dirac_commutator, frame_derivatives, left_multiplication, scale_seminorm)

CLIFFORD_TOL = 1e-12
LIFT_TOL = 1e-10
HERMITIAN_D_TOL = 1e-10
TRACE_TOL = 1e-12
SMOOTH_TOL = 1e-9
SANDWICH_TOL = 1e-9
SCALING_REL_TOL = 1e-6
SCALES = (0.5, 2.0, 10.0)


@dataclass
class Verdict:
    name: str
    passed: bool
    margin: float
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "margin": float(self.margin),
                "detail": self.detail}


@dataclass
class SuiteResult:
    instance: str
    verdicts: list[Verdict]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def __getitem__(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def names(self) -> list[str]:
        return [v.name for v in self.verdicts]

    def to_dict(self) -> dict:
        return {"instance": self.instance, "passed": self.passed,
                "verdicts": [v.to_dict() for v in self.verdicts]}


def _upper(name, value, bound, **detail) -> Verdict:
    margin = float(bound - value)
    return Verdict(name, bool(margin >= 0), margin, {"value": float(value), "bound": float(bound), **detail})


# ---- individual checks -------------------------------------------------------------

def check_clifford(cg: CliffordGenerators, tol: float = CLIFFORD_TOL) -> Verdict:
    res = clifford_residuals(cg)
    worst = max(res["skew"], res["square"], res["anticommute"])
    margin = tol - worst if res["faithfulness_deficit"] == 0 else -res["faithfulness_deficit"]
    return Verdict("clifford_relations", bool(margin >= 0), float(margin),
                   {k: float(v) for k, v in res.items()} | {"m": cg.m})


def check_dirac_hermitian(instance: Instance, tol: float = HERMITIAN_D_TOL) -> Verdict:
    d = build_dirac_matrix(instance.dirac)
    return _upper("dirac_hermitian", float(np.max(np.abs(d - dagger(d)))), tol, size=d.shape[0])


def check_commutator_lift(instance: Instance, samples: int = 50, seed: int = 0, tol: float = LIFT_TOL) -> Verdict:
    """``[D, lambda_a]`` from the assembled ``D`` against ``sum_j d_{E_j}(a) (x) e_j``."""
    dd = instance.dirac
    d = build_dirac_matrix(dd)
    n, s = dd.n, dd.clifford.rep_dim
    worst = 0.0
    for i in range(samples):
        a = random_element(n, [seed, 41, i])
        lam = left_multiplication(dd, a)
        lhs = d @ lam - lam @ d
        # Sigma d_j(a) (x) e_j acts on the left factor of vec(b); lift it to A (x) A (x) S
        rhs = dirac_commutator(dd, a).reshape(n, s, n, s)
        full = np.einsum("iajb,kl->ikajlb", rhs, np.eye(n)).reshape(n * n * s, n * n * s)
        worst = max(worst, float(np.max(np.abs(lhs - full))))
    return _upper("commutator_lift", worst, tol, samples=samples)


def check_sandwich(instance: Instance, samples: int = 200, seed: int = 0,
                   tol: float = SANDWICH_TOL) -> Verdict:
    """``max_j ||d_j a|| <= ||[D, a]|| <= sum_j ||d_j a||``; the lower side via the p_j compression."""
    dd = instance.dirac
    _, p, _ = auxiliary_projections(dd.clifford)
    n = dd.n
    worst = np.inf
    compression = 0.0
    for i in range(samples):
        a = random_element(n, [seed, 5, i])
        ders = frame_derivatives(dd, a)
        norms = np.array([operator_norm(x) for x in ders])
        t = dirac_commutator(dd, a)
        ld = operator_norm(t)
        for j in range(dd.gens.lie_dim):
            proj = np.kron(np.eye(n), p[j])
            comp = proj @ t @ proj
            # p_j e_k p_j = 0 for k != j, and p_j e_j p_j = -i f_j p_j = -i p_j
            expect = np.kron(ders[j], -1j * p[j])
            compression = max(compression, float(np.max(np.abs(comp - expect))))
        worst = min(worst, ld - norms.max() + tol, norms.sum() + tol - ld)
    margin = min(float(worst), tol - compression)
    return Verdict("seminorm_sandwich", bool(margin >= 0), margin,
                   {"samples": samples, "compression_residual": compression})


def check_smoothness(instance: Instance, samples: int = 100, seed: int = 0,
                     tol: float = SMOOTH_TOL) -> Verdict:
    """``||alpha_{exp X}(a) - a|| <= ||da|| ||X||`` with ``||X|| = 1``.

    ``||da||`` is taken from the lie estimate when that suffices, otherwise from
    the certified upper bound ``sum_j ||d_{E_j} a||``.
    """
    gens = instance.lie
    lie = LieSeminorm(gens)
    rng = np.random.default_rng([seed, 3])
    worst = np.inf
    used = {"lie_estimate": 0, "frame_sum": 0}
    for i in range(samples):
        a = random_element(gens.dim, [seed, 9, i])
        X = rng.standard_normal(gens.lie_dim)
        X /= gens.norm(X)
        u, length = sample_group_element(gens, X)
        lhs = operator_norm(act_by_unitary(u, a) - a)
        est = lie.evaluate(a)
        if lhs <= est * length + tol:
            const = est
            used["lie_estimate"] += 1
        else:
            const = sum(operator_norm(x) for x in lie.terms(a))
            used["frame_sum"] += 1
        worst = min(worst, const * length + tol - lhs)
    return Verdict("smoothness", bool(worst >= 0), float(worst), {"samples": samples, "bound_used": used})


def invariant_state(instance: Instance):
    """The ergodic average state as a function ``a -> eta(a)``."""
    n = instance.dim
    if instance.action is not None:
        return lambda a: np.trace(conditional_expectation(instance.action, a)) / n
    return lambda a: np.trace(a) / n


def check_trace_property(instance: Instance, samples: int = 100, seed: int = 0,
                         tol: float = TRACE_TOL) -> Verdict:
    eta = invariant_state(instance)
    worst = 0.0
    for i in range(samples):
        a = random_element(instance.dim, [seed, 11, i], instance.algebra)
        b = random_element(instance.dim, [seed, 13, i], instance.algebra)
        worst = max(worst, abs(eta(a @ b) - eta(b @ a)))
    return _upper("trace_property", worst, tol, samples=samples)


def check_numerical_radius(instance: Instance, samples: int = 20, seed: int = 0) -> Verdict:
    """``||a|| <= 2 w(a)`` in general and ``||a|| = w(a)`` on Hermitian elements."""
    n = instance.dim
    worst_ratio = 0.0
    herm_gap = 0.0
    for i in range(samples):
        a = random_element(n, [seed, 17, i], instance.algebra)
        w = numerical_radius(a, samples=64)
        worst_ratio = max(worst_ratio, operator_norm(a) / w)
        h = random_hermitian(n, [seed, 19, i], instance.algebra)
        herm_gap = max(herm_gap, abs(numerical_radius(h) - operator_norm(h)))
    margin = min(2.0 + 1e-9 - worst_ratio, 1e-9 - herm_gap)
    return Verdict("numerical_radius", bool(margin >= 0), float(margin),
                   {"max_norm_ratio": worst_ratio, "hermitian_gap": herm_gap})


def check_length(length: LengthFunction) -> Verdict:
    bad = length_function_violations(length)
    ok = verify_length_function(length)
    return Verdict("length_axioms", ok and not bad, 0.0 if ok else -1.0, {"violations": bad})


def check_ergodic(instance: Instance) -> Verdict:
    ok = is_ergodic(instance.action)
    return Verdict("ergodicity", ok, 0.0 if ok else -1.0, {})


def _state_pairs(instance: Instance, count: int, seed: int):
    n = instance.dim
    return [(random_state(n, [seed, 23, i], instance.algebra),
             random_state(n, [seed, 29, i], instance.algebra)) for i in range(count)]


def check_diameter(instance: Instance, pairs: int = 5, seed: int = 0, tolerance: float = 1e-6,
                   context: MetricContext | None = None) -> Verdict:
    L = LengthLipschitzSeminorm(instance.action, instance.length, warn=False)
    ctx = context or MetricContext(L)
    bound = diameter_bound(instance.action, instance.length)
    worst = max(_solve(ctx, mu, nu, tolerance, 500).hi for mu, nu in _state_pairs(instance, pairs, seed))
    return _upper("diameter", worst, bound + tolerance, pairs=pairs)


def check_scaling(instance: Instance, seminorm=None, pairs: int = 2, seed: int = 0,
                  tolerance: float = 1e-9, rel_tol: float = SCALING_REL_TOL) -> Verdict:
    """``rho_{tL} = rho_L / t``."""
    L = seminorm or LengthLipschitzSeminorm(instance.action, instance.length, warn=False)
    worst = 0.0
    for mu, nu in _state_pairs(instance, pairs, seed):
        base = spectral_distance(L, mu, nu, tolerance=tolerance).value
        for t in SCALES:
            r = spectral_distance(scale_seminorm(L, t), mu, nu, tolerance=tolerance / t).value
            worst = max(worst, abs(r - base / t) / max(base / t, 1e-300))
    return _upper("scaling", worst, rel_tol, scales=list(SCALES))


def check_comparison(instance: Instance, r: float = 0.5, pairs: int = 2, seed: int = 0,
                     samples: int = 50, tolerance: float = 1e-6) -> Verdict:
    """``M >= L`` on samples implies ``rho_M <= rho_L``.

    With the length normalized to ``max l = 1`` one has ``l^r >= l``, so the
    Lipschitz seminorm ``M`` dominates the Hoelder seminorm ``L = L^r``.
    """
    lf = instance.length
    norm = LengthFunction(lf.group, lf.values / lf.values.max())
    M = LengthLipschitzSeminorm(instance.action, norm, warn=False)
    L = LengthLipschitzSeminorm(instance.action, norm, r=r, warn=False)
    dominated = min(M(h) - L(h) for h in
                    (random_hermitian(instance.dim, [seed, 31, i], instance.algebra) for i in range(samples)))
    worst = -np.inf
    for mu, nu in _state_pairs(instance, pairs, seed):
        worst = max(worst, spectral_distance(M, mu, nu, tolerance=tolerance).lo
                    - spectral_distance(L, mu, nu, tolerance=tolerance).hi)
    margin = min(2 * tolerance - worst, dominated + 1e-12)
    return Verdict("comparison", bool(margin >= 0), float(margin),
                   {"r": r, "min_M_minus_L": float(dominated), "max_rhoM_minus_rhoL": float(worst)})


def check_metric_axioms(instance: Instance, seminorm=None, triples: int = 3, seed: int = 0,
                        tolerance: float = 1e-6) -> Verdict:
    L = seminorm or LengthLipschitzSeminorm(instance.action, instance.length, warn=False)
    ctx = MetricContext(L)
    n = instance.dim
    sym = tri = -np.inf
    for i in range(triples):
        s = [random_state(n, [seed, 37, i, j], instance.algebra) for j in range(3)]
        d = {}
        for a, b in ((0, 1), (1, 0), (1, 2), (0, 2)):
            d[a, b] = _solve(ctx, s[a], s[b], tolerance, 500)
        sym = max(sym, abs(d[0, 1].value - d[1, 0].value) - 2 * tolerance)
        tri = max(tri, d[0, 2].value - d[0, 1].value - d[1, 2].value - 3 * tolerance)
    margin = -max(sym, tri)
    return Verdict("metric_axioms", bool(margin >= 0), float(margin), {"triples": triples})


def check_kantorovich(instance: Instance, pairs: int = 5, seed: int = 0, tolerance: float = 1e-6) -> Verdict:
    L = LengthLipschitzSeminorm(instance.action, instance.length, warn=False)
    ctx = MetricContext(L)
    space = metric_from_length(instance.action.group, instance.length)
    worst = 0.0
    for mu, nu in _state_pairs(instance, pairs, seed):
        r = _solve(ctx, mu, nu, tolerance, 500)
        k = kantorovich_lp(space, np.diag(mu.rho).real, np.diag(nu.rho).real)
        worst = max(worst, abs(r.value - k))
    return _upper("kantorovich", worst, tolerance + 1e-9, pairs=pairs)


def check_dirac_lie_bridging(instance: Instance, pairs: int = 2, seed: int = 0,
                             tolerance: float = 1e-6) -> Verdict:
    """``||da|| / sqrt(m) <= ||[D, a]|| <= m ||da||`` turned into distance bounds.

    ``rho_D <= sqrt(m) rho_lie`` is checked against the lie upper bound (valid
    because every lie cut is a valid inequality) and ``rho_D >= rho_lie / m``
    against the lie lower estimate, which can only overstate the left side.
    """
    m = instance.lie.lie_dim
    D = DiracSeminorm(instance.dirac)
    lie = LieSeminorm(instance.lie)
    worst = np.inf
    for mu, nu in _state_pairs(instance, pairs, seed):
        rd = spectral_distance(D, mu, nu, tolerance=tolerance)
        rl = spectral_distance(lie, mu, nu, tolerance=tolerance, max_iterations=200)
        worst = min(worst, np.sqrt(m) * rl.hi + tolerance - rd.lo, rd.hi + tolerance - rl.lo / m)
    return Verdict("dirac_lie_bridging", bool(worst >= 0), float(worst), {"m": m, "pairs": pairs})


# ---- suite ------------------------------------------------------------------------

def verify_suite(instance: Instance, seed: int = 0, pairs: int = 3, tolerance: float = 1e-6,
                 clifford: CliffordGenerators | None = None) -> SuiteResult:
    """Run every check that applies to ``instance``.

    ``clifford`` replaces the instance's Clifford generators in the relation
    check (used for fault injection).
    """
    v: list[Verdict] = []
    if instance.action is not None:
        v.append(check_length(instance.length))
        v.append(check_ergodic(instance))
        if v[-1].passed:
            ctx = MetricContext(LengthLipschitzSeminorm(instance.action, instance.length, warn=False))
            v.append(check_diameter(instance, pairs, seed, tolerance, context=ctx))
            v.append(check_scaling(instance, pairs=1, seed=seed))
            v.append(check_comparison(instance, pairs=1, seed=seed, tolerance=tolerance))
            v.append(check_metric_axioms(instance, triples=1, seed=seed, tolerance=tolerance))
            if instance.kind == "commutative":
                v.append(check_kantorovich(instance, pairs, seed, tolerance))
    if instance.dirac is not None or clifford is not None:
        v.append(check_clifford(clifford if clifford is not None else instance.dirac.clifford))
    if instance.dirac is not None:
        v.append(check_dirac_hermitian(instance))
        v.append(check_commutator_lift(instance, samples=10, seed=seed))
        v.append(check_sandwich(instance, samples=50, seed=seed))
        v.append(check_scaling(instance, DiracSeminorm(instance.dirac), pairs=1, seed=seed))
        v.append(check_dirac_lie_bridging(instance, pairs=1, seed=seed, tolerance=tolerance))
    if instance.lie is not None:
        v.append(check_smoothness(instance, samples=20, seed=seed))
    v.append(check_trace_property(instance, samples=20, seed=seed))
    v.append(check_numerical_radius(instance, samples=5, seed=seed))
    return SuiteResult(instance.kind, v)
