"""Dense tableau simplex for small linear programs.

Pivoting is deterministic: Dantzig's rule with lowest-index tie breaking,
falling back to Bland's rule after a run of degenerate pivots, and a
lowest-index ratio test. :class:`CuttingPlaneLP` reuses the same tableau and
restores optimality with dual simplex pivots after each added row.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, InputError

PIVOT_TOL = 1e-9
OPT_TOL = 1e-11
FEAS_TOL = 1e-9
REFACTOR_EVERY = 64
DEGENERATE_SWITCH = 30


class UnboundedError(RuntimeError):
    pass


@dataclass
class LPResult:
    value: float
    x: np.ndarray
    pivots: int


class Tableau:
    """Full tableau for ``max c.x  s.t.  A x = b, x >= 0`` with a known feasible basis."""

    def __init__(self, A: np.ndarray, b: np.ndarray, c: np.ndarray, basis: list[int]):
        self.A = np.array(A, dtype=float)
        self.b = np.array(b, dtype=float)
        self.c = np.array(c, dtype=float)
        self.basis = list(basis)
        self.pivots = 0
        self._since_refactor = 0
        self.refactor()

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def ncols(self) -> int:
        return self.A.shape[1]

    def refactor(self):
        bm = self.A[:, self.basis]
        body = np.linalg.solve(bm, np.column_stack([self.A, self.b])) if self.m else \
            np.zeros((0, self.ncols + 1))
        t = np.empty((self.m + 1, self.ncols + 1))
        t[:-1] = body
        cb = self.c[self.basis]
        t[-1, :-1] = cb @ body[:, :-1] - self.c
        t[-1, -1] = cb @ body[:, -1]
        for i, j in enumerate(self.basis):
            t[:, j] = 0.0
            t[i, j] = 1.0
        self.T = t
        self._since_refactor = 0

    def pivot(self, r: int, j: int):
        t = self.T
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        t[:, j] = 0.0
        t[r, j] = 1.0
        self.basis[r] = j
        self.pivots += 1
        self._since_refactor += 1
        if self._since_refactor >= max(REFACTOR_EVERY, self.m):
            self.refactor()

    def _leaving_primal(self, j: int) -> int | None:
        col = self.T[:-1, j]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            return None
        ratios = self.T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        return int(min(ties, key=lambda i: self.basis[i]))

    def primal(self, allowed: np.ndarray | None = None, max_pivots: int = 100000):
        degenerate = 0
        for _ in range(max_pivots):
            d = self.T[-1, :-1]
            cand = d < -OPT_TOL
            if allowed is not None:
                cand &= allowed
            idx = np.flatnonzero(cand)
            if idx.size == 0:
                return
            if degenerate >= DEGENERATE_SWITCH:
                j = int(idx[0])
            else:
                j = int(idx[np.argmin(d[idx])])
            r = self._leaving_primal(j)
            if r is None:
                raise UnboundedError("linear program is unbounded")
            degenerate = degenerate + 1 if self.T[r, -1] <= FEAS_TOL else 0
            self.pivot(r, j)
        raise RuntimeError("simplex pivot limit reached")

    def dual(self, max_pivots: int = 100000):
        for _ in range(max_pivots):
            rhs = self.T[:-1, -1]
            r = int(np.argmin(rhs)) if self.m else 0
            if not self.m or rhs[r] >= -FEAS_TOL:
                return
            row = self.T[r, :-1]
            cols = np.flatnonzero(row < -PIVOT_TOL)
            if cols.size == 0:
                raise InfeasibleError("linear program is infeasible")
            ratios = np.maximum(self.T[-1, cols], 0.0) / -row[cols]
            best = ratios.min()
            j = int(cols[np.flatnonzero(ratios <= best + 1e-12 * max(1.0, best))[0]])
            self.pivot(r, j)
        raise RuntimeError("dual simplex pivot limit reached")

    def add_row(self, coeffs: np.ndarray, rhs: float):
        """Append ``coeffs . x + s = rhs`` with a fresh basic slack ``s``."""
        self.add_rows(np.atleast_2d(coeffs), np.atleast_1d(rhs))

    def add_rows(self, coeffs: np.ndarray, rhs: np.ndarray):
        """Append rows ``coeffs_i . x + s_i = rhs_i``, each with a fresh basic slack."""
        coeffs = np.asarray(coeffs, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        r, w = coeffs.shape
        m, n = self.A.shape
        a = np.zeros((m + r, n + r))
        a[:m, :n] = self.A
        a[m:, :w] = coeffs
        a[m:, n:] = np.eye(r)
        self.A = a
        self.b = np.append(self.b, rhs)
        self.c = np.append(self.c, np.zeros(r))
        t = np.zeros((m + r + 1, n + r + 1))
        t[:m, :n] = self.T[:m, :n]
        t[:m, -1] = self.T[:m, -1]
        t[-1, :n] = self.T[-1, :n]
        t[-1, -1] = self.T[-1, -1]
        new = np.zeros((r, n + r + 1))
        new[:, :w] = coeffs
        new[:, n:n + r] = np.eye(r)
        new[:, -1] = rhs
        # eliminate the current basic columns from the new rows
        if m:
            new -= new[:, self.basis] @ t[:m]
        t[m:m + r] = new
        self.T = t
        self.basis.extend(range(n, n + r))

    def drop_rows(self, rows):
        """Delete rows whose basic variable is their own slack, together with that slack column.

        The slack column is a unit vector in the tableau, so the remaining basis stays
        valid and the current vertex (restricted to the other variables) is unchanged.
        """
        rows = sorted(set(int(r) for r in rows))
        if not rows:
            return
        cols = [self.basis[r] for r in rows]
        keep_r = np.setdiff1d(np.arange(self.m), rows)
        keep_c = np.setdiff1d(np.arange(self.ncols), cols)
        remap = -np.ones(self.ncols, dtype=int)
        remap[keep_c] = np.arange(keep_c.size)
        self.T = self.T[np.ix_(np.append(keep_r, self.m), np.append(keep_c, self.ncols))]
        self.A = self.A[np.ix_(keep_r, keep_c)]
        self.b = self.b[keep_r]
        self.c = self.c[keep_c]
        self.basis = [int(remap[self.basis[r]]) for r in keep_r]

    def solution(self) -> np.ndarray:
        x = np.zeros(self.ncols)
        x[self.basis] = self.T[:-1, -1]
        return x

    @property
    def value(self) -> float:
        return float(self.T[-1, -1])


def lp_solve(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None) -> LPResult:
    """Maximize ``c . x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``lo <= x <= hi``.

    ``bounds`` is a pair ``(lo, hi)`` of scalars or arrays; ``lo`` must be finite,
    ``hi`` may be ``inf``. Defaults to ``x >= 0``.
    """
    c = np.asarray(c, dtype=float).ravel()
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    if A_ub.shape[0] != b_ub.size or A_eq.shape[0] != b_eq.size:
        raise InputError("constraint matrix and right-hand side sizes differ")
    lo, hi = (0.0, np.inf) if bounds is None else bounds
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (n,)).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (n,)).copy()
    if not np.all(np.isfinite(lo)) or np.any(hi < lo):
        raise InputError("invalid bounds")
    for arr in (c, A_ub, b_ub, A_eq, b_eq):
        if not np.all(np.isfinite(arr)):
            raise InputError("non-finite LP data")

    # shift x = lo + y, y >= 0; finite upper bounds become rows
    fin = np.flatnonzero(np.isfinite(hi))
    ub_rows = np.vstack([A_ub, np.eye(n)[fin]])
    ub_rhs = np.concatenate([b_ub - A_ub @ lo, (hi - lo)[fin]])
    eq_rhs = b_eq - A_eq @ lo

    m_ub, m_eq = ub_rows.shape[0], A_eq.shape[0]
    m = m_ub + m_eq
    neg_ub = ub_rhs < 0
    n_art = int(neg_ub.sum()) + m_eq
    ncols = n + m_ub + n_art
    A = np.zeros((m, ncols))
    b = np.zeros(m)
    basis = []
    art = n + m_ub
    for i in range(m_ub):
        sign = -1.0 if neg_ub[i] else 1.0
        A[i, :n] = sign * ub_rows[i]
        A[i, n + i] = sign
        b[i] = sign * ub_rhs[i]
        if neg_ub[i]:
            A[i, art] = 1.0
            basis.append(art)
            art += 1
        else:
            basis.append(n + i)
    for k in range(m_eq):
        i = m_ub + k
        sign = -1.0 if eq_rhs[k] < 0 else 1.0
        A[i, :n] = sign * A_eq[k]
        b[i] = sign * eq_rhs[k]
        A[i, art] = 1.0
        basis.append(art)
        art += 1

    pivots = 0
    is_art = np.zeros(ncols, dtype=bool)
    is_art[n + m_ub:] = True
    if n_art:
        phase1 = Tableau(A, b, -is_art.astype(float), basis)
        phase1.primal()
        if phase1.value < -FEAS_TOL * max(1.0, np.abs(b).max()):
            raise InfeasibleError("linear program is infeasible")
        keep = list(range(phase1.m))
        for i in range(phase1.m):
            if not is_art[phase1.basis[i]]:
                continue
            row = phase1.T[i, :-1]
            cand = np.flatnonzero((np.abs(row) > PIVOT_TOL) & ~is_art)
            if cand.size:
                phase1.pivot(i, int(cand[0]))
            else:
                keep.remove(i)
        pivots += phase1.pivots
        basis = [phase1.basis[i] for i in keep]
        A, b = A[keep], b[keep]

    cols = np.flatnonzero(~is_art)
    remap = {int(j): k for k, j in enumerate(cols)}
    obj = np.zeros(cols.size)
    obj[:n] = c
    tab = Tableau(A[:, cols], b, obj, [remap[j] for j in basis])
    tab.primal()
    tab.refactor()
    y = tab.solution()[:n]
    x = lo + np.maximum(y, 0.0)
    return LPResult(float(c @ x), x, pivots + tab.pivots)


class CuttingPlaneLP:
    """``max d . c`` over ``|c_k| <= R`` and accumulated cuts ``g_i . c <= 1``.

    Free variables are split as ``c = p - q`` with ``p, q >= 0``; the box rows keep
    the problem bounded and the origin feasible.
    """

    def __init__(self, objective, radius: float):
        d = np.asarray(objective, dtype=float)
        k = d.size
        self.k = k
        eye = np.eye(k)
        rows = np.vstack([np.hstack([eye, -eye]), np.hstack([-eye, eye])]) if k else np.zeros((0, 0))
        A = np.hstack([rows, np.eye(2 * k)])
        b = np.full(2 * k, float(radius))
        c = np.concatenate([d, -d, np.zeros(2 * k)])
        self.tab = Tableau(A, b, c, list(range(2 * k, 4 * k)))
        self.ncuts = 0
        self.tab.primal()

    def add_cut(self, normal, rhs: float = 1.0):
        self.add_cuts(np.atleast_2d(normal), np.atleast_1d(rhs))

    def add_cuts(self, normals, rhs=1.0):
        """Add rows ``g_i . c <= rhs_i`` in one tableau update."""
        g = np.asarray(normals, dtype=float).reshape(-1, self.k)
        if g.shape[0] == 0:
            return
        rhs = np.broadcast_to(np.asarray(rhs, dtype=float), (g.shape[0],))
        self.tab.add_rows(np.hstack([g, -g]), rhs)
        self.ncuts += g.shape[0]

    def solve(self) -> LPResult:
        before = self.tab.pivots
        self.tab.dual()
        self.tab.primal()
        x = self.tab.solution()
        return LPResult(self.tab.value, x[:self.k] - x[self.k:2 * self.k], self.tab.pivots - before)

    def prune(self, slack_tol: float = 1e-7) -> int:
        """Drop cuts that are strictly slack at the current vertex; the box rows stay."""
        t = self.tab
        rhs = t.T[:-1, -1]
        rows = [i for i, j in enumerate(t.basis)
                if j == self._slack_of_row(i) and rhs[i] > slack_tol and i >= 2 * self.k]
        t.drop_rows(rows)
        self.ncuts -= len(rows)
        return len(rows)

    def _slack_of_row(self, i: int) -> int:
        # cut rows are appended with their slack as the newest column, so row i owns column 2k + i
        return 2 * self.k + i

    def refactor(self):
        self.tab.refactor()
