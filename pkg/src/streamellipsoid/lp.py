"""Small dense revised simplex for ``min c^T x  s.t.  A x = b, x >= 0``.

Meant for a handful of rows and up to a few thousand columns.  The basis
matrix is re-solved from scratch at every pivot, which is cheap at that
size and avoids drift in an updated inverse.
"""

from dataclasses import dataclass

import numpy as np

from .errors import LPFailure

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    x: np.ndarray
    objective: float
    basis: np.ndarray
    status: str
    iterations: int


def _solve(bmat, rhs):
    try:
        return np.linalg.solve(bmat, rhs)
    except np.linalg.LinAlgError as exc:
        raise LPFailure("basis matrix became singular") from exc


def primal_simplex(c, a, b, basis, tol=1e-10, max_iter=None):
    """Primal simplex from a primal-feasible ``basis``.

    Dantzig pricing, switching to Bland's rule after a run of degenerate
    pivots so that cycling cannot occur.  Returns ``(basis, status, iters)``.
    """
    m, n = a.shape
    basis = np.array(basis, dtype=int)
    max_iter = max_iter or 50 * (m + n)
    bland = False
    stall = 0
    for it in range(max_iter):
        bmat = a[:, basis]
        xb = _solve(bmat, b)
        y = _solve(bmat.T, c[basis])
        rc = c - a.T @ y
        rc[basis] = 0.0
        if bland:
            cand = np.flatnonzero(rc < -tol)
            if cand.size == 0:
                return basis, OPTIMAL, it
            j = int(cand[0])
        else:
            j = int(np.argmin(rc))
            if rc[j] >= -tol:
                return basis, OPTIMAL, it
        col = _solve(bmat, a[:, j])
        pos = np.flatnonzero(col > tol)
        if pos.size == 0:
            return basis, UNBOUNDED, it
        ratios = np.maximum(xb[pos], 0.0) / col[pos]
        best = ratios.min()
        ties = pos[ratios <= best + tol * max(1.0, best)]
        # Bland: leave by smallest variable index among ties
        r = int(ties[np.argmin(basis[ties])]) if bland else int(ties[0])
        if best <= tol:
            stall += 1
            if stall > 2 * m:
                bland = True
        else:
            stall = 0
        basis[r] = j
    raise LPFailure(f"simplex iteration cap {max_iter} reached")


def dual_simplex(c, a, b, basis, tol=1e-10, max_iter=None):
    """Dual simplex from a dual-feasible ``basis`` (reduced costs >= 0).

    Used to re-optimize after only ``b`` changed.  Returns
    ``(basis, status, iters)``; status ``infeasible`` means the primal has
    no feasible point.
    """
    m, n = a.shape
    basis = np.array(basis, dtype=int)
    max_iter = max_iter or 50 * (m + n)
    for it in range(max_iter):
        bmat = a[:, basis]
        xb = _solve(bmat, b)
        r = int(np.argmin(xb))
        if xb[r] >= -tol * max(1.0, np.abs(xb).max()):
            return basis, OPTIMAL, it
        y = _solve(bmat.T, c[basis])
        rc = c - a.T @ y
        rc[basis] = 0.0
        row = _solve(bmat.T, np.eye(m)[r]) @ a
        row[basis] = 0.0
        neg = np.flatnonzero(row < -tol)
        if neg.size == 0:
            return basis, INFEASIBLE, it
        ratios = np.maximum(rc[neg], 0.0) / -row[neg]
        j = int(neg[np.argmin(ratios)])
        basis[r] = j
    raise LPFailure(f"dual simplex iteration cap {max_iter} reached")


def _phase_one(a, b, tol):
    """Feasible basis for ``A x = b, x >= 0`` or ``None``; may drop redundant rows."""
    m, n = a.shape
    sign = np.where(b < 0, -1.0, 1.0)
    a1 = np.hstack([a * sign[:, None], np.eye(m)])
    b1 = b * sign
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    basis = np.arange(n, n + m)
    basis, status, _ = primal_simplex(c1, a1, b1, basis, tol=tol)
    xb = _solve(a1[:, basis], b1)
    if xb[basis >= n].sum() > 1e-8 * max(1.0, np.abs(b1).max()):
        return None, None
    # pivot remaining (zero-level) artificials out of the basis
    keep = np.ones(m, dtype=bool)
    for r in range(m):
        if basis[r] < n:
            continue
        brow = _solve(a1[:, basis].T, np.eye(m)[r]) @ a1[:, :n]
        brow[basis[basis < n]] = 0.0
        cand = np.flatnonzero(np.abs(brow) > 1e-9)
        if cand.size:
            basis[r] = int(cand[0])
        else:
            keep[r] = False  # redundant equality
    return basis[keep], keep


def solve_standard_form(c, a, b, basis=None, tol=1e-10):
    """Solve ``min c^T x, A x = b, x >= 0``.

    ``basis`` may supply a primal-feasible starting basis, which skips
    phase one.
    """
    c = np.asarray(c, dtype=float)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = a.shape
    if basis is None:
        basis, rows = _phase_one(a, b, tol)
        if basis is None:
            return LPResult(np.full(n, np.nan), np.nan, np.array([], dtype=int), INFEASIBLE, 0)
        a, b = a[rows], b[rows]
    basis, status, it = primal_simplex(c, a, b, basis, tol=tol)
    x = np.zeros(n)
    if status == OPTIMAL:
        x[basis] = _solve(a[:, basis], b)
    return LPResult(x, float(c @ x) if status == OPTIMAL else -np.inf, basis, status, it)
