"""Dense two-phase simplex solver for small equality-form linear programs.

Solves min (or max) of c.x subject to A x = b and x >= 0.  Bland's rule
is used for both the entering and the leaving choice, which rules out
cycling on the degenerate programs that show up in channel-ordering
feasibility tests.  Everything is dense and built on numpy; the sizes
in this package stay in the tens of variables, so tableau updates are
cheap and there is no need for sparsity or a revised formulation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, SolverError

_PIVOT_TOL = 1e-9
_COST_TOL = 1e-10
_FEAS_TOL = 1e-8
_MAX_PIVOTS = 50_000


@dataclass(frozen=True)
class LpSolution:
    """Outcome of one solve.

    ``status`` is ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
    ``x`` and ``objective`` are populated only for optimal solves.
    """

    status: str
    x: np.ndarray | None
    objective: float | None


def _pivot(tab: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    for i in range(tab.shape[0]):
        if i != row and tab[i, col] != 0.0:
            tab[i] -= tab[i, col] * tab[row]
    basis[row] = col


def _run_simplex(tab: np.ndarray, basis: list[int], ncols: int) -> str:
    """Pivot to optimality over the first ``ncols`` columns. Bland's rule."""
    m = tab.shape[0] - 1
    for _ in range(_MAX_PIVOTS):
        enter = -1
        for j in range(ncols):
            if tab[-1, j] < -_COST_TOL:
                enter = j
                break
        if enter < 0:
            return "optimal"

        leave = -1
        best = np.inf
        for i in range(m):
            a = tab[i, enter]
            if a > _PIVOT_TOL:
                ratio = tab[i, -1] / a
                if ratio < best - 1e-12 or (
                    abs(ratio - best) <= 1e-12
                    and (leave < 0 or basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(tab, basis, leave, enter)
    raise SolverError("simplex exceeded its pivot budget")


def solve_lp(
    c,
    a_eq,
    b_eq,
    maximize: bool = False,
) -> LpSolution:
    """Solve an equality-form linear program with non-negative variables.

    Parameters
    ----------
    c:
        Objective coefficients, length n.
    a_eq, b_eq:
        Equality constraints ``a_eq @ x == b_eq``; ``a_eq`` is m x n.
    maximize:
        Flip the objective sense.  The reported objective is always in
        the caller's sense.
    """
    c = np.asarray(c, dtype=float).ravel()
    a = np.asarray(a_eq, dtype=float)
    b = np.asarray(b_eq, dtype=float).ravel()
    n = c.shape[0]
    if a.size == 0:
        a = a.reshape(0, n)
    if a.ndim != 2 or a.shape[1] != n:
        raise ArgumentError(f"constraint matrix shape {a.shape} does not match {n} variables")
    if b.shape[0] != a.shape[0]:
        raise ArgumentError("constraint right-hand side length mismatch")
    m = a.shape[0]

    sense = -1.0 if maximize else 1.0
    obj = sense * c

    if m == 0:
        x = np.zeros(n)
        return LpSolution("optimal", x, 0.0)

    a = a.copy()
    b = b.copy()
    neg = b < 0.0
    a[neg] *= -1.0
    b[neg] *= -1.0

    # phase 1: artificial basis, minimize the artificial mass
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = a
    tab[:m, n : n + m] = np.eye(m)
    tab[:m, -1] = b
    tab[-1, :n] = -a.sum(axis=0)
    tab[-1, -1] = -b.sum()
    basis = list(range(n, n + m))

    status = _run_simplex(tab, basis, n + m)
    if status != "optimal" or -tab[-1, -1] > _FEAS_TOL:
        return LpSolution("infeasible", None, None)

    # drive any artificial still in the basis out, or drop its row
    keep = []
    for r in range(m):
        if basis[r] >= n:
            piv = -1
            for j in range(n):
                if abs(tab[r, j]) > _PIVOT_TOL:
                    piv = j
                    break
            if piv >= 0:
                _pivot(tab, basis, r, piv)
                keep.append(r)
            # a row with no usable pivot is redundant and is dropped
        else:
            keep.append(r)
    if len(keep) < m:
        rows = keep + [m]
        tab = tab[rows]
        basis = [basis[r] for r in keep]
        m = len(keep)

    # phase 2 on the original columns
    tab = np.hstack([tab[:, :n], tab[:, -1:]])
    cost = np.zeros(n + 1)
    cost[:n] = obj
    for r in range(m):
        cost -= obj[basis[r]] * tab[r]
    tab[-1] = cost

    status = _run_simplex(tab, basis, n)
    if status != "optimal":
        return LpSolution("unbounded", None, None)

    x = np.zeros(n)
    for r in range(m):
        x[basis[r]] = tab[r, -1]
    x[x < 0.0] = 0.0
    value = float(obj @ x)
    return LpSolution("optimal", x, sense * value)
