"""Pure-Python simplex pivoting kernel (numpy row operations).

Same contract as the compiled ``_simplex`` module; selected when the
extension is unavailable or ``GPTCHECK_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import numpy as np

OPTIMAL, UNBOUNDED, ITERATION_LIMIT = 0, 1, 2


def pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def run_simplex(T: np.ndarray, basis: np.ndarray, n_enter: int, tol: float,
                max_iter: int) -> int:
    """Minimize over the tableau ``T`` in place using Bland's rule.

    Rows ``0..m-1`` hold ``[A | b]`` in canonical form for ``basis``; the last
    row holds reduced costs and ``-objective``.  Only columns ``< n_enter``
    may enter the basis.
    """
    m = T.shape[0] - 1
    rhs = T.shape[1] - 1
    for _ in range(max_iter):
        costs = T[m, :n_enter]
        candidates = np.flatnonzero(costs < -tol)
        if candidates.size == 0:
            return OPTIMAL
        col = int(candidates[0])
        column = T[:m, col]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            return UNBOUNDED
        ratios = T[rows, rhs] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * (1.0 + abs(best))]
        row = int(ties[np.argmin(basis[ties])])
        pivot(T, basis, row, col)
    return ITERATION_LIMIT
