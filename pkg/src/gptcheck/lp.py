"""Dense two-phase simplex for small linear programs.

Every existential question about a polytopal theory (is there a state with
these effect values, is there an effect separating two states) is answered
by :func:`lp_solve`.  Problem sizes are tiny (tens of variables, a few
hundred constraints), so a dense tableau with Bland's anti-cycling rule is
used for robustness; the pivot loop runs in a compiled kernel when one is
available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._tolerance import eps
from .errors import UnboundedError, ValidationError

__all__ = ["LPSolution", "lp_solve", "BACKEND"]

BACKEND = _kernels.BACKEND
MAX_ITER = 50_000


@dataclass(frozen=True)
class LPSolution:
    value: float
    x: np.ndarray


def _as_matrix(A, n, name):
    if A is None:
        return np.zeros((0, n))
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return np.zeros((0, n))
    if A.shape[1] != n:
        raise ValidationError(f"{name} has {A.shape[1]} columns, expected {n}")
    return A


def _as_vector(b, m, name):
    if m == 0:
        return np.zeros(0)
    b = np.asarray(b, dtype=float).ravel()
    if b.shape != (m,):
        raise ValidationError(f"{name} has length {b.shape[0]}, expected {m}")
    return b


def lp_solve(objective, A_eq=None, b_eq=None, A_ub=None, b_ub=None, *,
             maximize: bool = False, nonneg=False, kernel=None) -> LPSolution | None:
    """Optimize ``objective @ x`` subject to ``A_eq x = b_eq`` and ``A_ub x <= b_ub``.

    Variables are free unless flagged by ``nonneg`` (a bool or a per-variable
    mask).  Returns ``None`` when the constraints are infeasible and raises
    :class:`UnboundedError` when the objective is unbounded.  ``kernel``
    overrides the pivoting backend (a module with ``run_simplex`` and ``pivot``).
    """
    kernel = kernel or _kernels.simplex
    tol = eps()
    c = np.asarray(objective, dtype=float).ravel()
    n = c.size
    A_eq = _as_matrix(A_eq, n, "A_eq")
    A_ub = _as_matrix(A_ub, n, "A_ub")
    b_eq = _as_vector(b_eq, A_eq.shape[0], "b_eq")
    b_ub = _as_vector(b_ub, A_ub.shape[0], "b_ub")
    mask = np.broadcast_to(np.asarray(nonneg, dtype=bool), (n,))

    # Split free variables: x = x_pos - x_neg.
    free = np.flatnonzero(~mask)
    n_struct = n + free.size
    me, mu = A_eq.shape[0], A_ub.shape[0]
    m = me + mu
    n_real = n_struct + mu

    A = np.zeros((m, n_real))
    A[:me, :n] = A_eq
    A[me:, :n] = A_ub
    A[:, n:n_struct] = -A[:, free]
    A[me:, n_struct:] = np.eye(mu)
    b = np.concatenate([b_eq, b_ub])

    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    # Slack columns with coefficient +1 start in the basis; other rows get artificials.
    basis = np.full(m, -1, dtype=np.int64)
    for r in range(me, m):
        if not flip[r]:
            basis[r] = n_struct + (r - me)
    need = np.flatnonzero(basis < 0)
    n_art = need.size
    T = np.zeros((m + 1, n_real + n_art + 1))
    T[:m, :n_real] = A
    T[:m, -1] = b
    for k, r in enumerate(need):
        T[r, n_real + k] = 1.0
        basis[r] = n_real + k

    if n_art:
        T[m, :n_real] = -A[need].sum(axis=0)
        T[m, -1] = -b[need].sum()
        status = kernel.run_simplex(T, basis, n_real, tol, MAX_ITER)
        if status == 2:
            raise RuntimeError("simplex iteration limit reached in phase 1")
        scale = 1.0 + (np.abs(b).max() if m else 0.0)
        if -T[m, -1] > tol * scale:
            return None
        keep = []
        for r in range(m):
            if basis[r] >= n_real:
                cols = np.flatnonzero(np.abs(T[r, :n_real]) > tol)
                if cols.size == 0:
                    continue  # redundant row
                kernel.pivot(T, basis, r, int(cols[np.argmax(np.abs(T[r, cols]))]))
            keep.append(r)
        T = np.ascontiguousarray(np.delete(np.delete(T, np.arange(n_real, n_real + n_art), axis=1),
                                           [r for r in range(m) if r not in keep], axis=0))
        basis = np.ascontiguousarray(basis[keep])
        m = len(keep)

    cost = np.zeros(n_real)
    cost[:n] = -c if maximize else c
    cost[n:n_struct] = -cost[free]
    cb = cost[basis]
    T[m, :n_real] = cost - cb @ T[:m, :n_real]
    T[m, -1] = -cb @ T[:m, -1]
    status = kernel.run_simplex(T, basis, n_real, tol, MAX_ITER)
    if status == 1:
        raise UnboundedError("objective is unbounded on the feasible set")
    if status == 2:
        raise RuntimeError("simplex iteration limit reached in phase 2")

    z = np.zeros(n_real)
    z[basis] = T[:m, -1]
    x = z[:n].copy()
    x[free] -= z[n:n_struct]
    return LPSolution(float(c @ x), x)
