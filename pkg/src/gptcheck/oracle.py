"""Brute-force LP oracle by vertex enumeration.

Independent of the simplex path: every choice of ``n`` active constraints is
solved as a linear system and kept if feasible.  Only meaningful for bounded
problems in a handful of variables; used to cross-check :func:`lp.lp_solve`.
"""

from __future__ import annotations

import itertools

import numpy as np


def enumerate_vertices(A_eq, b_eq, A_ub, b_ub, n: int, tol: float = 1e-9) -> np.ndarray:
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, float))
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, float).ravel()
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, float).ravel()
    me, mu = len(A_eq), len(A_ub)
    verts = []
    k = n - (np.linalg.matrix_rank(A_eq, tol=1e-10) if me else 0)
    for active in itertools.combinations(range(mu), k):
        M = np.vstack([A_eq, A_ub[list(active)]])
        rhs = np.concatenate([b_eq, b_ub[list(active)]])
        if np.linalg.matrix_rank(M, tol=1e-10) < n:
            continue
        x, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        scale = 1.0 + np.abs(x).max()
        if me and np.max(np.abs(A_eq @ x - b_eq)) > tol * scale:
            continue
        if mu and np.max(A_ub @ x - b_ub) > tol * scale:
            continue
        verts.append(x)
    return np.array(verts).reshape(-1, n)


def brute_force_lp(c, A_eq=None, b_eq=None, A_ub=None, b_ub=None, maximize=False, tol=1e-9):
    """Return ``(value, x)`` at the best vertex, or ``None`` if no vertex exists."""
    c = np.asarray(c, float)
    verts = enumerate_vertices(A_eq, b_eq, A_ub, b_ub, c.size, tol)
    if len(verts) == 0:
        return None
    vals = verts @ c
    best = int(np.argmax(vals) if maximize else np.argmin(vals))
    return float(vals[best]), verts[best]
