"""Polytopal probabilistic theories.

States of a system are the convex hull of finitely many deterministic
vertices in ``R^dim``; effects are all covectors taking values in ``[0, 1]``
on every vertex, and the unit effect takes value 1 on every vertex.  Under
that choice every existential notion below (propositions, sharp states,
complementarity, conclusive discrimination) is a small LP.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._tolerance import eps
from .errors import PreconditionError, SizeError, ValidationError
from .lp import lp_solve
from .tables import JointTable, Purity

__all__ = [
    "ConvexStateSpace",
    "Proposition",
    "Discrimination",
    "Reduction",
    "PolytopeScenario",
    "classical_simplex",
    "classical_bit",
    "square_space",
    "qubit_octahedron",
    "bloch_polytope",
    "product_space",
    "indicator",
    "is_valid_effect",
    "is_complete_test",
    "in_hull",
    "is_extremal",
    "deterministic_state",
    "is_proposition",
    "make_proposition",
    "is_sharp_state",
    "find_common_sharp_state",
    "are_complementary",
    "reduce_to_two",
    "separation",
    "conclusive_discrimination",
    "polytope_table",
    "polytope_steer",
]

MAX_PROPOSITIONS = 12


@dataclass(frozen=True, eq=False)
class ConvexStateSpace:
    vertices: np.ndarray
    unit_effect: np.ndarray
    name: str = ""

    def __post_init__(self):
        V = np.atleast_2d(np.array(self.vertices, dtype=float))
        e = np.array(self.unit_effect, dtype=float).ravel()
        if V.shape[1] != e.size:
            raise ValidationError("vertices and unit effect have different dimensions")
        tol = eps()
        bad = np.flatnonzero(np.abs(V @ e - 1) > tol)
        if bad.size:
            raise ValidationError(f"vertices {bad.tolist()} are not deterministic under the unit effect")
        for i, j in itertools.combinations(range(len(V)), 2):
            if np.max(np.abs(V[i] - V[j])) <= tol:
                raise ValidationError(f"vertices {i} and {j} coincide")
        if np.linalg.matrix_rank(V, tol=1e-10) < e.size:
            raise ValidationError("vertices do not span the ambient space")
        V.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "unit_effect", e)

    @property
    def dim(self) -> int:
        return self.unit_effect.size

    def normalization(self, state) -> float:
        return float(self.unit_effect @ np.asarray(state, dtype=float))


def classical_simplex(n: int) -> ConvexStateSpace:
    return ConvexStateSpace(np.eye(n), np.ones(n), name=f"classical-{n}")


def classical_bit() -> ConvexStateSpace:
    return classical_simplex(2)


def indicator(n: int, k: int) -> np.ndarray:
    a = np.zeros(n)
    a[k] = 1.0
    return a


def square_space() -> ConvexStateSpace:
    """Unit square in coordinates ``(1, x, y)``."""
    verts = [[1, x, y] for x in (0, 1) for y in (0, 1)]
    return ConvexStateSpace(np.array(verts, float), [1, 0, 0], name="square")


def qubit_octahedron() -> ConvexStateSpace:
    """The six Bloch-sphere poles, coordinates ``(1, rx, ry, rz)``."""
    verts = [np.concatenate([[1.0], s * np.eye(3)[k]]) for k in range(3) for s in (1, -1)]
    return ConvexStateSpace(np.array(verts), [1, 0, 0, 0], name="qubit-octahedron")


def bloch_polytope(n_points: int = 64) -> ConvexStateSpace:
    """Inscribed polytope of the Bloch ball: the six poles plus a Fibonacci lattice.

    An approximation of the qubit; the poles are always vertices so that
    axis-aligned projective tests keep exact witnesses.
    """
    pts = [s * np.eye(3)[k] for k in range(3) for s in (1, -1)]
    golden = np.pi * (3 - np.sqrt(5))
    for i in range(n_points):
        z = 1 - 2 * (i + 0.5) / n_points
        r = np.sqrt(1 - z * z)
        pts.append(np.array([r * np.cos(golden * i), r * np.sin(golden * i), z]))
    uniq = []
    for p in pts:
        if all(np.max(np.abs(p - q)) > 1e-6 for q in uniq):
            uniq.append(p)
    verts = np.hstack([np.ones((len(uniq), 1)), np.array(uniq)])
    return ConvexStateSpace(verts, [1, 0, 0, 0], name=f"bloch-{len(uniq)}")


def product_space(a: ConvexStateSpace, b: ConvexStateSpace) -> ConvexStateSpace:
    """Minimal tensor product: vertices are products of vertices."""
    verts = [np.kron(u, v) for u in a.vertices for v in b.vertices]
    return ConvexStateSpace(np.array(verts), np.kron(a.unit_effect, b.unit_effect),
                            name=f"{a.name}x{b.name}")


# -- states and effects --------------------------------------------------------

def is_valid_effect(space: ConvexStateSpace, a) -> bool:
    vals = space.vertices @ np.asarray(a, dtype=float)
    tol = eps()
    return bool(vals.min() >= -tol and vals.max() <= 1 + tol)


def is_complete_test(space: ConvexStateSpace, effects) -> bool:
    """True iff the effects add up to the unit effect."""
    total = np.sum([np.asarray(a, dtype=float) for a in effects], axis=0)
    return bool(np.max(np.abs(total - space.unit_effect)) <= eps())


def _binary_test(space, test) -> tuple[np.ndarray, np.ndarray]:
    effects = test.effects if isinstance(test, Proposition) else test
    effects = [np.asarray(a, dtype=float).ravel() for a in effects]
    if len(effects) != 2:
        raise ValidationError(f"expected a binary test, got {len(effects)} effects")
    for a in effects:
        if a.size != space.dim:
            raise ValidationError("effect dimension does not match the state space")
        if not is_valid_effect(space, a):
            raise ValidationError(f"effect {a.tolist()} leaves [0, 1] on some vertex")
    if not is_complete_test(space, effects):
        raise ValidationError("effects do not sum to the unit effect")
    return effects[0], effects[1]


def _hull_lp(space, rows, rhs):
    """Find vertex weights ``mu >= 0`` with ``sum(mu) = 1`` and ``rows @ V.T @ mu = rhs``."""
    V = space.vertices
    A = [np.ones(len(V))]
    b = [1.0]
    for r, v in zip(rows, rhs):
        A.append(V @ r)
        b.append(v)
    sol = lp_solve(np.zeros(len(V)), A_eq=np.array(A), b_eq=np.array(b), nonneg=True)
    if sol is None:
        return None
    return sol.x @ V


def in_hull(space: ConvexStateSpace, state) -> bool:
    """Membership of a deterministic state in the convex hull of the vertices."""
    x = np.asarray(state, dtype=float)
    rows = list(np.eye(space.dim))
    return _hull_lp(space, rows, x) is not None


def is_extremal(space: ConvexStateSpace, state) -> bool:
    x = np.asarray(state, dtype=float)
    return bool(np.min(np.max(np.abs(space.vertices - x), axis=1)) <= eps())


def deterministic_state(space: ConvexStateSpace, state) -> np.ndarray:
    """Rescale a subnormalized state to unit normalization."""
    norm = space.normalization(state)
    if norm <= eps():
        raise PreconditionError("state has zero normalization")
    return np.asarray(state, dtype=float) / norm


@dataclass(frozen=True, eq=False)
class Proposition:
    """Binary complete test with states on which it is certainly true/false."""

    effects: tuple[np.ndarray, np.ndarray]
    witnesses: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)


def is_proposition(space: ConvexStateSpace, test) -> tuple[np.ndarray, np.ndarray] | None:
    """Return states ``(alpha0, alpha1)`` with ``<a_i|alpha_j> = delta_ij``, if any."""
    a0, a1 = _binary_test(space, test)
    alpha0 = _hull_lp(space, [a0, a1], [1.0, 0.0])
    if alpha0 is None:
        return None
    alpha1 = _hull_lp(space, [a0, a1], [0.0, 1.0])
    if alpha1 is None:
        return None
    return alpha0, alpha1


def make_proposition(space: ConvexStateSpace, test) -> Proposition:
    wit = is_proposition(space, test)
    if wit is None:
        raise ValidationError("test is not a proposition: no state makes it certainly true and false")
    return Proposition(_binary_test(space, test), wit)


def is_sharp_state(space: ConvexStateSpace, state, props) -> bool:
    """Every effect of every proposition is 0 or 1 on ``state``."""
    x = np.asarray(state, dtype=float)
    tol = eps()
    if abs(space.normalization(x) - 1) > tol:
        raise ValidationError("sharpness is defined for deterministic states only")
    for p in props:
        for a in _binary_test(space, p):
            v = float(a @ x)
            if min(abs(v), abs(v - 1)) > tol:
                return False
    return True


def _check_family(space, props):
    if len(props) > MAX_PROPOSITIONS:
        raise SizeError(f"at most {MAX_PROPOSITIONS} propositions supported, got {len(props)}")
    return [_binary_test(space, p) for p in props]


def _sharp_pattern_state(space, tests, pattern):
    return _hull_lp(space, [t[0] for t in tests], [float(s) for s in pattern])


def find_common_sharp_state(space: ConvexStateSpace, props) -> np.ndarray | None:
    """Search the ``2^N`` truth assignments for a state sharp for all propositions."""
    tests = _check_family(space, list(props))
    for pattern in itertools.product((1, 0), repeat=len(tests)):
        state = _sharp_pattern_state(space, tests, pattern)
        if state is not None:
            return state
    return None


def are_complementary(space: ConvexStateSpace, prop_a, prop_b) -> bool:
    for p in (prop_a, prop_b):
        if is_proposition(space, p) is None:
            raise ValidationError("argument is not a proposition")
    return find_common_sharp_state(space, [prop_a, prop_b]) is None


@dataclass(frozen=True, eq=False)
class Reduction:
    first: Proposition
    second: Proposition
    k: int
    subset: tuple[int, ...]
    other: int

    def __iter__(self):
        return iter((self.first, self.second))


def reduce_to_two(space: ConvexStateSpace, props) -> Reduction:
    """Reduce a family with no common sharp state to a complementary pair.

    Finds the largest subfamily ``phi`` sharing a sharp state, relabels its
    propositions so that a pair of opposite truth patterns are both
    realizable, averages them into one proposition and pairs it with a
    proposition outside ``phi``.  Maximality of ``phi`` makes the pair
    complementary; both outputs are verified before returning.
    """
    props = list(props)
    tests = _check_family(space, props)
    if len(tests) < 2:
        raise PreconditionError("need at least two propositions")
    for t in tests:
        if is_proposition(space, t) is None:
            raise ValidationError("family contains a test that is not a proposition")
    if find_common_sharp_state(space, tests) is not None:
        raise PreconditionError("the family has a common sharp state")
    n = len(tests)
    for k in range(n - 1, 0, -1):
        for subset in itertools.combinations(range(n), k):
            sub = [tests[i] for i in subset]
            feasible = {pat for pat in itertools.product((1, 0), repeat=k)
                        if _sharp_pattern_state(space, sub, pat) is not None}
            for pat in sorted(feasible, reverse=True):
                if tuple(1 - s for s in pat) not in feasible:
                    continue
                # Relabel each member so the pattern reads "all true".
                oriented = [t if s == 1 else (t[1], t[0]) for t, s in zip(sub, pat)]
                avg = (sum(t[0] for t in oriented) / k, sum(t[1] for t in oriented) / k)
                wit = is_proposition(space, avg)
                if wit is None:
                    continue
                first = Proposition(avg, wit)
                for other in range(n):
                    if other in subset:
                        continue
                    if find_common_sharp_state(space, [avg, tests[other]]) is None:
                        second = make_proposition(space, tests[other])
                        return Reduction(first, second, k, subset, other)
    raise PreconditionError("no complementary pair reachable by averaging")


# -- discrimination ------------------------------------------------------------

def separation(space: ConvexStateSpace, x, y) -> tuple[np.ndarray, float]:
    """Maximize ``<a|x> - <a|y>`` over valid effects ``a``."""
    V = space.vertices
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    sol = lp_solve(d, A_ub=np.vstack([V, -V]),
                   b_ub=np.concatenate([np.ones(len(V)), np.zeros(len(V))]), maximize=True)
    return sol.x, sol.value


@dataclass(frozen=True, eq=False)
class Discrimination:
    effect: np.ndarray
    value: float

    @property
    def perfect(self) -> bool:
        return abs(self.value - 1) <= eps()


def conclusive_discrimination(space: ConvexStateSpace, alpha0, alpha1) -> Discrimination | None:
    """Best effect vanishing on ``alpha0``, maximizing its value on ``alpha1``."""
    x0 = np.asarray(alpha0, dtype=float)
    x1 = np.asarray(alpha1, dtype=float)
    tol = eps()
    for x in (x0, x1):
        if abs(space.normalization(x) - 1) > tol:
            raise ValidationError("conclusive discrimination is defined for deterministic states")
    V = space.vertices
    sol = lp_solve(x1, A_eq=x0[None, :], b_eq=[0.0], A_ub=np.vstack([V, -V]),
                   b_ub=np.concatenate([np.ones(len(V)), np.zeros(len(V))]), maximize=True)
    if sol is None or sol.value <= tol:
        return None
    return Discrimination(sol.x, sol.value)


# -- bipartite polytopal scenarios -----------------------------------------------

@dataclass(frozen=True, eq=False)
class PolytopeScenario:
    """Joint state on ``space_a x space_b`` with one binary test per side.

    ``joint`` is a vector in the tensor product of the coordinate spaces; by
    default the joint state space is the minimal tensor product, which for
    classical systems is the whole classical joint space.
    """

    space_a: ConvexStateSpace
    space_b: ConvexStateSpace
    joint: np.ndarray
    a_test: tuple[np.ndarray, np.ndarray]
    b_test: tuple[np.ndarray, np.ndarray]
    joint_space: ConvexStateSpace | None = None

    def __post_init__(self):
        js = self.joint_space or product_space(self.space_a, self.space_b)
        x = np.asarray(self.joint, dtype=float).ravel()
        if x.size != js.dim:
            raise ValidationError("joint state has the wrong dimension")
        if abs(js.normalization(x) - 1) > eps():
            raise ValidationError("joint state is not deterministic")
        if not in_hull(js, x):
            raise ValidationError("joint state lies outside the joint state space")
        object.__setattr__(self, "joint_space", js)
        object.__setattr__(self, "joint", x)
        object.__setattr__(self, "a_test", _binary_test(self.space_a, self.a_test))
        object.__setattr__(self, "b_test", _binary_test(self.space_b, self.b_test))

    @property
    def purity(self) -> Purity:
        return Purity.PURE if is_extremal(self.joint_space, self.joint) else Purity.MIXED


def polytope_table(s: PolytopeScenario) -> JointTable:
    p = np.array([[np.kron(a, b) @ s.joint for b in s.b_test] for a in s.a_test])
    return JointTable(p, s.purity)


def polytope_steer(s: PolytopeScenario):
    """Subnormalized states of A left by each outcome of B's test."""
    from .steering import Assemblage

    R = s.joint.reshape(s.space_a.dim, s.space_b.dim)
    return Assemblage(tuple(R @ b for b in s.b_test), space=s.space_a, purity=s.purity)
