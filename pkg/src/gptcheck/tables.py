"""Two-party probability tables and multi-test behaviors.

A :class:`JointTable` is the 2x2 matrix ``p[i, j] = Pr[a_i, b_j | a, b]`` for
one binary test per party.  Its determinant decides whether the joint
probabilities factorize; together with a declared-pure source state a
non-zero determinant is the spookiness criterion for complete theories.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._tolerance import NORM_TOL, eps
from .errors import ValidationError

__all__ = [
    "Purity",
    "Verdict",
    "JointTable",
    "Behavior",
    "NoSignalingViolation",
    "ParaboloidPoint",
    "spooky_determinant",
    "spooky_verdict",
    "factorize",
    "check_no_signaling",
    "paraboloid_sample",
    "table_behavior",
    "pr_box",
]


class Purity(str, enum.Enum):
    PURE = "pure"
    MIXED = "mixed"
    UNKNOWN = "unknown"


class Verdict(str, enum.Enum):
    SPOOKY = "Spooky"
    NOT_SPOOKY_WITNESSED = "NotSpookyWitnessed"
    INCONCLUSIVE = "Inconclusive"


def _clean_distribution(p: np.ndarray, what: str) -> np.ndarray:
    """Check, clamp and exactly renormalize a probability array."""
    p = np.array(p, dtype=float)
    if not np.all(np.isfinite(p)):
        raise ValidationError(f"{what}: non-finite probability")
    tol = eps()
    if p.min() < -tol or p.max() > 1 + tol:
        raise ValidationError(f"{what}: entry outside [0, 1]: {p.ravel().tolist()}")
    total = p.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise ValidationError(f"{what}: probabilities sum to {total!r}, not 1")
    p[p < 0] = 0.0
    return p / p.sum()


@dataclass(frozen=True, eq=False)
class JointTable:
    """``probs[i, j]`` is the probability of outcome ``i`` on A and ``j`` on B."""

    probs: np.ndarray
    purity: Purity = Purity.UNKNOWN

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (2, 2):
            raise ValidationError(f"table must be 2x2, got shape {p.shape}")
        p = _clean_distribution(p, "table")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "purity", Purity(self.purity))

    @classmethod
    def from_entries(cls, p00, p01, p10, p11, purity=Purity.UNKNOWN) -> "JointTable":
        return cls(np.array([[p00, p01], [p10, p11]]), purity)

    p00 = property(lambda self: float(self.probs[0, 0]))
    p01 = property(lambda self: float(self.probs[0, 1]))
    p10 = property(lambda self: float(self.probs[1, 0]))
    p11 = property(lambda self: float(self.probs[1, 1]))

    @property
    def row_marginals(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    @property
    def column_marginals(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    def transpose(self) -> "JointTable":
        return JointTable(self.probs.T, self.purity)

    def swap_b_outcomes(self) -> "JointTable":
        return JointTable(self.probs[:, ::-1], self.purity)

    def with_purity(self, purity) -> "JointTable":
        return JointTable(self.probs, purity)

    def __eq__(self, other):
        if not isinstance(other, JointTable):
            return NotImplemented
        return self.purity == other.purity and np.array_equal(self.probs, other.probs)

    def __repr__(self):
        return f"JointTable({self.probs.tolist()}, purity={self.purity.value!r})"


def spooky_determinant(t: JointTable) -> float:
    """Return ``p00*p11 - p01*p10``."""
    p = t.probs
    return float(p[0, 0] * p[1, 1] - p[0, 1] * p[1, 0])


def spooky_verdict(t: JointTable) -> Verdict:
    """Classify a table.

    A non-zero determinant proves spookiness only when the table came from a
    pure state; from a mixed or unknown source it is inconclusive (a
    classical correlated mixture produces the same numbers).
    """
    if abs(spooky_determinant(t)) <= eps():
        return Verdict.NOT_SPOOKY_WITNESSED
    if t.purity is Purity.PURE:
        return Verdict.SPOOKY
    return Verdict.INCONCLUSIVE


def factorize(t: JointTable) -> tuple[float, float, float, float] | None:
    """Return the marginals ``(q0, q1, r0, r1)`` if ``p[i, j] = q[i] r[j]``."""
    q = t.row_marginals
    r = t.column_marginals
    if np.max(np.abs(t.probs - np.outer(q, r))) > eps():
        return None
    return float(q[0]), float(q[1]), float(r[0]), float(r[1])


# -- behaviors ---------------------------------------------------------------

TestTuple = tuple  # one test label per party, in party order


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional outcome distributions for every joint choice of tests.

    ``prob[tests]`` is an array with one axis per party; axis ``k`` has
    length ``outcomes[(parties[k], tests[k])]``.
    """

    parties: tuple[str, ...]
    tests: Mapping[str, tuple[str, ...]]
    outcomes: Mapping[tuple[str, str], int]
    prob: Mapping[TestTuple, np.ndarray] = field(repr=False)

    def __post_init__(self):
        parties = tuple(self.parties)
        if len(set(parties)) != len(parties) or not parties:
            raise ValidationError("party labels must be non-empty and distinct")
        tests = {p: tuple(self.tests[p]) for p in parties}
        outcomes = {}
        for p in parties:
            if not tests[p]:
                raise ValidationError(f"party {p!r} has no tests")
            for x in tests[p]:
                n = int(self.outcomes[(p, x)])
                if n < 1:
                    raise ValidationError(f"test {x!r} of {p!r} needs at least one outcome")
                outcomes[(p, x)] = n
        prob = {}
        for tt in itertools.product(*(tests[p] for p in parties)):
            if tt not in self.prob:
                raise ValidationError(f"missing probabilities for tests {tt}")
            shape = tuple(outcomes[(p, x)] for p, x in zip(parties, tt))
            arr = np.asarray(self.prob[tt], dtype=float)
            if arr.shape != shape:
                raise ValidationError(f"tests {tt}: expected shape {shape}, got {arr.shape}")
            arr = _clean_distribution(arr, f"tests {tt}")
            arr.setflags(write=False)
            prob[tt] = arr
        extra = set(self.prob) - set(prob)
        if extra:
            raise ValidationError(f"unknown test tuples {sorted(extra)}")
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "tests", tests)
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "prob", prob)

    def test_tuples(self) -> list[TestTuple]:
        return list(self.prob)

    def same_structure(self, other: "Behavior") -> bool:
        return (self.parties == other.parties and self.tests == other.tests
                and self.outcomes == other.outcomes)

    def marginal(self, tests: TestTuple, party_index: int) -> np.ndarray:
        arr = self.prob[tests]
        axes = tuple(k for k in range(arr.ndim) if k != party_index)
        return arr.sum(axis=axes)

    def max_difference(self, other: "Behavior") -> float:
        if not self.same_structure(other):
            return float("inf")
        return max(float(np.max(np.abs(self.prob[tt] - other.prob[tt]))) for tt in self.prob)

    def is_test_independent(self, tol: float | None = None) -> bool:
        tol = eps() if tol is None else tol
        arrays = list(self.prob.values())
        return all(a.shape == arrays[0].shape and np.max(np.abs(a - arrays[0])) <= tol
                   for a in arrays[1:])


def table_behavior(t: JointTable, parties=("A", "B"), tests=("a", "b")) -> Behavior:
    """Single-test two-party behavior carrying the table's probabilities."""
    pa, pb = parties
    ta, tb = tests
    return Behavior(parties=(pa, pb), tests={pa: (ta,), pb: (tb,)},
                    outcomes={(pa, ta): 2, (pb, tb): 2}, prob={(ta, tb): t.probs})


def pr_box() -> Behavior:
    """Popescu-Rohrlich box: outcomes satisfy ``a XOR b = x AND y`` uniformly."""
    prob = {}
    for x, y in itertools.product((0, 1), repeat=2):
        p = np.zeros((2, 2))
        for a, b in itertools.product((0, 1), repeat=2):
            if a ^ b == x & y:
                p[a, b] = 0.5
        prob[(str(x), str(y))] = p
    return Behavior(parties=("A", "B"), tests={"A": ("0", "1"), "B": ("0", "1")},
                    outcomes={(p, t): 2 for p in "AB" for t in "01"}, prob=prob)


@dataclass(frozen=True)
class NoSignalingViolation:
    party: str
    tests: TestTuple
    reference: TestTuple
    deviation: float


def check_no_signaling(b: Behavior) -> list[NoSignalingViolation]:
    """List every test tuple where a party's marginal depends on the others' tests.

    Test tuples sharing the party's own test are compared with the first such
    tuple; an empty list means the behavior is no-signaling.
    """
    tol = eps()
    report = []
    for k, party in enumerate(b.parties):
        groups: dict[str, list[TestTuple]] = {}
        for tt in b.test_tuples():
            groups.setdefault(tt[k], []).append(tt)
        for tuples in groups.values():
            ref = b.marginal(tuples[0], k)
            for tt in tuples[1:]:
                dev = float(np.max(np.abs(b.marginal(tt, k) - ref)))
                if dev > tol:
                    report.append(NoSignalingViolation(party, tt, tuples[0], dev))
    return report


# -- tetrahedron / paraboloid geometry ---------------------------------------

@dataclass(frozen=True)
class ParaboloidPoint:
    p00: float
    p01: float
    p10: float
    residual: float

    @property
    def p11(self) -> float:
        return 1.0 - self.p00 - self.p01 - self.p10

    @property
    def on_surface(self) -> bool:
        return abs(self.residual) <= eps()

    def table(self) -> JointTable:
        return JointTable.from_entries(self.p00, self.p01, self.p10, max(self.p11, 0.0))


def _residual(p00, p01, p10):
    p11 = 1.0 - p00 - p01 - p10
    return p00 * p11 - p01 * p10


_ANCHORS = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (0.0, 0.0, 0.0),
            (0.25, 0.25, 0.25)]


def paraboloid_sample(grid_n: int) -> list[ParaboloidPoint]:
    """Sample the probability tetrahedron on a regular grid.

    Every point carries its signed residual ``p00*p11 - p01*p10``; points with
    ``|residual| <= eps()`` lie on the factorizable surface.  The four
    vertices and the centroid are always included.
    """
    if int(grid_n) != grid_n or grid_n < 2:
        raise ValidationError("grid_n must be an integer >= 2")
    grid_n = int(grid_n)
    i, j, k = np.meshgrid(*(np.arange(grid_n + 1),) * 3, indexing="ij")
    keep = i + j + k <= grid_n
    pts = np.stack([i[keep], j[keep], k[keep]], axis=1) / grid_n
    seen = {tuple(row) for row in pts.tolist()}
    extra = [a for a in _ANCHORS if a not in seen]
    if extra:
        pts = np.vstack([pts, np.array(extra)])
    res = _residual(pts[:, 0], pts[:, 1], pts[:, 2])
    return [ParaboloidPoint(float(a), float(b), float(c), float(r))
            for (a, b, c), r in zip(pts.tolist(), res.tolist())]


def in_tetrahedron(p00: float, p01: float, p10: float, tol: float | None = None) -> bool:
    tol = eps() if tol is None else tol
    return min(p00, p01, p10, 1.0 - p00 - p01 - p10) >= -tol
