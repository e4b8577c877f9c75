"""Steering assemblages and the steering/determinant correspondence.

A joint state steers A into the ensemble ``{p_i alpha_i}`` when B's test
outcomes leave the subnormalized states ``p_i alpha_i`` on A.  Two
constructions connect this to probability tables:

* :func:`steering_to_determinant` starts from a two-state ensemble and a
  binary test on A distinguishing the states, and returns the table with
  determinant ``p0 * p1 * w`` where ``w`` is the gap of the test between them.
* :func:`determinant_to_steering` starts from a table with non-zero
  determinant and recovers the steered states together with the same gap.

States are either density matrices (``space is None``) or vectors of a
:class:`~gptcheck.gpt.ConvexStateSpace`.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gpt, quantum
from ._tolerance import eps
from .errors import (DegenerateAssemblageError, InternalInconsistencyError,
                     NotSpookyError, NoWitnessError, PreconditionError, ValidationError)
from .tables import JointTable, Purity, Verdict, spooky_determinant, spooky_verdict

__all__ = [
    "Assemblage",
    "Ensemble",
    "SteeringCertificate",
    "DiscriminationCheck",
    "SweepReport",
    "normalize_assemblage",
    "is_nontrivial",
    "steering_to_determinant",
    "determinant_to_steering",
    "equivalence_sweep",
    "discriminable_steering_check",
]

IDENTITY_TOL = 1e-9
DIFFERENCE_TOL = 1e-9
NEAR_DEGENERATE = 1e-6


def _unit(x, space) -> float:
    if space is None:
        return float(np.real(np.trace(x)))
    return space.normalization(x)


def _pair(a, x, space) -> float:
    if space is None:
        return float(np.real(np.trace(np.asarray(a) @ np.asarray(x))))
    return float(np.asarray(a) @ np.asarray(x))


def _unit_effect(space):
    return None if space is None else space.unit_effect


def _binary_test(test, space):
    if space is None:
        effects = quantum.validate_povm(test)
        if len(effects) != 2:
            raise ValidationError("expected a binary test")
        return effects
    return gpt._binary_test(space, test)


@dataclass(frozen=True, eq=False)
class Assemblage:
    """Subnormalized states of A indexed by B's outcome."""

    elements: tuple
    space: gpt.ConvexStateSpace | None = None
    purity: Purity = Purity.UNKNOWN

    def __post_init__(self):
        els = tuple(np.asarray(x) for x in self.elements)
        if not els:
            raise ValidationError("empty assemblage")
        norms = [_unit(x, self.space) for x in els]
        tol = eps()
        if min(norms) < -tol or max(norms) > 1 + tol:
            raise ValidationError("assemblage element normalization outside [0, 1]")
        if abs(sum(norms) - 1) > tol:
            raise ValidationError(f"assemblage normalizations sum to {sum(norms)!r}")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "purity", Purity(self.purity))

    @property
    def norms(self) -> list[float]:
        return [_unit(x, self.space) for x in self.elements]

    def total(self):
        return sum(self.elements)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted deterministic states; ``outcomes[k]`` is the B outcome of entry ``k``."""

    weights: tuple[float, ...]
    states: tuple
    space: gpt.ConvexStateSpace | None = None
    purity: Purity = Purity.UNKNOWN
    outcomes: tuple[int, ...] = ()
    dropped: tuple[int, ...] = ()

    def __post_init__(self):
        tol = eps()
        w = tuple(float(x) for x in self.weights)
        if len(w) != len(self.states) or not w:
            raise ValidationError("one weight per state required")
        if min(w) < -tol or abs(sum(w) - 1) > tol:
            raise ValidationError("ensemble weights must be a probability vector")
        for s in self.states:
            if abs(_unit(s, self.space) - 1) > tol:
                raise ValidationError("ensemble states must be deterministic")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", tuple(np.asarray(s) for s in self.states))
        object.__setattr__(self, "purity", Purity(self.purity))
        if not self.outcomes:
            object.__setattr__(self, "outcomes", tuple(range(len(w))))

    def __len__(self):
        return len(self.weights)

    def swapped(self) -> "Ensemble":
        return Ensemble(self.weights[::-1], self.states[::-1], self.space, self.purity,
                        self.outcomes[::-1], self.dropped)


def normalize_assemblage(a: Assemblage) -> Ensemble:
    """Split each element into its weight and the deterministic state it is proportional to.

    Elements of weight ``<= eps()`` are dropped and listed in ``dropped``.
    """
    tol = eps()
    keep, dropped = [], []
    for k, (x, n) in enumerate(zip(a.elements, a.norms)):
        (keep if n > tol else dropped).append(k)
    if not keep:
        raise DegenerateAssemblageError("every assemblage element has zero weight")
    norms = a.norms
    return Ensemble(
        weights=tuple(norms[k] for k in keep),
        states=tuple(a.elements[k] / norms[k] for k in keep),
        space=a.space, purity=a.purity, outcomes=tuple(keep), dropped=tuple(dropped),
    )


def _states_differ(x, y, space) -> bool:
    if space is None:
        return quantum.trace_distance(x, y) > IDENTITY_TOL
    _, gap = gpt.separation(space, x, y)
    return gap > eps()


def is_nontrivial(e: Ensemble) -> bool:
    """At least two entries with weights strictly inside (0, 1) and distinct states."""
    tol = eps()
    inner = [k for k, w in enumerate(e.weights) if tol < w < 1 - tol]
    if len(inner) < 2:
        return False
    return any(_states_differ(e.states[i], e.states[j], e.space)
               for i, j in itertools.combinations(inner, 2))


@dataclass(frozen=True, eq=False)
class SteeringCertificate:
    """Witness linking a two-state steered ensemble to a non-factorizing table.

    ``w = <a0|alpha0> - <a0|alpha1>`` and ``det = p0 * p1 * w``.
    """

    effect: object
    w: float
    weights: tuple[float, float]
    states: tuple
    source_table: JointTable
    det: float
    difference: float
    near_degenerate: bool = False
    space: gpt.ConvexStateSpace | None = field(default=None, repr=False)
    trace: tuple[str, ...] = field(default=(), repr=False)


def _table_from_ensemble(weights, states, test, space, purity) -> JointTable:
    p = np.array([[weights[j] * _pair(a, states[j], space) for j in range(2)] for a in test])
    return JointTable(p, purity)


def steering_to_determinant(e: Ensemble, a_test) -> SteeringCertificate:
    """Build the table of a steered two-state ensemble and certify its determinant.

    ``a_test`` is the caller's binary test on A; it must take different values
    on the two states, otherwise :class:`NoWitnessError` is raised.
    """
    if len(e) != 2:
        raise PreconditionError(f"need an ensemble of exactly two states, got {len(e)}")
    if not is_nontrivial(e):
        raise PreconditionError("ensemble is trivial")
    test = _binary_test(a_test, e.space)
    (p0, p1), (s0, s1) = e.weights, e.states
    w = _pair(test[0], s0, e.space) - _pair(test[0], s1, e.space)
    if abs(w) <= eps():
        raise NoWitnessError("the test does not distinguish the two states; try another effect")
    table = _table_from_ensemble(e.weights, e.states, test, e.space, e.purity)
    det = spooky_determinant(table)
    if abs(det - p0 * p1 * w) > DIFFERENCE_TOL:
        raise InternalInconsistencyError(f"det {det!r} differs from p0*p1*w {p0 * p1 * w!r}")
    steps = (
        f"steered ensemble: weights ({p0:.12g}, {p1:.12g})",
        f"gap of a0 between the steered states: w = {w:.12g}",
        f"table rebuilt as p_ij = p_j <a_i|alpha_j>: {table.probs.tolist()}",
        f"determinant criterion: det = p0*p1*w = {det:.12g} != 0",
    )
    return SteeringCertificate(test[0], w, (p0, p1), (s0, s1), table, det, w,
                               abs(det) < NEAR_DEGENERATE, e.space, steps)


def _source_assemblage(t: JointTable, source):
    if source is None:
        space = gpt.classical_bit()
        # Columns of the table are the steered states, described by the
        # outcome probabilities of A's test.
        return (Assemblage((t.probs[:, 0].copy(), t.probs[:, 1].copy()), space, t.purity),
                (gpt.indicator(2, 0), gpt.indicator(2, 1)))
    if isinstance(source, quantum.QuantumScenario):
        expected = quantum.born_table(source)
        assem, test = quantum.steer(source), source.povm_a
    elif isinstance(source, gpt.PolytopeScenario):
        expected = gpt.polytope_table(source)
        assem, test = gpt.polytope_steer(source), source.a_test
    else:
        raise ValidationError(f"unsupported steering source {type(source).__name__}")
    if np.max(np.abs(expected.probs - t.probs)) > DIFFERENCE_TOL:
        raise ValidationError("table does not match the probabilities of the given source")
    return assem, test


def determinant_to_steering(t: JointTable, source=None) -> SteeringCertificate:
    """Recover a non-trivial steered ensemble from a table with non-zero determinant.

    Without a ``source`` the table's columns are used as the steered states;
    with a quantum or polytopal scenario the states come from steering it.
    """
    det = spooky_determinant(t)
    tol = eps()
    if abs(det) <= tol:
        raise NotSpookyError("determinant vanishes: the table factorizes")
    assem, test = _source_assemblage(t, source)
    a0 = test[0]
    norms = assem.norms
    if len(norms) != 2:
        raise ValidationError("B's test must be binary")
    if min(norms) <= tol:
        raise InternalInconsistencyError("zero steered weight alongside a non-zero determinant")
    n0, n1 = norms
    s0, s1 = (x / n for x, n in zip(assem.elements, norms))
    diff = _pair(a0, s0, assem.space) - _pair(a0, s1, assem.space)
    expected = det / (n0 * n1)
    if abs(diff - expected) > DIFFERENCE_TOL:
        raise InternalInconsistencyError(f"gap {diff!r} differs from det/(n0*n1) {expected!r}")
    steps = (
        f"steered states: alpha~_j = state of A after outcome b_j, weights ({n0:.12g}, {n1:.12g})",
        f"determinant of the table: {det:.12g}",
        "both weights non-zero, as a non-zero determinant requires",
        "normalized states: alpha_j = alpha~_j / <e|alpha~_j>",
        f"gap <a0|alpha0> - <a0|alpha1> = det/(n0*n1) = {diff:.12g} != 0",
        "the joint state steers a non-trivial ensemble of two different states",
    )
    return SteeringCertificate(a0, diff, (n0, n1), (s0, s1), t, det, diff,
                               abs(det) < NEAR_DEGENERATE, assem.space, steps)


# -- equivalence sweep -----------------------------------------------------------

@dataclass(frozen=True)
class SweepReport:
    n: int
    seed: int
    family: str
    counts: dict
    divergences: tuple
    near_degenerate: int

    def summary_line(self) -> str:
        return f"{len(self.divergences)} divergences"


def _product_state(rng):
    a = quantum.random_pure_state((2, 1), rng)
    b = quantum.random_pure_state((1, 2), rng)
    return np.kron(a, b)


def _real_basis_test(theta):
    u = np.array([np.cos(theta), np.sin(theta)], dtype=complex)
    P = quantum.projector(u)
    return P, np.eye(2) - P


def _sweep_one(args):
    seed_seq, family, n_a, n_b = args
    rng = np.random.default_rng(seed_seq)
    if family == "haar":
        rho = quantum.random_pure_state((2, 2), rng)
        tests_a = [quantum.random_projective_test(2, rng) for _ in range(n_a)]
        tests_b = [quantum.random_projective_test(2, rng) for _ in range(n_b)]
    elif family == "product":
        rho = _product_state(rng)
        tests_a = [quantum.random_projective_test(2, rng) for _ in range(n_a)]
        tests_b = [quantum.random_projective_test(2, rng) for _ in range(n_b)]
    elif family == "maximally-entangled":
        rho = quantum.projector(np.array([1, 0, 0, 1]) / np.sqrt(2))
        tests_a = [_real_basis_test(th) for th in rng.uniform(0, np.pi, n_a)]
        tests_b = tests_a
    else:
        raise ValueError(f"unknown family {family!r}")

    tol = eps()
    spooky = determinant = steering = near = False
    for tb in tests_b:
        for ta in tests_a:
            s = quantum.QuantumScenario((2, 2), rho, ta, tb)
            t = quantum.born_table(s)
            spooky |= spooky_verdict(t) is Verdict.SPOOKY
            d = spooky_determinant(t)
            determinant |= abs(d) > tol and s.purity is Purity.PURE
            near |= tol < abs(d) < NEAR_DEGENERATE
        ens = normalize_assemblage(quantum.steer(s))
        steering |= s.purity is Purity.PURE and is_nontrivial(ens)
    return spooky, steering, determinant, near


def equivalence_sweep(n: int, seed: int = 0, family: str = "haar", n_a: int = 2, n_b: int = 2,
                      workers: int = 1) -> SweepReport:
    """Check on random pure two-qubit states that three conditions agree.

    Per state: (i) some pair of sampled tests gives a Spooky verdict, (ii) some
    sampled test on B steers a non-trivial ensemble, (iii) some pair of
    sampled tests has a non-zero determinant.  Any state where these differ is
    reported as a divergence.
    """
    if n < 1:
        raise ValidationError("need at least one sample")
    seeds = np.random.SeedSequence(seed).spawn(n)
    jobs = [(s, family, n_a, n_b) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_sweep_one, jobs, chunksize=max(1, n // (4 * workers))))
    else:
        results = [_sweep_one(j) for j in jobs]
    divergences = tuple((k, r[:3]) for k, r in enumerate(results) if len(set(r[:3])) > 1)
    counts = {
        "spooky": sum(r[0] for r in results),
        "steering": sum(r[1] for r in results),
        "determinant": sum(r[2] for r in results),
    }
    return SweepReport(n, seed, family, counts, divergences, sum(r[3] for r in results))


# -- discrimination ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscriminationCheck:
    discrimination: gpt.Discrimination | None
    certificate: SteeringCertificate | None
    verdict: Verdict | None


def discriminable_steering_check(e: Ensemble) -> DiscriminationCheck:
    """Chain conclusive discrimination of the two states into a steering certificate.

    If an effect ``a`` vanishes on the first state and not on the second, the
    test ``{e - a, a}`` distinguishes them and yields the certificate; the
    verdict then depends on the purity recorded for the ensemble's source.
    """
    if len(e) != 2:
        raise PreconditionError(f"need an ensemble of exactly two states, got {len(e)}")
    s0, s1 = e.states
    if e.space is None:
        disc = quantum.quantum_conclusive_discrimination(s0, s1)
        unit = np.eye(s0.shape[0])
    else:
        disc = gpt.conclusive_discrimination(e.space, s0, s1)
        unit = e.space.unit_effect
    if disc is None:
        return DiscriminationCheck(None, None, None)
    cert = steering_to_determinant(e, (unit - disc.effect, disc.effect))
    return DiscriminationCheck(disc, cert, spooky_verdict(cert.source_table))
