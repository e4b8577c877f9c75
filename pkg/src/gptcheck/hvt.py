"""Hidden-variable refinements of behaviors.

An :class:`HvtModel` reproduces a behavior as a prior-weighted mixture of
per-label conditional behaviors.  The predicates here check the usual
requirements on such a model (prior independent of the tests, no-signaling
at fixed label, factorization at fixed label) and whether it is
descriptively significant, i.e. whether the label actually changes some
prediction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Literal, Mapping

import numpy as np

from ._tolerance import NORM_TOL, eps
from .errors import NotApplicableError, ValidationError
from .tables import Behavior, JointTable, check_no_signaling, table_behavior

__all__ = [
    "ANY",
    "HvtModel",
    "SignificanceWitness",
    "reconstruct",
    "check_lambda_independence",
    "check_parameter_independence",
    "check_outcome_independence",
    "is_descriptively_significant",
    "single_valued",
    "deterministic_local_model",
    "build_deterministic_signaling",
]

ANY = "any"
MAX_LAMBDAS = 10_000


@dataclass(frozen=True, eq=False)
class HvtModel:
    """Finite hidden-variable model.

    ``prior`` maps either the sentinel :data:`ANY` or each test tuple to a
    weight vector aligned with ``lambdas``.
    """

    lambdas: tuple[Hashable, ...]
    prior: Mapping[object, np.ndarray]
    conditionals: Mapping[Hashable, Behavior] = field(repr=False)

    def __post_init__(self):
        lambdas = tuple(self.lambdas)
        if not lambdas:
            raise ValidationError("model needs at least one hidden-variable label")
        if len(lambdas) > MAX_LAMBDAS:
            raise ValidationError(f"at most {MAX_LAMBDAS} labels supported, got {len(lambdas)}")
        if len(set(lambdas)) != len(lambdas):
            raise ValidationError("hidden-variable labels must be distinct")
        missing = [lam for lam in lambdas if lam not in self.conditionals]
        if missing:
            raise ValidationError(f"no conditional behavior for labels {missing}")
        conds = {lam: self.conditionals[lam] for lam in lambdas}
        first = conds[lambdas[0]]
        for lam, b in conds.items():
            if not first.same_structure(b):
                raise ValidationError(f"conditional for {lam!r} has a different structure")
        tol = eps()
        prior = {}
        for key, w in self.prior.items():
            w = np.array(w, dtype=float)
            if w.shape != (len(lambdas),):
                raise ValidationError(f"prior {key!r}: expected {len(lambdas)} weights")
            if w.min() < -tol or abs(w.sum() - 1) > NORM_TOL:
                raise ValidationError(f"prior {key!r} is not a probability vector")
            w[w < 0] = 0.0
            w /= w.sum()
            w.setflags(write=False)
            prior[key if key == ANY else tuple(key)] = w
        if ANY not in prior:
            absent = [tt for tt in first.test_tuples() if tt not in prior]
            if absent:
                raise ValidationError(f"no prior for test tuples {absent}")
        unknown = [k for k in prior if k != ANY and k not in first.prob]
        if unknown:
            raise ValidationError(f"prior given for unknown test tuples {unknown}")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "conditionals", conds)
        object.__setattr__(self, "prior", prior)

    @property
    def structure(self) -> Behavior:
        return self.conditionals[self.lambdas[0]]

    def prior_for(self, tests) -> np.ndarray:
        tests = tuple(tests)
        return self.prior[tests] if tests in self.prior else self.prior[ANY]


@dataclass(frozen=True)
class SignificanceWitness:
    lambda_a: Hashable
    lambda_b: Hashable
    tests: tuple
    outcomes: tuple
    value_a: float
    value_b: float


def reconstruct(m: HvtModel) -> Behavior:
    """Average the conditionals with the prior, separately for every test tuple."""
    s = m.structure
    prob = {}
    for tt in s.test_tuples():
        w = m.prior_for(tt)
        acc = np.zeros_like(s.prob[tt])
        for weight, lam in zip(w, m.lambdas):
            if weight:
                acc = acc + weight * m.conditionals[lam].prob[tt]
        prob[tt] = acc
    return Behavior(s.parties, s.tests, s.outcomes, prob)


def check_lambda_independence(m: HvtModel) -> bool:
    weights = [m.prior_for(tt) for tt in m.structure.test_tuples()]
    tol = eps()
    return all(np.max(np.abs(w - weights[0])) <= tol for w in weights[1:])


def check_parameter_independence(m: HvtModel) -> bool:
    return all(not check_no_signaling(b) for b in m.conditionals.values())


def _product_of_marginals(arr: np.ndarray) -> np.ndarray:
    out = np.ones(())
    for k in range(arr.ndim):
        axes = tuple(a for a in range(arr.ndim) if a != k)
        out = np.multiply.outer(out, arr.sum(axis=axes))
    return out


def _factorizes(arr: np.ndarray, tol: float) -> bool:
    return float(np.max(np.abs(arr - _product_of_marginals(arr)))) <= tol


def _conditionally_independent(arr: np.ndarray, tol: float) -> bool:
    # Each party's outcome, conditioned on all other parties' outcomes, must
    # equal its marginal.  Conditioning events of probability <= tol are skipped.
    for k in range(arr.ndim):
        moved = np.moveaxis(arr, k, 0).reshape(arr.shape[k], -1)
        own = moved.sum(axis=1)
        others = moved.sum(axis=0)
        for col, p_cond in enumerate(others):
            if p_cond <= tol:
                continue
            if np.max(np.abs(moved[:, col] / p_cond - own)) > tol:
                return False
    return True


def check_outcome_independence(m: HvtModel,
                               form: Literal["factorized", "conditional"] = "factorized") -> bool:
    """Check that at every label the joint outcomes are independent across parties."""
    if form == "factorized":
        test = _factorizes
    elif form == "conditional":
        test = _conditionally_independent
    else:
        raise ValidationError(f"unknown form {form!r}")
    tol = eps()
    return all(test(b.prob[tt], tol)
               for b in m.conditionals.values() for tt in b.test_tuples())


def is_descriptively_significant(m: HvtModel) -> SignificanceWitness | None:
    """Find two labels giving different probabilities to some event.

    The definition only applies to models with a test-independent prior and
    no-signaling conditionals; for other models :class:`NotApplicableError`
    is raised.  The search is exhaustive over label pairs, test tuples and
    outcome tuples; the value at the first label must exceed ``eps()``.
    """
    if not check_lambda_independence(m):
        raise NotApplicableError("prior depends on the tests; significance is undefined")
    if not check_parameter_independence(m):
        raise NotApplicableError("conditionals are signaling; significance is undefined")
    tol = eps()
    for tt in m.structure.test_tuples():
        stacked = np.stack([m.conditionals[lam].prob[tt] for lam in m.lambdas])
        for outcome in itertools.product(*(range(n) for n in stacked.shape[1:])):
            vals = stacked[(slice(None),) + outcome]
            if vals.max() - vals.min() <= tol:
                continue
            for a, b in itertools.permutations(range(len(m.lambdas)), 2):
                if vals[a] > tol and abs(vals[a] - vals[b]) > tol:
                    return SignificanceWitness(m.lambdas[a], m.lambdas[b], tt, outcome,
                                               float(vals[a]), float(vals[b]))
    return None


def single_valued(b: Behavior) -> HvtModel:
    """The trivial refinement with a single hidden-variable value."""
    return HvtModel(lambdas=("lambda0",), prior={ANY: np.ones(1)}, conditionals={"lambda0": b})


def _point_table(i: int, j: int) -> JointTable:
    p = np.zeros((2, 2))
    p[i, j] = 1.0
    return JointTable(p)


def deterministic_local_model(t: JointTable) -> HvtModel:
    """Write a single-test table as a mixture of deterministic product tables.

    Labels are the outcome pairs ``(i, j)`` with non-zero probability.  The
    result satisfies every locality requirement, whatever the table.
    """
    labels = [(i, j) for i in range(2) for j in range(2) if t.probs[i, j] > 0]
    return HvtModel(
        lambdas=tuple(labels),
        prior={ANY: np.array([t.probs[ij] for ij in labels])},
        conditionals={ij: table_behavior(_point_table(*ij)) for ij in labels},
    )


def build_deterministic_signaling(b: Behavior) -> HvtModel:
    """Deterministic refinement whose prior depends on the tests.

    Labels are outcome tuples.  Under test tuple ``T`` label ``lam`` makes party
    ``k`` output ``(lam[k] + s_k(T)) mod n_k`` where ``s_k(T)`` is the sum of the
    other parties' test indices, so the output of one party is routed through
    the others' choices.  The prior under ``T`` is the behavior's probability of
    the routed outcome, which makes the reconstruction exact.  A behavior that
    does not depend on the tests gets no routing (``s_k = 0``).
    """
    parties = b.parties
    test_index = [{x: n for n, x in enumerate(b.tests[p])} for p in parties]
    n_max = [max(b.outcomes[(p, x)] for x in b.tests[p]) for p in parties]
    routed = not b.is_test_independent()

    def shifts(tt):
        if not routed:
            return [0] * len(tt)
        idx = [test_index[k][x] for k, x in enumerate(tt)]
        total = sum(idx)
        return [total - i for i in idx]

    labels = list(itertools.product(*(range(n) for n in n_max)))
    tuples = b.test_tuples()
    prior = {tt: np.zeros(len(labels)) for tt in tuples}
    cond_prob = {lam: {} for lam in labels}
    for tt in tuples:
        shape = b.prob[tt].shape
        s = shifts(tt)
        for n, lam in enumerate(labels):
            out = tuple((lam[k] + s[k]) % shape[k] for k in range(len(lam)))
            point = np.zeros(shape)
            point[out] = 1.0
            cond_prob[lam][tt] = point
            if all(lam[k] < shape[k] for k in range(len(lam))):
                prior[tt][n] = b.prob[tt][out]

    live = [n for n in range(len(labels)) if any(prior[tt][n] > 0 for tt in tuples)]
    labels_live = tuple(labels[n] for n in live)
    return HvtModel(
        lambdas=labels_live,
        prior={tt: w[live] for tt, w in prior.items()},
        conditionals={labels[n]: Behavior(parties, b.tests, b.outcomes, cond_prob[labels[n]])
                      for n in live},
    )
