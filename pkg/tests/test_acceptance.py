"""Acceptance criteria, one check per criterion.

Each ``ac*`` function returns ``(ok, detail)``.  Under pytest every criterion
is a parametrized test and a PASS/FAIL line per criterion is printed in the
terminal summary; ``python tests/test_acceptance.py`` prints the same lines.
"""

import io
import itertools
import sys
import time

import numpy as np
import pytest

from gptcheck import JointTable, Purity, Verdict, spooky_determinant, spooky_verdict
from gptcheck.cli import RunConfig, run
from gptcheck.gpt import (PolytopeScenario, are_complementary, classical_bit, indicator,
                          is_proposition, polytope_table, product_space, qubit_octahedron,
                          reduce_to_two)
from gptcheck.hvt import (ANY, HvtModel, build_deterministic_signaling, check_lambda_independence,
                          check_outcome_independence, check_parameter_independence,
                          deterministic_local_model, reconstruct)
from gptcheck.lp import lp_solve
from gptcheck.oracle import brute_force_lp
from gptcheck.quantum import (ALIVE, DEAD, PSI_PLUS, born_table, cat_scenarios, projector,
                              quantum_are_complementary, quantum_conclusive_discrimination,
                              random_scenario, steer)
from gptcheck.steering import (determinant_to_steering, equivalence_sweep, normalize_assemblage,
                               steering_to_determinant)
from gptcheck.tables import Behavior, factorize, table_behavior

RESULTS: dict[str, tuple[bool, str]] = {}


def ac1():
    start = time.perf_counter()
    s = cat_scenarios().v2
    t = born_table(s)
    e = normalize_assemblage(steer(s))
    elapsed = time.perf_counter() - start
    ok = (np.max(np.abs(t.probs - [[0.5, 0], [0, 0.5]])) <= 1e-10
          and spooky_verdict(t) is Verdict.SPOOKY
          and np.allclose(e.weights, [0.5, 0.5], atol=1e-10)
          and np.allclose(e.states[0], projector(ALIVE), atol=1e-10)
          and np.allclose(e.states[1], projector(DEAD), atol=1e-10)
          and elapsed < 1.0)
    return ok, f"verdict {spooky_verdict(t).value}, weights {e.weights}, {elapsed * 1e3:.1f} ms"


def ac2():
    s = cat_scenarios().v3
    t = born_table(s)
    a = steer(s).elements
    det = spooky_determinant(t)
    diff = determinant_to_steering(t, s).difference
    disc = quantum_conclusive_discrimination(projector(ALIVE), projector(PSI_PLUS))
    ok = (np.allclose(a[0], 0.5 * projector(ALIVE), atol=1e-10)
          and np.allclose(a[1], 0.5 * projector(PSI_PLUS), atol=1e-10)
          and np.max(np.abs(t.probs - [[0.5, 0.25], [0, 0.25]])) <= 1e-10
          and abs(det - 0.125) <= 1e-10
          and abs(diff - 0.5) <= 1e-9
          and abs(disc.value - 0.5) <= 1e-9
          and np.allclose(disc.effect, projector(DEAD), atol=1e-9))
    return ok, f"det {det:.12g}, difference {diff:.12g}, discrimination {disc.value:.12g}"


def _rank_one_oracle(p, tol=1e-9):
    s = np.linalg.svd(p, compute_uv=False)
    return s[0] * s[1] <= tol


def ac3(n=1200):
    rng = np.random.default_rng(1)
    bad = 0
    n_rank_one = 0
    for k in range(n):
        if k % 2:
            p = np.outer(rng.dirichlet([1, 1]), rng.dirichlet([1, 1]))
        else:
            p = rng.dirichlet(np.ones(4)).reshape(2, 2)
        t = JointTable(p)
        f = factorize(t)
        small = abs(spooky_determinant(t)) <= 1e-9
        oracle = _rank_one_oracle(t.probs)
        n_rank_one += oracle
        if not ((f is not None) == small == oracle):
            bad += 1
    return bad == 0, f"{n} tables, {n_rank_one} rank one, {bad} counterexamples"


def ac4(n=500):
    rng = np.random.default_rng(4)
    worst_diff = worst_table = 0.0
    checked = 0
    while checked < n:
        s = random_scenario(rng)
        t = born_table(s)
        det = spooky_determinant(t)
        if abs(det) <= 1e-6:
            continue
        p0, p1 = t.column_marginals
        back = determinant_to_steering(t, s)
        worst_diff = max(worst_diff, abs(back.difference - det / (p0 * p1)))
        fwd = steering_to_determinant(normalize_assemblage(steer(s)), s.povm_a)
        worst_table = max(worst_table, float(np.max(np.abs(fwd.source_table.probs - t.probs))))
        checked += 1
    sweep = equivalence_sweep(n, seed=7)
    ok = worst_diff <= 1e-9 and worst_table <= 1e-12 and not sweep.divergences
    return ok, (f"{checked} scenarios, max difference error {worst_diff:.2e}, "
                f"max table error {worst_table:.2e}, sweep: {sweep.summary_line()}")


def ac5():
    bit = classical_bit()
    joint_space = product_space(bit, bit)
    grid = np.linspace(0, 1, 5)
    tests = [(np.array([a, b]), np.array([1 - a, 1 - b])) for a, b in itertools.product(grid, repeat=2)]
    worst = 0.0
    count = impure = 0
    for v in joint_space.vertices:
        for ta, tb in itertools.product(tests, repeat=2):
            s = PolytopeScenario(bit, bit, v, ta, tb)
            impure += s.purity is not Purity.PURE
            worst = max(worst, abs(spooky_determinant(polytope_table(s))))
            count += 1
    mixed = 0.5 * np.kron([1, 0], [1, 0]) + 0.5 * np.kron([0, 1], [0, 1])
    z = (indicator(2, 0), indicator(2, 1))
    t = polytope_table(PolytopeScenario(bit, bit, mixed, z, z))
    ok = (impure == 0 and worst <= 1e-12 and abs(spooky_determinant(t) - 0.25) <= 1e-12
          and spooky_verdict(t) is Verdict.INCONCLUSIVE)
    return ok, (f"{count} pure cases, max |det| {worst:.1e}; mixture det "
                f"{spooky_determinant(t):.12g} -> {spooky_verdict(t).value}")


def ac6(n=500):
    rng = np.random.default_rng(6)
    local_bad = signal_bad = varying = 0
    tests = ("0", "1")
    for _ in range(n):
        t = JointTable(rng.dirichlet(np.ones(4)).reshape(2, 2))
        m = deterministic_local_model(t)
        if not (reconstruct(m).max_difference(table_behavior(t)) <= 1e-12
                and check_lambda_independence(m) and check_parameter_independence(m)
                and check_outcome_independence(m)):
            local_bad += 1
        # Multi-test behavior built around the table; half of them constant across tests.
        constant = rng.random() < 0.5
        prob = {tt: t.probs if constant else rng.dirichlet(np.ones(4)).reshape(2, 2)
                for tt in itertools.product(tests, repeat=2)}
        prob[("0", "0")] = t.probs
        b = Behavior(("A", "B"), {"A": tests, "B": tests},
                     {(p, x): 2 for p in "AB" for x in tests}, prob)
        sm = build_deterministic_signaling(b)
        exact = reconstruct(sm).max_difference(b) <= 1e-12
        if b.is_test_independent():
            ok = exact
        else:
            varying += 1
            ok = exact and not check_lambda_independence(sm)
        signal_bad += not ok
    ok = local_bad == 0 and signal_bad == 0 and varying > 0
    return ok, (f"{n} tables; local-model failures {local_bad}; signaling-model failures "
                f"{signal_bad} ({varying} test-varying behaviors)")


def _pole(k):
    a = np.zeros(4)
    a[0] = a[k + 1] = 0.5
    return a, np.eye(4)[0] - a


def _oi_agreement(n=600):
    rng = np.random.default_rng(7)
    agree = 0
    for k in range(n):
        parties = "ABC"[: 3 if k % 3 == 0 else 2]
        tests = ("0", "1")
        n_lam = int(rng.integers(1, 4))
        conds = {}
        for i in range(n_lam):
            prob = {}
            for tt in itertools.product(tests, repeat=len(parties)):
                if k % 2:
                    arr = np.ones(())
                    for _ in parties:
                        arr = np.multiply.outer(arr, 0.9 * rng.dirichlet([1, 1]) + 0.05)
                else:
                    arr = 0.9 * rng.dirichlet(np.ones(2 ** len(parties))) + 0.1 / 2 ** len(parties)
                    arr = arr.reshape((2,) * len(parties))
                prob[tt] = arr
            conds[f"l{i}"] = Behavior(tuple(parties), {p: tests for p in parties},
                                      {(p, x): 2 for p in parties for x in tests}, prob)
        m = HvtModel(tuple(conds), {ANY: rng.dirichlet(np.ones(n_lam))}, conds)
        agree += (check_outcome_independence(m, "factorized")
                  == check_outcome_independence(m, "conditional"))
    return agree, n


def ac7():
    cats = cat_scenarios()
    quantum_ok = quantum_are_complementary(cats.v1.life_test, cats.v1.superposition_test)
    bit = classical_bit()
    grid = np.linspace(0, 1, 11)
    props = [test for test in ((np.array([a, b]), np.array([1 - a, 1 - b]))
                               for a, b in itertools.product(grid, repeat=2))
             if is_proposition(bit, test) is not None]
    classical_pairs = sum(are_complementary(bit, p, q) for p, q in itertools.product(props, repeat=2))
    oct_ = qubit_octahedron()
    first, second = reduce_to_two(oct_, [_pole(k) for k in range(3)])
    reduced_ok = are_complementary(oct_, first, second)
    agree, n = _oi_agreement()
    ok = quantum_ok and len(props) > 0 and classical_pairs == 0 and reduced_ok and agree == n
    return ok, (f"cat tests complementary: {quantum_ok}; classical complementary pairs "
                f"{classical_pairs}/{len(props) ** 2}; x/y/z reduction complementary: {reduced_ok}; "
                f"OI forms agree on {agree}/{n} models")


def ac8():
    out = io.StringIO()
    run(RunConfig("figure", grid=50), out)
    rows = [tuple(map(float, line.split(","))) for line in out.getvalue().splitlines()[1:]]
    keyed = {r[:3]: r[3] for r in rows}
    anchors = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0), (0.25, 0.25, 0.25)]
    anchors_ok = all(v in keyed and abs(keyed[v]) <= 1e-12 for v in anchors)
    inside = all(min(a, b, c, 1 - a - b - c) >= -1e-12 for a, b, c, _ in rows)
    return anchors_ok and inside, f"{len(rows)} rows, anchors on surface: {anchors_ok}, all inside: {inside}"


def ac9(n=240):
    rng = np.random.default_rng(9)
    feas_bad = opt_bad = n_feasible = 0
    for _ in range(n):
        d = int(rng.integers(1, 5))
        A_box = np.vstack([np.eye(d), -np.eye(d)])
        b_box = np.full(2 * d, float(rng.integers(1, 4)))
        k = int(rng.integers(0, 4))
        A_ub = np.vstack([A_box, rng.integers(-3, 4, (k, d))]).astype(float)
        b_ub = np.concatenate([b_box, rng.integers(-4, 5, k)]).astype(float)
        me = int(rng.integers(0, min(d, 2) + 1))
        A_eq = rng.integers(-2, 3, (me, d)).astype(float)
        b_eq = rng.integers(-2, 3, me).astype(float)
        c = rng.integers(-3, 4, d).astype(float)
        maximize = bool(rng.integers(0, 2))
        got = lp_solve(c, A_eq, b_eq, A_ub, b_ub, maximize=maximize)
        want = brute_force_lp(c, A_eq, b_eq, A_ub, b_ub, maximize=maximize)
        if (got is None) != (want is None):
            feas_bad += 1
        elif got is not None:
            n_feasible += 1
            opt_bad += abs(got.value - want[0]) > 1e-7
    ok = feas_bad == 0 and opt_bad == 0
    return ok, (f"{n} instances ({n_feasible} feasible): feasibility mismatches {feas_bad}, "
                f"optimum mismatches {opt_bad}")


CRITERIA = {f"AC{k}": fn for k, fn in enumerate([ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9], 1)}


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    ok, detail = CRITERIA[name]()
    RESULTS[name] = (bool(ok), detail)
    print(f"{name} {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not ok
        print(f"{name} {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
