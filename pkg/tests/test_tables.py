import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gptcheck import JointTable, Purity, Verdict, spooky_determinant, spooky_verdict, tolerance
from gptcheck.errors import ValidationError
from gptcheck.tables import (Behavior, check_no_signaling, factorize, in_tetrahedron,
                             paraboloid_sample, pr_box, table_behavior)

weights = st.lists(st.floats(0, 1, allow_nan=False), min_size=4, max_size=4).filter(
    lambda w: sum(w) > 1e-3)


def table_of(w, purity="unknown"):
    w = np.asarray(w) / np.sum(w)
    return JointTable(w.reshape(2, 2), purity)


def test_cat_table_is_spooky():
    t = JointTable([[0.5, 0], [0, 0.5]], Purity.PURE)
    assert spooky_determinant(t) == pytest.approx(0.25, abs=1e-12)
    assert spooky_verdict(t) is Verdict.SPOOKY
    assert factorize(t) is None


def test_uniform_table_factorizes():
    t = JointTable([[0.25, 0.25], [0.25, 0.25]], "pure")
    q0, q1, r0, r1 = factorize(t)
    assert np.allclose(np.outer([q0, q1], [r0, r1]), t.probs)
    assert spooky_verdict(t) is Verdict.NOT_SPOOKY_WITNESSED


def test_mixed_correlated_table_is_inconclusive():
    t = JointTable([[0.5, 0], [0, 0.5]], "mixed")
    assert spooky_determinant(t) == pytest.approx(0.25)
    assert spooky_verdict(t) is Verdict.INCONCLUSIVE


@pytest.mark.parametrize("bad", [
    [[0.5, 0.6], [0, 0]],
    [[-0.1, 0.6], [0.3, 0.2]],
    [[0.5, 0.5, 0], [0, 0, 0]],
    [[np.nan, 0.5], [0.25, 0.25]],
])
def test_invalid_tables_rejected(bad):
    with pytest.raises(ValidationError):
        JointTable(bad)


def test_tiny_negative_entries_are_clamped():
    t = JointTable([[0.5, -1e-12], [0.0, 0.5 + 1e-12]])
    assert t.probs.min() >= 0 and t.probs.sum() == pytest.approx(1, abs=1e-15)


def test_table_is_immutable():
    t = JointTable([[0.5, 0], [0, 0.5]])
    with pytest.raises(ValueError):
        t.probs[0, 0] = 1


@given(weights)
def test_factorize_iff_zero_determinant(w):
    t = table_of(w)
    f = factorize(t)
    assert (f is not None) == (abs(spooky_determinant(t)) <= 1e-9)
    if f is not None:
        assert np.allclose(np.outer(f[:2], f[2:]), t.probs, atol=1e-9)


@given(st.floats(0, 1), st.floats(0, 1))
def test_product_tables_have_zero_determinant(q, r):
    t = JointTable(np.outer([q, 1 - q], [r, 1 - r]))
    assert abs(spooky_determinant(t)) <= 1e-12
    assert factorize(t) is not None


@given(weights)
def test_relabeling_flips_determinant_sign(w):
    t = table_of(w)
    d = spooky_determinant(t)
    assert spooky_determinant(t.transpose()) == pytest.approx(d, abs=1e-15)
    assert spooky_determinant(t.swap_b_outcomes()) == pytest.approx(-d, abs=1e-15)


@given(weights)
def test_determinant_bounded(w):
    assert abs(spooky_determinant(table_of(w))) <= 0.25 + 1e-12


def test_verdict_respects_tolerance():
    t = JointTable.from_entries(0.25 + 1e-7, 0.25 - 1e-7, 0.25 - 1e-7, 0.25 + 1e-7)
    assert spooky_verdict(t.with_purity("pure")) is Verdict.SPOOKY
    with tolerance(1e-6):
        assert spooky_verdict(t.with_purity("pure")) is Verdict.NOT_SPOOKY_WITNESSED


def test_marginals():
    t = JointTable([[0.5, 0.25], [0, 0.25]])
    assert np.allclose(t.row_marginals, [0.75, 0.25])
    assert np.allclose(t.column_marginals, [0.5, 0.5])


def test_pr_box_is_no_signaling():
    assert check_no_signaling(pr_box()) == []


def test_signaling_behavior_detected():
    prob = {("0", "0"): [[1, 0], [0, 0]], ("0", "1"): [[0, 0], [1, 0]]}
    b = Behavior(("A", "B"), {"A": ("0",), "B": ("0", "1")},
                 {("A", "0"): 2, ("B", "0"): 2, ("B", "1"): 2}, prob)
    report = check_no_signaling(b)
    assert [v.party for v in report] == ["A"]
    assert report[0].deviation == pytest.approx(1)


def test_behavior_requires_all_tuples():
    with pytest.raises(ValidationError):
        Behavior(("A", "B"), {"A": ("0", "1"), "B": ("0",)},
                 {("A", "0"): 2, ("A", "1"): 2, ("B", "0"): 2},
                 {("0", "0"): np.eye(2) / 2})


def test_table_behavior_roundtrip():
    t = JointTable([[0.5, 0.25], [0, 0.25]])
    b = table_behavior(t)
    assert np.array_equal(b.prob[("a", "b")], t.probs)
    assert b.is_test_independent()


@pytest.mark.parametrize("grid", [2, 3, 10, 50])
def test_paraboloid_sample_contains_anchors(grid):
    pts = paraboloid_sample(grid)
    keyed = {(p.p00, p.p01, p.p10): p for p in pts}
    for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0), (0.25, 0.25, 0.25)]:
        assert abs(keyed[v].residual) <= 1e-12
    assert all(in_tetrahedron(p.p00, p.p01, p.p10) for p in pts)
    n = grid + 1
    assert len(pts) >= n * (n + 1) * (n + 2) // 6


def test_paraboloid_residual_matches_determinant():
    for p in paraboloid_sample(6):
        assert p.residual == pytest.approx(spooky_determinant(p.table()), abs=1e-12)


def test_paraboloid_off_surface_points_exist():
    pts = paraboloid_sample(10)
    assert any(not p.on_surface for p in pts)
    assert any(p.on_surface and min(p.p00, p.p01, p.p10, p.p11) > 0 for p in pts)


def test_paraboloid_grid_validation():
    with pytest.raises(ValidationError):
        paraboloid_sample(1)


@pytest.mark.parametrize("i,j", list(itertools.product(range(2), repeat=2)))
def test_point_tables_factorize(i, j):
    p = np.zeros((2, 2))
    p[i, j] = 1
    assert factorize(JointTable(p)) is not None
