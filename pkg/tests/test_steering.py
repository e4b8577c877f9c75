import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gptcheck import JointTable, Purity, Verdict
from gptcheck.errors import NoWitnessError, NotSpookyError, PreconditionError, ValidationError
from gptcheck.gpt import PolytopeScenario, classical_bit, indicator, polytope_steer
from gptcheck.quantum import (ALIVE, DEAD, LIFE_TEST, PSI_PLUS, SPIN_Z, QuantumScenario,
                              born_table, cat_scenarios, projector, random_scenario, steer, tensor)
from gptcheck.steering import (Assemblage, Ensemble, determinant_to_steering,
                               discriminable_steering_check, equivalence_sweep, is_nontrivial,
                               normalize_assemblage, steering_to_determinant)

BIT = classical_bit()
Z = (indicator(2, 0), indicator(2, 1))


def cat_ensemble(name):
    s = getattr(cat_scenarios(), name)
    return s, normalize_assemblage(steer(s))


def test_cat_v2_ensemble():
    _, e = cat_ensemble("v2")
    assert e.weights == pytest.approx((0.5, 0.5))
    assert np.allclose(e.states[0], projector(ALIVE)) and np.allclose(e.states[1], projector(DEAD))
    assert e.purity is Purity.PURE
    assert is_nontrivial(e)


def test_cat_v3_ensemble():
    _, e = cat_ensemble("v3")
    assert e.weights == pytest.approx((0.5, 0.5))
    assert np.allclose(e.states[1], projector(PSI_PLUS))


def test_product_state_ensemble_is_trivial():
    rho_a = 0.6 * projector(ALIVE) + 0.4 * projector(DEAD)
    s = QuantumScenario((2, 2), tensor(rho_a, projector(PSI_PLUS)), LIFE_TEST, SPIN_Z)
    e = normalize_assemblage(steer(s))
    assert all(np.allclose(x, rho_a) for x in e.states)
    assert not is_nontrivial(e)


def test_boundary_weight_is_trivial():
    e = Ensemble((1 - 1e-12, 1e-12), (projector(ALIVE), projector(DEAD)))
    assert not is_nontrivial(e)


def test_zero_weight_elements_dropped():
    a = Assemblage((projector(ALIVE), np.zeros((2, 2))))
    e = normalize_assemblage(a)
    assert e.dropped == (1,) and len(e) == 1
    with pytest.raises(ValidationError):
        Assemblage((np.zeros((2, 2)), np.zeros((2, 2))))


def test_forward_cat_v2():
    _, e = cat_ensemble("v2")
    c = steering_to_determinant(e, LIFE_TEST)
    assert c.w == pytest.approx(1) and c.det == pytest.approx(0.25)


def test_forward_cat_v3():
    _, e = cat_ensemble("v3")
    c = steering_to_determinant(e, LIFE_TEST)
    assert c.w == pytest.approx(0.5) and c.det == pytest.approx(0.125)
    assert np.allclose(c.source_table.probs, [[0.5, 0.25], [0, 0.25]], atol=1e-12)


def test_forward_identical_states():
    e = Ensemble((0.5, 0.5), (projector(ALIVE), projector(PSI_PLUS)))
    with pytest.raises(NoWitnessError):
        steering_to_determinant(e, (np.eye(2) / 2, np.eye(2) / 2))
    same = Ensemble((0.5, 0.5), (projector(ALIVE), projector(ALIVE)))
    with pytest.raises(PreconditionError):
        steering_to_determinant(same, LIFE_TEST)


@pytest.mark.parametrize("table,diff", [
    ([[0.5, 0], [0, 0.5]], 1.0),
    ([[0.5, 0.25], [0, 0.25]], 0.5),
])
def test_backward_examples(table, diff):
    c = determinant_to_steering(JointTable(table))
    assert c.difference == pytest.approx(diff, abs=1e-9)


def test_backward_product_table():
    with pytest.raises(NotSpookyError):
        determinant_to_steering(JointTable(np.outer([0.2, 0.8], [0.3, 0.7])))


def test_backward_with_quantum_source():
    s = cat_scenarios().v3
    c = determinant_to_steering(born_table(s), s)
    assert c.difference == pytest.approx(0.5, abs=1e-9)
    assert np.allclose(c.states[1], projector(PSI_PLUS))
    with pytest.raises(ValidationError):
        determinant_to_steering(JointTable([[0.5, 0], [0, 0.5]]), s)


def test_round_trip_random_scenarios():
    rng = np.random.default_rng(99)
    checked = 0
    while checked < 300:
        s = random_scenario(rng)
        t = born_table(s)
        det = t.probs[0, 0] * t.probs[1, 1] - t.probs[0, 1] * t.probs[1, 0]
        if abs(det) <= 1e-6:
            continue
        back = determinant_to_steering(t, s)
        p0, p1 = t.column_marginals
        assert back.difference == pytest.approx(det / (p0 * p1), abs=1e-9)
        fwd = steering_to_determinant(normalize_assemblage(steer(s)), s.povm_a)
        assert np.max(np.abs(fwd.source_table.probs - t.probs)) <= 1e-12
        checked += 1


@given(st.lists(st.floats(0.01, 1), min_size=4, max_size=4))
def test_backward_tabular_property(w):
    t = JointTable(np.reshape(np.asarray(w) / sum(w), (2, 2)))
    det = t.probs[0, 0] * t.probs[1, 1] - t.probs[0, 1] * t.probs[1, 0]
    if abs(det) <= 1e-9:
        with pytest.raises(NotSpookyError):
            determinant_to_steering(t)
        return
    c = determinant_to_steering(t)
    n0, n1 = t.column_marginals
    assert c.difference == pytest.approx(det / (n0 * n1), abs=1e-9)
    assert 0 < abs(c.w) <= 1 + 1e-12


def test_classical_correlated_mixture_is_inconclusive():
    mixed = 0.5 * np.kron([1, 0], [1, 0]) + 0.5 * np.kron([0, 1], [0, 1])
    s = PolytopeScenario(BIT, BIT, mixed, Z, Z)
    e = normalize_assemblage(polytope_steer(s))
    check = discriminable_steering_check(e)
    assert check.certificate is not None
    assert check.verdict is Verdict.INCONCLUSIVE


def test_discriminable_check_cat_v3():
    _, e = cat_ensemble("v3")
    check = discriminable_steering_check(e)
    assert check.discrimination.value == pytest.approx(0.5, abs=1e-9)
    assert np.allclose(check.discrimination.effect, projector(DEAD))
    assert check.certificate.det == pytest.approx(0.125, abs=1e-10)
    assert check.verdict is Verdict.SPOOKY


def test_discriminable_check_identical_states():
    e = Ensemble((0.5, 0.5), (projector(ALIVE), projector(ALIVE)))
    check = discriminable_steering_check(e)
    assert check.discrimination is None and check.certificate is None


def test_sweep_haar():
    r = equivalence_sweep(500, seed=7)
    assert r.summary_line() == "0 divergences"
    assert r.counts["spooky"] == 500


def test_sweep_product_all_false():
    r = equivalence_sweep(100, seed=1, family="product")
    assert r.counts == {"spooky": 0, "steering": 0, "determinant": 0}
    assert not r.divergences


def test_sweep_maximally_entangled_all_true():
    r = equivalence_sweep(100, seed=1, family="maximally-entangled")
    assert r.counts == {"spooky": 100, "steering": 100, "determinant": 100}


def test_sweep_deterministic_and_parallel():
    a = equivalence_sweep(40, seed=3)
    b = equivalence_sweep(40, seed=3, workers=2)
    assert a == b


def test_sweep_rejects_bad_input():
    with pytest.raises(ValidationError):
        equivalence_sweep(0)


def test_assemblage_columns_match_table(rng):
    for _ in range(50):
        s = random_scenario(rng)
        t = born_table(s)
        for j, el in enumerate(steer(s).elements):
            for i, A in enumerate(s.povm_a):
                assert np.trace(A @ el).real == pytest.approx(t.probs[i, j], abs=1e-12)


@given(st.lists(st.floats(0.01, 1), min_size=4, max_size=4))
def test_tabular_round_trip(w):
    t = JointTable(np.reshape(np.asarray(w) / sum(w), (2, 2)))
    det = t.probs[0, 0] * t.probs[1, 1] - t.probs[0, 1] * t.probs[1, 0]
    if abs(det) <= 1e-9:
        return
    e = normalize_assemblage(Assemblage((t.probs[:, 0], t.probs[:, 1]), space=BIT))
    c = steering_to_determinant(e, Z)
    assert np.max(np.abs(c.source_table.probs - t.probs)) <= 1e-12
    assert c.det == pytest.approx(e.weights[0] * e.weights[1] * c.w, abs=1e-12)


def test_swapping_b_outcomes_negates_w():
    t = JointTable([[0.5, 0.25], [0, 0.25]])
    a = determinant_to_steering(t)
    b = determinant_to_steering(t.swap_b_outcomes())
    assert b.weights == pytest.approx(a.weights[::-1])
    assert b.w == pytest.approx(-a.w)
    assert abs(b.det) == pytest.approx(abs(a.det))
