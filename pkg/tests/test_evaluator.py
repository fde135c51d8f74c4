import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfcheck.analysis import load_corpus
from cfcheck.evaluator import EvaluationError, Evaluator, accessible, eval_at, strict_implies
from cfcheck.formula import (
    Action,
    Box,
    Counterfactual,
    Dia,
    Implies,
    Not,
    Outcome,
    Performed,
    parse,
)
from cfcheck.scenario import Forbid, Scenario, validate_scenario
from cfcheck.scenario_file import load_bundled
from cfcheck.worlds import enumerate_candidates, filter_possible

from oracles import TruthTable, as_dict
from strategies import formulas, scenarios

HER = load_bundled()
HER_FORMULAS = formulas(HER, max_leaves=8)
DO_R1 = Action("R", "R1")


def fmt(ws):
    return [w.format() for w in ws]


def test_accessible_from_l2_plus_r2_plus(her_possible, world):
    assert fmt(accessible(world("L2+,R2+"), DO_R1, her_possible)) == ["L2+,R1-"]


def test_accessible_from_l1_minus_r2_plus(her_possible, world):
    assert fmt(accessible(world("L1-,R2+"), DO_R1, her_possible)) == ["L1-,R1+", "L1-,R1-"]


def test_accessible_includes_self_when_action_already_taken(her_possible, world):
    w = world("L1-,R1+")
    assert fmt(accessible(w, DO_R1, her_possible)) == ["L1-,R1+", "L1-,R1-"]
    assert w in accessible(w, DO_R1, her_possible)


def test_sr_true_at_l2_plus_r2_plus(her_possible, sr, world):
    v = eval_at(sr, world("L2+,R2+"), her_possible)
    assert v.value
    assert fmt(v.worlds("accessible")) == ["L2+,R1-"]
    assert v.worlds("violating") == ()


def test_sr_false_at_l1_minus_r2_plus(her_possible, sr, world):
    v = eval_at(sr, world("L1-,R2+"), her_possible)
    assert not v.value
    assert fmt(v.worlds("accessible")) == ["L1-,R1+", "L1-,R1-"]
    assert fmt(v.worlds("violating")) == ["L1-,R1+"]


@pytest.mark.parametrize("w", ["L2+,R1-", "L2+,R2-", "L2-,R1+", "L2-,R1-", "L2-,R2-"])
def test_sr_trivially_true(her_possible, sr, world, w):
    ev = Evaluator(her_possible)
    assert ev.holds(sr.left, world(w)) is False
    v = ev.verdict(sr, world(w))
    assert v.value and v.witnesses == ()


def test_eval_outside_possible_set_is_an_error(her_possible, sr, world):
    with pytest.raises(EvaluationError):
        eval_at(sr, world("L2-,R2+"), her_possible)


def test_strict_implication_property_one(her, her_possible, sr):
    v = strict_implies(Performed("L2"), sr, her_possible)
    assert v.value
    assert fmt(v.worlds("antecedent")) == [
        "L2+,R1-", "L2+,R2+", "L2+,R2-", "L2-,R1+", "L2-,R1-", "L2-,R2-",
    ]


def test_strict_implication_property_two(her_possible, sr):
    v = strict_implies(Performed("L1"), sr, her_possible)
    assert not v.value
    # both R2+ worlds under L1 are counterexamples; (L1-,R2+) is the one the
    # original argument exhibits
    assert fmt(v.worlds("counterexample")) == ["L1+,R2+", "L1-,R2+"]


@settings(max_examples=100, deadline=None)
@given(HER_FORMULAS)
def test_strict_implication_is_reflexive(f):
    possible = filter_possible(enumerate_candidates(HER), HER)
    assert strict_implies(f, f, possible).value


def test_no_centering(her_possible, world):
    w = world("L1-,R1+")
    ev = Evaluator(her_possible)
    assert ev.holds(Outcome("R1", "+"), w)
    assert not ev.holds(Counterfactual(DO_R1, Outcome("R1", "+")), w)


def test_vacuous_counterfactual_is_true_and_flagged():
    s = load_bundled()
    # forbid every R1 world reachable from L2+ so do(R1) has nowhere to go
    t = Scenario("v", s.regions, list(s.constraints) + [Forbid(s.pattern(("L2", "+"), "R1"))])
    possible = filter_possible(enumerate_candidates(t), t)
    w = t.world_of(("L2", "+"), ("R2", "+"))
    v = eval_at(Counterfactual(DO_R1, Outcome("R1", "-")), w, possible)
    assert v.value
    assert v.worlds("accessible") == ()
    assert v.notes and "vacuous" in v.notes[0]


def test_singleton_access_reduces_to_plain_evaluation(her_possible, world):
    w = world("L2+,R1-")
    assert fmt(accessible(w, DO_R1, her_possible)) == ["L2+,R1-"]
    ev = Evaluator(her_possible)
    for q in [Outcome("R1", "-"), Outcome("R1", "+"), Performed("L2"), Box(Performed("L2"))]:
        assert ev.holds(Counterfactual(DO_R1, q), w) == ev.holds(q, w)


def test_dia_witness_and_box_counterexample(her_possible, world):
    w = world("L1+,R1+")
    d = eval_at(Dia(Outcome("L2", "+")), w, her_possible)
    assert d.value and fmt(d.worlds("witness")) == ["L2+,R1-"]
    b = eval_at(Box(Performed("L1")), w, her_possible)
    assert not b.value and len(b.worlds("counterexample")) == 6


def test_outcome_implies_performed_everywhere(her, her_possible):
    ev = Evaluator(her_possible)
    for w in her_possible:
        for setting in her.setting_names:
            for o in her.setting(setting).outcomes:
                if ev.holds(Outcome(setting, o), w):
                    assert ev.holds(Performed(setting), w)


def test_corpus_agrees_with_truth_tables(her, her_possible):
    corpus = load_corpus(her)
    assert len(corpus) >= 30
    table = TruthTable(her, [as_dict(w) for w in her_possible])
    ev = Evaluator(her_possible)
    for f in corpus:
        for w in her_possible:
            assert ev.verdict(f, w).value == table.value(f, as_dict(w)), (f, w)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_random_scenarios_agree_with_truth_tables(data):
    s = validate_scenario(data.draw(scenarios(max_candidates=60)))
    possible = filter_possible(enumerate_candidates(s), s)
    f = data.draw(formulas(s, max_leaves=6))
    table = TruthTable(s, [as_dict(w) for w in possible])
    ev = Evaluator(possible)
    for w in possible:
        assert ev.holds(f, w) == table.value(f, as_dict(w))


@settings(max_examples=300, deadline=None)
@given(HER_FORMULAS, HER_FORMULAS)
def test_strict_is_box_of_material(a, b):
    possible = filter_possible(enumerate_candidates(HER), HER)
    expected = strict_implies(a, b, possible).value
    for w in possible:
        assert eval_at(Box(Implies(a, b)), w, possible).value == expected


@settings(max_examples=300, deadline=None)
@given(HER_FORMULAS)
def test_dia_is_not_box_not(f):
    possible = filter_possible(enumerate_candidates(HER), HER)
    ev = Evaluator(possible)
    for w in possible:
        assert ev.holds(Dia(f), w) == ev.holds(Not(Box(Not(f))), w)


def test_verdict_carries_evidence_for_universal_failures(her_possible):
    # a false universal names a counterexample; a true existential names a witness
    corpus = load_corpus(HER)
    ev = Evaluator(her_possible)
    for f in corpus:
        for w in her_possible:
            v = ev.verdict(f, w)
            if isinstance(f, Box) and not v.value:
                assert v.worlds("counterexample")
            if isinstance(f, Dia) and v.value:
                assert v.worlds("witness")


def test_sr_parses_from_text_same_as_fixture(her, sr):
    assert parse("performed(R2) and outcome(R2,+) -> cf(do(R1), outcome(R1,-))", her) == sr
