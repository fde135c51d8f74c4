import random

import pytest
from hypothesis import given, settings

from cfcheck.analysis import (
    check_property_I,
    check_property_II,
    her_report,
    is_modal_free,
    load_corpus,
    locality_analysis,
)
from cfcheck.formula import Or, Outcome, Performed, atoms, parse
from cfcheck.scenario import Forbid, Region, Scenario, ScenarioError, Setting
from cfcheck.scenario_file import load_bundled
from cfcheck.worlds import enumerate_candidates, filter_possible

from oracles import as_dict, nonlocal_pairs
from strategies import formulas

HER = load_bundled()


def fmt(ws):
    return [w.format() for w in ws]


def without(s, label):
    return Scenario(s.name, s.regions, [c for c in s.constraints if c.label != label], s.possibilities)


def with_forbid(s, *choices):
    return Scenario(s.name, s.regions, list(s.constraints) + [Forbid(s.pattern(*choices), "extra")],
                    s.possibilities)


def test_property_one_on_her(her):
    rep = check_property_I(her)
    assert rep.value and rep.passed
    assert fmt(r.world for r in rep.trace) == [
        "L2+,R1-", "L2+,R2+", "L2+,R2-", "L2-,R1+", "L2-,R1-", "L2-,R2-",
    ]
    assert all(r.value for r in rep.trace)
    singled = [r for r in rep.trace if r.antecedent]
    assert fmt(r.world for r in singled) == ["L2+,R2+"]
    assert fmt(singled[0].accessible) == ["L2+,R1-"]


def test_property_one_fails_without_prediction_two(her):
    s = without(her, "prediction_2")
    assert len(filter_possible(enumerate_candidates(s), s)) == 14
    rep = check_property_I(s)
    assert not rep.value and not rep.passed
    row = next(r for r in rep.trace if r.world.format() == "L2+,R2+")
    assert fmt(row.accessible) == ["L2+,R1+", "L2+,R1-"]
    assert fmt(row.violating) == ["L2+,R1+"]


def test_property_one_vacuous_without_l2_worlds(her):
    s = with_forbid(her, "L2")
    rep = check_property_I(s)
    assert rep.value and rep.trace == ()


def test_property_two_on_her(her):
    rep = check_property_II(her)
    assert not rep.value and rep.passed
    by_world = {r.world.format(): r for r in rep.counterexamples}
    assert sorted(by_world) == ["L1+,R2+", "L1-,R2+"]
    assert fmt(by_world["L1-,R2+"].violating) == ["L1-,R1+"]
    assert fmt(by_world["L1+,R2+"].violating) == ["L1+,R1+"]


def test_property_two_after_forbidding_l1_minus_r1_plus(her):
    # values computed with the truth-table oracle: the usual counterexample
    # (L1-,R2+) disappears, (L1+,R2+) remains
    s = with_forbid(her, ("L1", "-"), ("R1", "+"))
    rep = check_property_II(s)
    assert not rep.value and rep.passed
    assert fmt(r.world for r in rep.counterexamples) == ["L1+,R2+"]


def test_property_two_with_tautology(her):
    taut = Or(Performed("R1"), parse("not performed(R1)", her))
    rep = check_property_II(her, taut)
    assert rep.value and not rep.passed


def test_unbound_designations():
    s = Scenario("one", [Region("A", [Setting("A1", "+-")])])
    with pytest.raises(ScenarioError):
        check_property_I(s)
    with pytest.raises(ScenarioError):
        locality_analysis(Performed("A1"), "Z", s)


def test_sr_is_not_local_to_r(her, her_possible, sr):
    rep = locality_analysis(sr, "R", her)
    assert not rep.local
    a, b = rep.witness
    assert a["R"] == b["R"] == ("R2", "+")
    assert rep.witness_values == (False, True)
    # first pair in world order, per the pairwise oracle
    worlds = [as_dict(w) for w in her_possible]
    i, j = nonlocal_pairs(her, worlds, sr, "R")[0]
    assert (worlds[i], worlds[j]) == (as_dict(a), as_dict(b))
    assert fmt(rep.witness) == ["L1+,R2+", "L2+,R2+"]


def test_sr_is_not_local_to_l(her, sr):
    rep = locality_analysis(sr, "L", her)
    assert not rep.local
    assert fmt(rep.witness) == ["L1+,R1+", "L1+,R2+"]


def test_atoms_locality(her):
    assert locality_analysis(Outcome("R2", "+"), "R", her).local
    assert not locality_analysis(Performed("L1"), "R", her).local


def test_locality_verdict_independent_of_order(her, her_possible):
    rng = random.Random(7)
    for f in load_corpus(her):
        for region in her.region_names:
            base = locality_analysis(f, region, her, her_possible)
            order = list(her_possible)
            rng.shuffle(order)
            shuffled = locality_analysis(f, region, her, her_possible, order)
            assert shuffled.local == base.local
            if not shuffled.local:
                a, b = shuffled.witness
                assert a[region] == b[region]
                va, vb = shuffled.witness_values
                assert va != vb


@settings(max_examples=200, deadline=None)
@given(formulas(HER, max_leaves=6))
def test_modal_free_single_region_formulas_are_local(f):
    regions = {HER.region_of(a.setting) for a in atoms(f)}
    if is_modal_free(f) and len(regions) == 1:
        assert locality_analysis(f, regions.pop(), HER).local


def test_her_report(her):
    rep = her_report(her)
    assert (len(rep.candidates), len(rep.eliminated), len(rep.possible)) == (16, 3, 13)
    assert rep.possibilities.satisfied
    assert rep.property_i.passed and rep.property_i.value
    assert rep.property_ii.passed and not rep.property_ii.value
    loc = {l.region: l for l in rep.locality}
    assert not loc["R"].local and not loc["L"].local
    assert rep.agreement_regions == ("L",)
    w1, w2 = rep.dependence
    assert w1.format() == "L2+,R2+" and w2.format() == "L1+,R2+"
    assert rep.expectations_met
    assert rep.notes == ()


def test_her_report_without_constraints(her):
    rep = her_report(Scenario("free", her.regions, (), her.possibilities))
    assert (len(rep.candidates), len(rep.eliminated), len(rep.possible)) == (16, 0, 16)
    assert not rep.property_i.passed
    assert not rep.expectations_met
    assert any("NOT as expected" in line for line in rep.summary)


def test_her_report_degenerate_scenario():
    rep = her_report(Scenario("one", [Region("A", [Setting("A1", "+")])]))
    assert len(rep.possible) == 1
    assert rep.property_i is None and rep.property_ii is None
    assert rep.locality == ()
    assert rep.notes and "no counterfactual analysis" in rep.notes[0]
    assert not rep.expectations_met
