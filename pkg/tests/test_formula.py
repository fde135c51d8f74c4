import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfcheck.formula import (
    Action,
    And,
    Box,
    Counterfactual,
    FormulaError,
    Implies,
    Not,
    Or,
    Outcome,
    Performed,
    StrictImplies,
    bind,
    parse,
    to_text,
)
from cfcheck.scenario import ScenarioError

from cfcheck.scenario_file import load_bundled
from strategies import formulas

HER_FORMULAS = formulas(load_bundled())

SR_TREE = Implies(
    And(Performed("R2"), Outcome("R2", "+")),
    Counterfactual(Action("R", "R1"), Outcome("R1", "-")),
)


def test_parse_sr(her):
    assert parse("performed(R2) and outcome(R2,+) -> cf(do(R1), outcome(R1,-))", her) == SR_TREE


def test_parse_property_one(her):
    text = "performed(L2) => (performed(R2) and outcome(R2,+) -> cf(do(R1), outcome(R1,-)))"
    assert parse(text, her) == StrictImplies(Performed("L2"), SR_TREE)


def test_printing():
    assert to_text(Performed("L2")) == "performed(L2)"
    assert to_text(Box(Performed("L2"))) == "box (performed(L2))"
    assert to_text(Outcome("R1", "-")) == "outcome(R1,-)"


def test_sr_round_trip(her):
    assert parse(to_text(SR_TREE), her) == SR_TREE


@pytest.mark.parametrize(
    "text, tree",
    [
        ("performed(L1) and performed(R1) -> performed(L2)",
         Implies(And(Performed("L1"), Performed("R1")), Performed("L2"))),
        ("performed(L1) -> performed(R1) -> performed(L2)",
         Implies(Performed("L1"), Implies(Performed("R1"), Performed("L2")))),
        ("performed(L1) => performed(R1) => performed(L2)",
         StrictImplies(Performed("L1"), StrictImplies(Performed("R1"), Performed("L2")))),
        ("performed(L1) -> performed(R1) => performed(L2)",
         StrictImplies(Implies(Performed("L1"), Performed("R1")), Performed("L2"))),
        ("performed(L1) or performed(R1) and performed(L2)",
         Or(Performed("L1"), And(Performed("R1"), Performed("L2")))),
        ("performed(L1) and performed(R1) and performed(L2)",
         And(And(Performed("L1"), Performed("R1")), Performed("L2"))),
        ("not performed(L1) and performed(R1)",
         And(Not(Performed("L1")), Performed("R1"))),
        ("box performed(L1) -> performed(R1)",
         Implies(Box(Performed("L1")), Performed("R1"))),
        ("not not performed(L1)", Not(Not(Performed("L1")))),
        ("((performed(L1)))", Performed("L1")),
    ],
)
def test_precedence(her, text, tree):
    assert parse(text, her) == tree


def test_glued_arrows(her):
    assert parse("performed(L1)->performed(R1)=>performed(L2)", her) == parse(
        "performed(L1) -> performed(R1) => performed(L2)", her
    )


@pytest.mark.parametrize(
    "text, position, fragment",
    [
        ("", 0, "end of input"),
        ("performed(L1) and", 17, "end of input"),
        ("performed(L3)", 10, "unknown setting"),
        ("outcome(R1,0)", 11, "no outcome"),
        ("cf(performed(R1), outcome(R1,-))", 3, "do(SETTING)"),
        ("performed(L1) performed(L2)", 14, "unexpected"),
        ("performed(and)", 10, "setting name"),
        ("(performed(L1)", 14, "expected ')'"),
        ("box", 3, "end of input"),
        (")", 0, "expected a formula"),
    ],
)
def test_errors_are_positioned(her, text, position, fragment):
    with pytest.raises(FormulaError) as info:
        parse(text, her)
    assert info.value.position == position
    assert fragment in str(info.value)


def test_error_pointer(her):
    with pytest.raises(FormulaError) as info:
        parse("performed(L1) or performed(Q)", her)
    assert info.value.pointer() == "performed(L1) or performed(Q)\n" + " " * 27 + "^"


def test_unbound_parse_then_bind(her):
    f = parse("cf(do(R1), outcome(R1,-))")
    assert f.action == Action("", "R1")
    assert bind(f, her) == Counterfactual(Action("R", "R1"), Outcome("R1", "-"))
    with pytest.raises(ScenarioError):
        bind(parse("performed(Q1)"), her)


def test_deep_nesting_is_an_error_not_a_crash(her):
    with pytest.raises(FormulaError, match="nested too deeply"):
        parse("(" * 5000 + "performed(L1)" + ")" * 5000, her)


@settings(max_examples=1000, deadline=None)
@given(HER_FORMULAS)
def test_round_trip_generated(her, f):
    assert parse(to_text(f), her) == f


_ALPHABET = list("()-=>,+ ") + ["performed", "outcome", "cf", "do", "not", "and", "or",
                                "box", "dia", "L1", "R2", "+", "-", "=>", "->", "x"]


@settings(max_examples=500, deadline=None)
@given(st.lists(st.sampled_from(_ALPHABET), max_size=25).map(" ".join) | st.text(max_size=40))
def test_parser_is_total(her, text):
    try:
        parse(text, her)
    except FormulaError as exc:
        assert exc.position is not None and 0 <= exc.position <= len(text)
