"""Property checks and region-locality analysis for counterfactual statements."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional, Sequence

from .evaluator import ACCESSIBLE, VIOLATING, Evaluator, Verdict, strict_implies
from .formula import (
    Box,
    Counterfactual,
    Dia,
    Formula,
    FormulaError,
    Implies,
    Performed,
    StrictImplies,
    atoms,
    parse,
    subformulas,
    to_text,
)
from .scenario import Constraint, Scenario, ScenarioError, World
from .worlds import (
    DEFAULT_MAX_WORLDS,
    PossibilityReport,
    WorldSet,
    check_possibilities,
    eliminations,
    enumerate_candidates,
    filter_possible,
)

__all__ = [
    "SR_TEXT",
    "PROPERTIES",
    "TraceRow",
    "PropertyReport",
    "LocalityReport",
    "HerReport",
    "sr_formula",
    "check_property",
    "check_property_I",
    "check_property_II",
    "locality_analysis",
    "her_report",
    "is_modal_free",
    "load_corpus",
]

# "If R2 is performed and gives +, then had R1 been performed instead it would give -."
SR_TEXT = "performed(R2) and outcome(R2,+) -> cf(do(R1), outcome(R1,-))"

# property id -> (designated setting, expected value of  performed(setting) => SR)
PROPERTIES = {"I": ("L2", True), "II": ("L1", False)}


def sr_formula(s: Scenario) -> Formula:
    try:
        return parse(SR_TEXT, s)
    except (FormulaError, ScenarioError) as exc:
        raise ScenarioError(f"SR formula does not bind to scenario {s.name!r}: {exc}") from None


@dataclass(frozen=True)
class TraceRow:
    """How the statement fared at one world selected by the property's antecedent.

    ``antecedent`` is the value of the statement's own antecedent when the
    statement is a material implication, else None. ``accessible`` and
    ``violating`` are the counterfactual worlds actually consulted.
    """

    world: World
    value: bool
    antecedent: Optional[bool]
    accessible: tuple[World, ...]
    violating: tuple[World, ...]


@dataclass(frozen=True)
class PropertyReport:
    property_id: str
    setting: str
    statement: Formula
    formula: StrictImplies
    expected: bool
    verdict: Verdict
    trace: tuple[TraceRow, ...]

    @property
    def value(self) -> bool:
        return self.verdict.value

    @property
    def passed(self) -> bool:
        return self.verdict.value == self.expected

    @property
    def counterexamples(self) -> tuple[TraceRow, ...]:
        return tuple(row for row in self.trace if not row.value)


def check_property(
    s: Scenario,
    property_id: str,
    setting: str,
    expected: bool,
    statement: Optional[Formula] = None,
    possible: Optional[WorldSet] = None,
) -> PropertyReport:
    """Check ``performed(setting) => statement`` and trace every selected world."""
    if not s.has_setting(setting):
        raise ScenarioError(f"designated setting {setting!r} is not declared in {s.name!r}")
    statement = sr_formula(s) if statement is None else statement
    possible = possible if possible is not None else filter_possible(enumerate_candidates(s), s)
    guard = Performed(setting)
    verdict = strict_implies(guard, statement, possible)

    ev = Evaluator(possible)
    rows = []
    for w in possible:
        if not ev.holds(guard, w):
            continue
        v = ev.verdict(statement, w)
        antecedent = ev.holds(statement.left, w) if isinstance(statement, Implies) else None
        rows.append(TraceRow(w, v.value, antecedent, v.worlds(ACCESSIBLE), v.worlds(VIOLATING)))
    return PropertyReport(
        property_id, setting, statement, StrictImplies(guard, statement), expected, verdict, tuple(rows)
    )


def check_property_I(
    s: Scenario, statement: Optional[Formula] = None, possible: Optional[WorldSet] = None
) -> PropertyReport:
    """L2 strictly implies SR; expected to hold."""
    setting, expected = PROPERTIES["I"]
    return check_property(s, "I", setting, expected, statement, possible)


def check_property_II(
    s: Scenario, statement: Optional[Formula] = None, possible: Optional[WorldSet] = None
) -> PropertyReport:
    """L1 strictly implies SR; expected to FAIL, with a counterexample."""
    setting, expected = PROPERTIES["II"]
    return check_property(s, "II", setting, expected, statement, possible)


@dataclass(frozen=True)
class LocalityReport:
    formula: Formula
    region: str
    local: bool
    witness: Optional[tuple[World, World]]
    witness_values: Optional[tuple[bool, bool]]
    pairs_checked: int


def locality_analysis(
    f: Formula,
    region: str,
    s: Scenario,
    possible: Optional[WorldSet] = None,
    order: Optional[Sequence[World]] = None,
) -> LocalityReport:
    """Is the truth value of ``f`` a function of a world's restriction to ``region``?

    Every pair of possible worlds with the same assignment on ``region`` is
    compared. The first disagreeing pair in world order is the witness.
    ``order`` overrides the scan order; the verdict does not depend on it.
    """
    s.region(region)
    possible = possible if possible is not None else filter_possible(enumerate_candidates(s), s)
    worlds = list(order) if order is not None else list(possible)
    ev = Evaluator(possible)
    values = [ev.holds(f, w) for w in worlds]
    keys = [w[region] for w in worlds]
    checked = 0
    for i in range(len(worlds)):
        for j in range(i + 1, len(worlds)):
            if keys[i] != keys[j]:
                continue
            checked += 1
            if values[i] != values[j]:
                return LocalityReport(
                    f, region, False, (worlds[i], worlds[j]), (values[i], values[j]), checked
                )
    return LocalityReport(f, region, True, None, None, checked)


@dataclass(frozen=True)
class HerReport:
    scenario: Scenario
    statement_text: str
    candidates: WorldSet
    eliminated: tuple[tuple[World, tuple[Constraint, ...]], ...]
    possible: WorldSet
    possibilities: PossibilityReport
    property_i: Optional[PropertyReport]
    property_ii: Optional[PropertyReport]
    locality: tuple[LocalityReport, ...]
    dependence: Optional[tuple[World, World]]
    agreement_regions: tuple[str, ...]
    notes: tuple[str, ...]
    summary: tuple[str, ...]

    @property
    def expectations_met(self) -> bool:
        checks = [self.possibilities.satisfied]
        checks += [p.passed for p in (self.property_i, self.property_ii) if p is not None]
        return all(checks) and self.property_i is not None and self.property_ii is not None


def is_modal_free(f: Formula) -> bool:
    """True when ``f`` has no box, dia, strict implication or counterfactual."""
    return not any(isinstance(g, (Box, Dia, StrictImplies, Counterfactual)) for g in subformulas(f))


def _dependence_pair(prop_i: PropertyReport, prop_ii: PropertyReport) -> Optional[tuple[World, World]]:
    """A world where SR holds under property I and one where it fails under II.

    Prefers a pair that differs in as few regions as possible.
    """
    trues = [r.world for r in prop_i.trace if r.value]
    falses = [r.world for r in prop_ii.trace if not r.value]
    if not trues or not falses:
        return None
    pairs = [(a, b) for a in trues for b in falses]
    return min(pairs, key=lambda ab: sum(x != y for x, y in zip(ab[0].assignment, ab[1].assignment)))


def her_report(
    s: Scenario, statement: Optional[Formula] = None, max_worlds: int = DEFAULT_MAX_WORLDS
) -> HerReport:
    """Run the whole pipeline: worlds, possibility checks, both properties, locality."""
    candidates = enumerate_candidates(s, max_worlds)
    possible = filter_possible(candidates, s)
    elim = tuple(eliminations(candidates, s))
    poss = check_possibilities(possible, s)
    notes: list[str] = []

    if statement is None:
        try:
            statement = sr_formula(s)
        except ScenarioError as exc:
            notes.append(f"no counterfactual analysis: {exc}")
    text = to_text(statement) if statement is not None else ""

    prop_i = prop_ii = None
    locality: list[LocalityReport] = []
    dependence = None
    agreement: tuple[str, ...] = ()
    if statement is not None:
        for pid in ("I", "II"):
            setting, _ = PROPERTIES[pid]
            if not s.has_setting(setting):
                notes.append(f"property {pid} skipped: setting {setting!r} is not declared")
                continue
            rep = check_property_I(s, statement, possible) if pid == "I" else check_property_II(
                s, statement, possible
            )
            if pid == "I":
                prop_i = rep
            else:
                prop_ii = rep
        for region in s.region_names:
            locality.append(locality_analysis(statement, region, s, possible))
        if prop_i is not None and prop_ii is not None:
            dependence = _dependence_pair(prop_i, prop_ii)
        cf_regions = {
            g.action.region or s.region_of(g.action.setting)
            for g in subformulas(statement)
            if isinstance(g, Counterfactual)
        }
        agreement = tuple(r for r in s.region_names if any(r != c for c in cf_regions))
        ev = Evaluator(possible)
        for w in possible:
            for n in ev.verdict(statement, w).notes:
                if n not in notes:
                    notes.append(n)

    summary = _summarize(
        s, candidates, elim, possible, poss, prop_i, prop_ii, locality, dependence, agreement, statement
    )
    return HerReport(
        s, text, candidates, elim, possible, poss, prop_i, prop_ii, tuple(locality),
        dependence, agreement, tuple(notes), tuple(summary),
    )


def _summarize(s, candidates, elim, possible, poss, prop_i, prop_ii, locality, dependence,
               agreement, statement) -> list[str]:
    lines = [
        f"{len(candidates)} candidate worlds, {len(elim)} eliminated by constraints, "
        f"{len(possible)} possible."
    ]
    if s.possibilities:
        unmet = [c.possibility.label or str(c.possibility.pattern) for c in poss.checks if not c.satisfied]
        lines.append(
            "All possibility assertions are satisfied."
            if not unmet
            else f"Unsatisfied possibility assertions: {', '.join(unmet)}."
        )
    for rep in (prop_i, prop_ii):
        if rep is None:
            continue
        n = len(rep.trace)
        if rep.value:
            lines.append(
                f"Property {rep.property_id}: performed({rep.setting}) => SR holds at all {n} "
                f"possible worlds where {rep.setting} is performed "
                f"({'as expected' if rep.passed else 'NOT as expected'})."
            )
        else:
            bad = ", ".join(r.world.format() for r in rep.counterexamples)
            lines.append(
                f"Property {rep.property_id}: performed({rep.setting}) => SR fails at {bad} "
                f"({'as expected' if rep.passed else 'NOT as expected'})."
            )
    for loc in locality:
        if loc.local:
            lines.append(f"SR is a function of region {loc.region} alone ({loc.pairs_checked} pairs checked).")
        else:
            a, b = loc.witness
            va, vb = loc.witness_values
            shared = "".join(a[loc.region])
            lines.append(
                f"SR is not a function of region {loc.region}: {a.format()} and {b.format()} "
                f"agree on {loc.region} ({shared}) but SR is {str(va).lower()} at the first "
                f"and {str(vb).lower()} at the second."
            )
    if dependence is not None:
        w1, w2 = dependence
        line = (
            f"SR is true at {w1.format()} ({prop_i.setting} performed) and false at "
            f"{w2.format()} ({prop_ii.setting} performed)"
        )
        differ = [r for r in s.region_names if w1[r] != w2[r]]
        if len(differ) == 1:
            line += f"; the two worlds differ only in region {differ[0]}"
        lines.append(line + ".")
    if statement is not None and agreement:
        mentioned = sorted({s.region_of(a.setting) for a in atoms(statement)})
        lines.append(
            f"The counterfactual in SR enforces agreement on region(s) {', '.join(agreement)}, "
            f"while its atoms mention only {', '.join(mentioned)}."
        )
    return lines



def load_corpus(scenario: Scenario, name: str = "her_corpus") -> list[Formula]:
    """Parse the bundled formula corpus against ``scenario``."""
    text = (resources.files("cfcheck") / "data" / f"{name}.txt").read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(parse(line, scenario))
    return out
