"""Truth evaluation over a set of possible worlds.

Box, Dia and strict implication quantify over the possible set. A
counterfactual ``cf(do(S), q)`` holds at ``w`` when ``q`` holds at every
possible world that performs ``S`` and agrees with ``w`` on every region
other than the one ``S`` belongs to. With pairwise spacelike regions
those other regions are exactly the ones outside the action's future
light cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .formula import (
    Action,
    And,
    Box,
    Counterfactual,
    Dia,
    Formula,
    Implies,
    Not,
    Or,
    Outcome,
    Performed,
    StrictImplies,
    to_text,
)
from .scenario import World
from .worlds import WorldSet

__all__ = [
    "EvaluationError",
    "Verdict",
    "Evaluator",
    "accessible",
    "eval_at",
    "strict_implies",
]

# witness roles
ACCESSIBLE = "accessible"
VIOLATING = "violating"
COUNTEREXAMPLE = "counterexample"
WITNESS = "witness"
ANTECEDENT = "antecedent"


class EvaluationError(ValueError):
    """Evaluation requested at a world outside the possible set."""


@dataclass(frozen=True)
class Verdict:
    """A truth value with the worlds that justify it.

    ``witnesses`` holds ``(world, role)`` pairs. ``notes`` flags things a
    reader should know, such as a counterfactual that held vacuously.
    """

    value: bool
    witnesses: tuple[tuple[World, str], ...] = ()
    notes: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.value

    def worlds(self, role: str) -> tuple[World, ...]:
        return tuple(w for w, r in self.witnesses if r == role)


def accessible(w: World, act: Action, possible: WorldSet) -> WorldSet:
    """Possible worlds where ``act`` is taken and every other region matches ``w``."""
    region = act.region or possible.scenario.region_of(act.setting)
    others = [(r, s, o) for r, s, o in w.assignment if r != region]
    found = []
    for v in possible:
        if v[region][0] != act.setting:
            continue
        if all(v[r] == (s, o) for r, s, o in others):
            found.append(v)
    return WorldSet(possible.scenario, tuple(found), possible.tag)


def _merge(*verdicts: Verdict) -> tuple[tuple, tuple]:
    witnesses: list = []
    notes: list = []
    for v in verdicts:
        for item in v.witnesses:
            if item not in witnesses:
                witnesses.append(item)
        for n in v.notes:
            if n not in notes:
                notes.append(n)
    return tuple(witnesses), tuple(notes)


class Evaluator:
    """Recursive evaluator over one possible-world set.

    Truth values are memoized per (formula, world), so nested modal
    operators cost one pass over the worlds per distinct subformula.
    """

    def __init__(self, possible: WorldSet):
        self.possible = possible
        self._values: dict[tuple[Formula, World], bool] = {}
        self._access: dict[tuple[World, Action], WorldSet] = {}

    def accessible(self, w: World, act: Action) -> WorldSet:
        key = (w, act)
        if key not in self._access:
            self._access[key] = accessible(w, act, self.possible)
        return self._access[key]

    def holds(self, f: Formula, w: World) -> bool:
        key = (f, w)
        value = self._values.get(key)
        if value is None:
            value = self._holds(f, w)
            self._values[key] = value
        return value

    def _holds(self, f: Formula, w: World) -> bool:
        if isinstance(f, Performed):
            region = self.possible.scenario.region_of(f.setting)
            return w[region][0] == f.setting
        if isinstance(f, Outcome):
            region = self.possible.scenario.region_of(f.setting)
            return w[region] == (f.setting, f.outcome)
        if isinstance(f, Not):
            return not self.holds(f.operand, w)
        if isinstance(f, And):
            return self.holds(f.left, w) and self.holds(f.right, w)
        if isinstance(f, Or):
            return self.holds(f.left, w) or self.holds(f.right, w)
        if isinstance(f, Implies):
            return not self.holds(f.left, w) or self.holds(f.right, w)
        if isinstance(f, Box):
            return all(self.holds(f.operand, v) for v in self.possible)
        if isinstance(f, Dia):
            return any(self.holds(f.operand, v) for v in self.possible)
        if isinstance(f, StrictImplies):
            return all(
                self.holds(f.right, v) for v in self.possible if self.holds(f.left, v)
            )
        if isinstance(f, Counterfactual):
            return all(self.holds(f.consequent, v) for v in self.accessible(w, f.action))
        raise TypeError(f"not a formula: {f!r}")

    def verdict(self, f: Formula, w: World) -> Verdict:
        """Evaluate ``f`` at ``w`` and collect the evidence for the value."""
        if w not in self.possible:
            raise EvaluationError(f"{w} is not a possible world")
        return self._verdict(f, w)

    def _verdict(self, f: Formula, w: World) -> Verdict:
        value = self.holds(f, w)
        if isinstance(f, (Performed, Outcome)):
            return Verdict(value)
        if isinstance(f, Not):
            inner = self._verdict(f.operand, w)
            return Verdict(value, inner.witnesses, inner.notes)
        if isinstance(f, (And, Or)):
            left = self._verdict(f.left, w)
            # the left side alone decides a false conjunction or a true disjunction
            decisive = isinstance(f, And) != left.value
            if decisive:
                return Verdict(value, left.witnesses, left.notes)
            right = self._verdict(f.right, w)
            if value == left.value == right.value:
                return Verdict(value, *_merge(left, right))
            return Verdict(value, right.witnesses, right.notes)
        if isinstance(f, Implies):
            left = self._verdict(f.left, w)
            if not left.value:
                return Verdict(True, left.witnesses, left.notes)
            right = self._verdict(f.right, w)
            return Verdict(value, *_merge(left, right)) if value else Verdict(
                value, right.witnesses, right.notes
            )
        if isinstance(f, Box):
            return self._universal(f.operand, value, None)
        if isinstance(f, Dia):
            if value:
                first = next(v for v in self.possible if self.holds(f.operand, v))
                return Verdict(True, ((first, WITNESS),))
            return Verdict(False)
        if isinstance(f, StrictImplies):
            return self._universal(f.right, value, f.left)
        if isinstance(f, Counterfactual):
            return self._counterfactual(f, w, value)
        raise TypeError(f"not a formula: {f!r}")

    def _universal(self, body: Formula, value: bool, guard: Optional[Formula]) -> Verdict:
        scope = [v for v in self.possible if guard is None or self.holds(guard, v)]
        if value:
            return Verdict(True, tuple((v, ANTECEDENT) for v in scope) if guard is not None else ())
        return Verdict(
            False, tuple((v, COUNTEREXAMPLE) for v in scope if not self.holds(body, v))
        )

    def _counterfactual(self, f: Counterfactual, w: World, value: bool) -> Verdict:
        reach = self.accessible(w, f.action)
        witnesses = [(v, ACCESSIBLE) for v in reach]
        witnesses += [(v, VIOLATING) for v in reach if not self.holds(f.consequent, v)]
        notes = ()
        if not reach:
            notes = (f"vacuous: no possible world accessible from {w} under do({f.action.setting}) "
                     f"in {to_text(f)}",)
        return Verdict(value, tuple(witnesses), notes)


def eval_at(f: Formula, w: World, possible: WorldSet) -> Verdict:
    return Evaluator(possible).verdict(f, w)


def strict_implies(a: Formula, b: Formula, possible: WorldSet) -> Verdict:
    """``a => b`` over ``possible``.

    A false verdict lists every counterexample world in world order; a
    true one lists the worlds where ``a`` holds.
    """
    ev = Evaluator(possible)
    antecedent = [v for v in possible if ev.holds(a, v)]
    failures = [v for v in antecedent if not ev.holds(b, v)]
    if failures:
        return Verdict(False, tuple((v, COUNTEREXAMPLE) for v in failures))
    return Verdict(True, tuple((v, ANTECEDENT) for v in antecedent))
