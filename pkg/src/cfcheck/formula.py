"""Formula syntax for the counterfactual logic.

Grammar (lowest precedence first)::

    formula  ::= strict
    strict   ::= implies [ "=>" strict ]
    implies  ::= disj [ "->" implies ]
    disj     ::= conj { "or" conj }
    conj     ::= unary { "and" unary }
    unary    ::= ( "not" | "box" | "dia" ) unary | primary
    primary  ::= "performed" "(" NAME ")"
               | "outcome" "(" NAME "," LABEL ")"
               | "cf" "(" "do" "(" NAME ")" "," formula ")"
               | "(" formula ")"

``->`` and ``=>`` associate to the right, ``and`` and ``or`` to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .scenario import Scenario, ScenarioError

__all__ = [
    "FormulaError",
    "Performed",
    "Outcome",
    "Action",
    "Not",
    "And",
    "Or",
    "Implies",
    "StrictImplies",
    "Box",
    "Dia",
    "Counterfactual",
    "Formula",
    "parse",
    "to_text",
    "subformulas",
    "atoms",
    "bind",
]


class FormulaError(ValueError):
    """Syntax or binding error; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: Optional[int] = None, text: Optional[str] = None):
        self.message = message
        self.position = position
        self.text = text
        if position is None:
            super().__init__(message)
        else:
            super().__init__(f"{message} at position {position}")

    def pointer(self) -> str:
        """Two-line excerpt with a caret under the offending character."""
        if self.text is None or self.position is None:
            return str(self)
        return f"{self.text}\n{' ' * self.position}^"


@dataclass(frozen=True)
class Performed:
    setting: str


@dataclass(frozen=True)
class Outcome:
    setting: str
    outcome: str


@dataclass(frozen=True)
class Action:
    region: str
    setting: str


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    """Material implication."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class StrictImplies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    operand: "Formula"


@dataclass(frozen=True)
class Dia:
    operand: "Formula"


@dataclass(frozen=True)
class Counterfactual:
    """``cf(do(S), q)``: had setting S been chosen, q would hold."""

    action: Action
    consequent: "Formula"


Formula = Union[
    Performed, Outcome, Not, And, Or, Implies, StrictImplies, Box, Dia, Counterfactual
]

_BINARY = (And, Or, Implies, StrictImplies)
_UNARY = (Not, Box, Dia)
_OPS = {And: "and", Or: "or", Implies: "->", StrictImplies: "=>", Not: "not", Box: "box", Dia: "dia"}

_KEYWORDS = {"not", "and", "or", "box", "dia", "cf", "do", "performed", "outcome"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>=>|->)
  | (?P<punct>[(),])
  | (?P<word>(?:(?!=>|->)[^\s(),])+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    for m in _TOKEN.finditer(text):
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), m.start()))
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, scenario: Optional[Scenario]):
        self.text = text
        self.scenario = scenario
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[_Tok] = None) -> FormulaError:
        tok = tok or self.tok
        return FormulaError(message, tok.pos, self.text)

    def describe(self, tok: _Tok) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.value)

    def accept(self, value: str) -> Optional[_Tok]:
        if self.tok.value == value and self.tok.kind != "eof":
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, value: str) -> _Tok:
        tok = self.accept(value)
        if tok is None:
            raise self.error(f"expected {value!r}, found {self.describe(self.tok)}")
        return tok

    def name(self, what: str) -> _Tok:
        tok = self.tok
        if tok.kind != "word" or tok.value in _KEYWORDS:
            raise self.error(f"expected {what}, found {self.describe(tok)}")
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.strict()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.describe(self.tok)}")
        return f

    def strict(self) -> Formula:
        left = self.implies()
        if self.accept("=>"):
            return StrictImplies(left, self.strict())
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("or"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("and"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("not"):
            return Not(self.unary())
        if self.accept("box"):
            return Box(self.unary())
        if self.accept("dia"):
            return Dia(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if self.accept("("):
            f = self.strict()
            self.expect(")")
            return f
        if self.accept("performed"):
            self.expect("(")
            setting = self.setting()
            self.expect(")")
            return Performed(setting)
        if self.accept("outcome"):
            self.expect("(")
            setting = self.setting()
            self.expect(",")
            label_tok = self.tok
            if label_tok.kind != "word":
                raise self.error(f"expected outcome label, found {self.describe(label_tok)}")
            self.i += 1
            self.expect(")")
            if self.scenario is not None:
                outcomes = self.scenario.setting(setting).outcomes
                if label_tok.value not in outcomes:
                    raise self.error(
                        f"setting {setting!r} has no outcome {label_tok.value!r}", label_tok
                    )
            return Outcome(setting, label_tok.value)
        if self.accept("cf"):
            self.expect("(")
            if not self.accept("do"):
                raise self.error(
                    "counterfactual antecedent must be an action do(SETTING), "
                    f"found {self.describe(self.tok)}"
                )
            self.expect("(")
            setting = self.setting()
            self.expect(")")
            self.expect(",")
            consequent = self.strict()
            self.expect(")")
            region = self.scenario.region_of(setting) if self.scenario is not None else ""
            return Counterfactual(Action(region, setting), consequent)
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"expected a formula, found {self.describe(tok)}")

    def setting(self) -> str:
        tok = self.name("setting name")
        if self.scenario is not None and not self.scenario.has_setting(tok.value):
            raise self.error(f"unknown setting {tok.value!r}", tok)
        return tok.value


def parse(text: str, scenario: Optional[Scenario] = None) -> Formula:
    """Parse ``text`` into a formula bound to ``scenario``.

    Without a scenario, names are not checked and counterfactual actions
    carry an empty region (see ``bind``).
    """
    if not isinstance(text, str):
        raise TypeError("formula text must be a string")
    parser = _Parser(text, scenario)
    try:
        return parser.parse()
    except RecursionError:
        raise FormulaError("formula nested too deeply", parser.tok.pos, text) from None


def to_text(f: Formula) -> str:
    """Canonical, fully parenthesized rendering that parses back to ``f``."""
    if isinstance(f, Performed):
        return f"performed({f.setting})"
    if isinstance(f, Outcome):
        return f"outcome({f.setting},{f.outcome})"
    if isinstance(f, Counterfactual):
        return f"cf(do({f.action.setting}), {to_text(f.consequent)})"
    if isinstance(f, _UNARY):
        return f"{_OPS[type(f)]} ({to_text(f.operand)})"
    if isinstance(f, _BINARY):
        return f"({to_text(f.left)}) {_OPS[type(f)]} ({to_text(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, _UNARY):
        return (f.operand,)
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    if isinstance(f, Counterfactual):
        return (f.consequent,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk including ``f`` itself."""
    yield f
    for c in children(f):
        yield from subformulas(c)


def atoms(f: Formula) -> set[Union[Performed, Outcome]]:
    return {g for g in subformulas(f) if isinstance(g, (Performed, Outcome))}


def bind(f: Formula, scenario: Scenario) -> Formula:
    """Check every name in ``f`` against ``scenario`` and fill in action regions."""
    if isinstance(f, Performed):
        scenario.setting(f.setting)
        return f
    if isinstance(f, Outcome):
        if f.outcome not in scenario.setting(f.setting).outcomes:
            raise ScenarioError(f"setting {f.setting!r} has no outcome {f.outcome!r}")
        return f
    if isinstance(f, Counterfactual):
        region = scenario.region_of(f.action.setting)
        if f.action.region and f.action.region != region:
            raise ScenarioError(
                f"action do({f.action.setting}) names region {f.action.region!r}, "
                f"but the setting belongs to {region!r}"
            )
        return Counterfactual(Action(region, f.action.setting), bind(f.consequent, scenario))
    if isinstance(f, _UNARY):
        return type(f)(bind(f.operand, scenario))
    if isinstance(f, _BINARY):
        return type(f)(bind(f.left, scenario), bind(f.right, scenario))
    raise TypeError(f"not a formula: {f!r}")
