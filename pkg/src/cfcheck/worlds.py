"""Candidate enumeration, constraint filtering and possibility checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .scenario import (
    Constraint,
    Possibility,
    Scenario,
    ScenarioError,
    World,
    compile_constraint,
    normalize_constraints,
)

__all__ = [
    "DEFAULT_MAX_WORLDS",
    "EnumerationLimitError",
    "WorldSet",
    "PossibilityCheck",
    "PossibilityReport",
    "candidate_count",
    "enumerate_candidates",
    "filter_possible",
    "possible_worlds",
    "check_possibilities",
    "eliminations",
]

DEFAULT_MAX_WORLDS = 1_000_000

CANDIDATE = "candidate"
POSSIBLE = "possible"


class EnumerationLimitError(ScenarioError):
    """The candidate space exceeds the configured ceiling."""


@dataclass(frozen=True)
class WorldSet:
    scenario: Scenario
    worlds: tuple[World, ...]
    tag: str

    def __iter__(self) -> Iterator[World]:
        return iter(self.worlds)

    def __len__(self) -> int:
        return len(self.worlds)

    def __contains__(self, world: object) -> bool:
        return world in self._index

    def __getitem__(self, i: int) -> World:
        return self.worlds[i]

    @cached_property
    def _index(self) -> dict[World, int]:
        return {w: i for i, w in enumerate(self.worlds)}

    def index(self, world: World) -> int:
        return self._index[world]

    def sort(self, worlds: Iterable[World]) -> tuple[World, ...]:
        """Return ``worlds`` (members of this set) in this set's order."""
        return tuple(sorted(set(worlds), key=self._index.__getitem__))

    def subset(self, worlds: Iterable[World], tag: Optional[str] = None) -> "WorldSet":
        return WorldSet(self.scenario, self.sort(worlds), tag or self.tag)


def candidate_count(s: Scenario) -> int:
    return math.prod(len(s.choices(r)) for r in s.region_names)


def enumerate_candidates(s: Scenario, max_worlds: int = DEFAULT_MAX_WORLDS) -> WorldSet:
    """All combinations of one (setting, outcome) pair per region.

    Worlds come out in lexicographic order over the declaration order of
    regions, settings and outcomes.
    """
    n = candidate_count(s)
    if n > max_worlds:
        raise EnumerationLimitError(
            f"scenario {s.name!r} has {n} candidate worlds, above the limit of {max_worlds}"
        )
    names = s.region_names
    per_region = [s.choices(r) for r in names]
    worlds = tuple(
        World(tuple((r, setting, outcome) for r, (setting, outcome) in zip(names, combo)))
        for combo in itertools.product(*per_region)
    )
    return WorldSet(s, worlds, CANDIDATE)


def filter_possible(candidates: WorldSet, s: Scenario) -> WorldSet:
    forbidden = normalize_constraints(s)
    kept = tuple(w for w in candidates if not any(p.matches(w) for p in forbidden))
    return WorldSet(s, kept, POSSIBLE)


def possible_worlds(s: Scenario, max_worlds: int = DEFAULT_MAX_WORLDS) -> WorldSet:
    return filter_possible(enumerate_candidates(s, max_worlds), s)


@dataclass(frozen=True)
class PossibilityCheck:
    possibility: Possibility
    satisfied: bool
    witness: Optional[World]


@dataclass(frozen=True)
class PossibilityReport:
    checks: tuple[PossibilityCheck, ...]

    @property
    def satisfied(self) -> bool:
        return all(c.satisfied for c in self.checks)


def check_possibilities(possible: WorldSet, s: Scenario) -> PossibilityReport:
    """For each possibility assertion, find the first possible world matching it."""
    checks = []
    for p in s.possibilities:
        witness = next((w for w in possible if p.pattern.matches(w)), None)
        checks.append(PossibilityCheck(p, witness is not None, witness))
    return PossibilityReport(tuple(checks))


def eliminations(candidates: WorldSet, s: Scenario) -> list[tuple[World, tuple[Constraint, ...]]]:
    """Eliminated candidates, each with the constraints that rule it out."""
    compiled = [(c, compile_constraint(c, s)) for c in s.constraints]
    out = []
    for w in candidates:
        culprits = tuple(c for c, patterns in compiled if any(p.matches(w) for p in patterns))
        if culprits:
            out.append((w, culprits))
    return out
