"""Scenario, world and constraint types.

A scenario is a set of spacelike-separated regions. Each region offers a
choice of measurement settings and each setting has a list of outcome
labels. A world picks exactly one (setting, outcome) pair per region.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Union

__all__ = [
    "ScenarioError",
    "Setting",
    "Region",
    "World",
    "WorldPattern",
    "Forbid",
    "Conditional",
    "Constraint",
    "Possibility",
    "Scenario",
    "validate_scenario",
    "compile_constraint",
    "normalize_constraints",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_LABEL = re.compile(r"[^\s,()#;=<>\[\]]+\Z")


class ScenarioError(ValueError):
    """Raised for malformed scenarios and dangling references."""


@dataclass(frozen=True)
class Setting:
    name: str
    outcomes: tuple[str, ...]

    def __init__(self, name: str, outcomes: Iterable[str]):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "outcomes", tuple(outcomes))


@dataclass(frozen=True)
class Region:
    name: str
    settings: tuple[Setting, ...]

    def __init__(self, name: str, settings: Iterable[Setting]):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "settings", tuple(settings))


@dataclass(frozen=True, order=False)
class World:
    """One (setting, outcome) choice per region, in region declaration order.

    ``assignment`` is a tuple of ``(region, setting, outcome)`` triples.
    Two worlds are equal iff their assignments are equal.
    """

    assignment: tuple[tuple[str, str, str], ...]

    def __getitem__(self, region: str) -> tuple[str, str]:
        for name, setting, outcome in self.assignment:
            if name == region:
                return setting, outcome
        raise KeyError(region)

    @property
    def regions(self) -> tuple[str, ...]:
        return tuple(r for r, _, _ in self.assignment)

    def restrict(self, region: str) -> tuple[str, str]:
        return self[region]

    def format(self) -> str:
        """Render as ``L2+,R2+``."""
        return ",".join(f"{s}{o}" for _, s, o in self.assignment)

    def __str__(self) -> str:
        return f"({self.format()})"


@dataclass(frozen=True)
class WorldPattern:
    """Partial world: region -> (setting, outcome or None).

    A pattern with no items matches every world.
    """

    items: tuple[tuple[str, str, Optional[str]], ...] = ()

    @classmethod
    def from_mapping(
        cls, mapping: Mapping[str, Union[tuple[str, Optional[str]], str]]
    ) -> "WorldPattern":
        items = []
        for region, value in mapping.items():
            if isinstance(value, str):
                items.append((region, value, None))
            else:
                setting, outcome = value
                items.append((region, setting, outcome))
        return cls(tuple(items))

    def as_dict(self) -> dict[str, tuple[str, Optional[str]]]:
        return {r: (s, o) for r, s, o in self.items}

    def matches(self, world: World) -> bool:
        for region, setting, outcome in self.items:
            try:
                w_setting, w_outcome = world[region]
            except KeyError:
                return False
            if w_setting != setting:
                return False
            if outcome is not None and w_outcome != outcome:
                return False
        return True

    def with_item(self, region: str, setting: str, outcome: Optional[str]) -> "WorldPattern":
        """Return a copy with ``region`` set, replaced in place or appended."""
        items = [(r, s, o) if r != region else (region, setting, outcome) for r, s, o in self.items]
        if all(r != region for r, _, _ in self.items):
            items.append((region, setting, outcome))
        return WorldPattern(tuple(items))

    def format(self) -> str:
        return ",".join(s if o is None else f"{s}{o}" for _, s, o in self.items)

    def __str__(self) -> str:
        return f"({self.format()})"


@dataclass(frozen=True)
class Forbid:
    pattern: WorldPattern
    label: str = ""

    kind = "forbid"


@dataclass(frozen=True)
class Conditional:
    """If ``condition`` holds and ``setting`` is performed, it yields ``outcome``."""

    condition: WorldPattern
    region: str
    setting: str
    outcome: str
    label: str = ""

    kind = "conditional"

    def violated_by(self, world: World) -> bool:
        if not self.condition.matches(world):
            return False
        w_setting, w_outcome = world[self.region]
        return w_setting == self.setting and w_outcome != self.outcome


Constraint = Union[Forbid, Conditional]


@dataclass(frozen=True)
class Possibility:
    """An assertion that at least one possible world matches ``pattern``."""

    pattern: WorldPattern
    label: str = ""


@dataclass(frozen=True)
class Scenario:
    name: str
    regions: tuple[Region, ...]
    constraints: tuple[Constraint, ...] = ()
    possibilities: tuple[Possibility, ...] = ()
    spacelike: bool = True

    def __init__(
        self,
        name: str,
        regions: Iterable[Region],
        constraints: Iterable[Constraint] = (),
        possibilities: Iterable[Union[Possibility, WorldPattern]] = (),
        spacelike: bool = True,
    ):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "regions", tuple(regions))
        object.__setattr__(self, "constraints", tuple(constraints))
        object.__setattr__(
            self,
            "possibilities",
            tuple(p if isinstance(p, Possibility) else Possibility(p) for p in possibilities),
        )
        object.__setattr__(self, "spacelike", spacelike)

    # lookup tables, built lazily; the dataclass is frozen so they never go stale

    @cached_property
    def region_names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.regions)

    @cached_property
    def _region_by_name(self) -> dict[str, Region]:
        return {r.name: r for r in self.regions}

    @cached_property
    def _setting_table(self) -> dict[str, tuple[str, Setting]]:
        return {s.name: (r.name, s) for r in self.regions for s in r.settings}

    def region(self, name: str) -> Region:
        try:
            return self._region_by_name[name]
        except KeyError:
            raise ScenarioError(f"unknown region {name!r}") from None

    def setting(self, name: str) -> Setting:
        try:
            return self._setting_table[name][1]
        except KeyError:
            raise ScenarioError(f"unknown setting {name!r}") from None

    def region_of(self, setting: str) -> str:
        try:
            return self._setting_table[setting][0]
        except KeyError:
            raise ScenarioError(f"unknown setting {setting!r}") from None

    def has_setting(self, name: str) -> bool:
        return name in self._setting_table

    def choices(self, region: str) -> tuple[tuple[str, str], ...]:
        """(setting, outcome) pairs available in ``region``, in declaration order."""
        return tuple((s.name, o) for s in self.region(region).settings for o in s.outcomes)

    @cached_property
    def setting_names(self) -> tuple[str, ...]:
        return tuple(self._setting_table)

    def world(self, pairs: Mapping[str, tuple[str, str]]) -> World:
        """Build a world from ``{region: (setting, outcome)}``; checks membership."""
        if set(pairs) != set(self.region_names):
            raise ScenarioError(
                f"world must assign every region {list(self.region_names)}, got {sorted(pairs)}"
            )
        assignment = []
        for region in self.region_names:
            setting, outcome = pairs[region]
            self._check_ref(region, setting, outcome, "world")
            assignment.append((region, setting, outcome))
        return World(tuple(assignment))

    def world_of(self, *choices: tuple[str, str]) -> World:
        """Build a world from ``(setting, outcome)`` pairs; regions are inferred."""
        pairs = {}
        for setting, outcome in choices:
            region = self.region_of(setting)
            if region in pairs:
                raise ScenarioError(f"region {region!r} assigned twice")
            pairs[region] = (setting, outcome)
        return self.world(pairs)

    def pattern(self, *choices: Union[str, tuple[str, Optional[str]]]) -> WorldPattern:
        """Build a pattern from setting names or ``(setting, outcome)`` pairs."""
        items = []
        seen = set()
        for choice in choices:
            setting, outcome = (choice, None) if isinstance(choice, str) else choice
            region = self.region_of(setting)
            if region in seen:
                raise ScenarioError(f"region {region!r} appears twice in pattern")
            seen.add(region)
            self._check_ref(region, setting, outcome, "pattern")
            items.append((region, setting, outcome))
        return WorldPattern(tuple(items))

    def world_key(self, world: World) -> tuple[int, ...]:
        """Sort key giving the lexicographic (declaration) world order."""
        return tuple(self._choice_index[r][(s, o)] for r, s, o in world.assignment)

    @cached_property
    def _choice_index(self) -> dict[str, dict[tuple[str, str], int]]:
        return {
            r.name: {pair: i for i, pair in enumerate(self.choices(r.name))} for r in self.regions
        }

    def _check_ref(self, region: str, setting: str, outcome: Optional[str], where: str) -> None:
        if region not in self._region_by_name:
            raise ScenarioError(f"{where} refers to undeclared region {region!r}")
        entry = self._setting_table.get(setting)
        if entry is None:
            raise ScenarioError(f"{where} refers to undeclared setting {setting!r}")
        owner, decl = entry
        if owner != region:
            raise ScenarioError(
                f"{where} places setting {setting!r} in region {region!r}, "
                f"but it belongs to {owner!r}"
            )
        if outcome is not None and outcome not in decl.outcomes:
            raise ScenarioError(
                f"{where} refers to undeclared outcome {outcome!r} of setting {setting!r}"
            )


def _check_name(kind: str, name: str, pattern: re.Pattern = _IDENT) -> None:
    if not isinstance(name, str) or not pattern.match(name):
        raise ScenarioError(f"invalid {kind} name {name!r}")


def _check_pattern(s: Scenario, pattern: WorldPattern, where: str) -> None:
    seen = set()
    for region, setting, outcome in pattern.items:
        if region in seen:
            raise ScenarioError(f"{where}: region {region!r} appears twice")
        seen.add(region)
        s._check_ref(region, setting, outcome, where)


def validate_scenario(raw: Scenario) -> Scenario:
    """Check every scenario invariant and return the scenario.

    Raises ``ScenarioError`` on duplicate names, empty setting or outcome
    lists, dangling references, or a multi-region scenario whose regions
    are not attested as pairwise spacelike-separated.
    """
    _check_name("scenario", raw.name)
    if not raw.regions:
        raise ScenarioError("scenario declares no regions")
    if len(raw.regions) > 1 and not raw.spacelike:
        raise ScenarioError("regions must be attested pairwise spacelike-separated")

    region_names: set[str] = set()
    setting_names: set[str] = set()
    for region in raw.regions:
        _check_name("region", region.name)
        if region.name in region_names:
            raise ScenarioError(f"duplicate region name {region.name!r}")
        region_names.add(region.name)
        if not region.settings:
            raise ScenarioError(f"region {region.name!r} declares no settings")
        for setting in region.settings:
            _check_name("setting", setting.name)
            if setting.name in setting_names:
                raise ScenarioError(f"duplicate setting name {setting.name!r}")
            setting_names.add(setting.name)
            if not setting.outcomes:
                raise ScenarioError(f"setting {setting.name!r} declares no outcomes")
            if len(set(setting.outcomes)) != len(setting.outcomes):
                raise ScenarioError(f"duplicate outcome label in setting {setting.name!r}")
            for label in setting.outcomes:
                _check_name("outcome", label, _LABEL)

    for i, c in enumerate(raw.constraints):
        where = f"constraint {c.label or i + 1}"
        if isinstance(c, Forbid):
            _check_pattern(raw, c.pattern, where)
        elif isinstance(c, Conditional):
            _check_pattern(raw, c.condition, where)
            raw._check_ref(c.region, c.setting, c.outcome, where)
        else:
            raise ScenarioError(f"{where}: unknown constraint type {type(c).__name__}")

    for i, p in enumerate(raw.possibilities):
        _check_pattern(raw, p.pattern, f"possibility {p.label or i + 1}")
    return raw


def compile_constraint(c: Constraint, s: Scenario) -> list[WorldPattern]:
    """Forbid patterns equivalent to one constraint.

    A conditional forbids its condition combined with every outcome of the
    named setting other than the required one.
    """
    if isinstance(c, Forbid):
        return [c.pattern]
    condition = c.condition.as_dict()
    if c.region in condition:
        setting, outcome = condition[c.region]
        if setting != c.setting:
            return []
        if outcome is not None:
            return [] if outcome == c.outcome else [c.condition]
    order = {name: i for i, name in enumerate(s.region_names)}
    patterns = []
    for other in s.setting(c.setting).outcomes:
        if other == c.outcome:
            continue
        p = c.condition.with_item(c.region, c.setting, other)
        patterns.append(WorldPattern(tuple(sorted(p.items, key=lambda it: order[it[0]]))))
    return patterns


def normalize_constraints(s: Scenario) -> list[WorldPattern]:
    patterns: list[WorldPattern] = []
    for c in s.constraints:
        patterns.extend(compile_constraint(c, s))
    return patterns

