"""Reader and writer for ``.scenario`` files.

The format is line oriented. Blank lines and ``#`` comments are ignored;
every other line is either a section header ``[kind name]`` or a
``key = value`` entry. See ``docs/formats.md`` for the full grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .scenario import (
    Conditional,
    Constraint,
    Forbid,
    Possibility,
    Region,
    Scenario,
    ScenarioError,
    Setting,
    World,
    WorldPattern,
    validate_scenario,
)

__all__ = [
    "ScenarioFileError",
    "parse_scenario",
    "load_scenario",
    "dump_scenario",
    "parse_pattern",
    "parse_world",
    "bundled_scenario_path",
    "load_bundled",
]

_HEADER = re.compile(r"\[\s*(?P<kind>[A-Za-z_]+)(?:\s+(?P<name>\S+?))?\s*\]\Z")
_ENTRY = re.compile(r"(?P<key>[^=\s]+)\s*=\s*(?P<value>.*)\Z")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_KEYS = {
    "scenario": {"name", "spacelike"},
    "constraint": {"forbid", "if", "then"},
    "possible": {"match"},
}


class ScenarioFileError(ScenarioError):
    """Parse error in a scenario file; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1, source: str = "<string>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


@dataclass
class _Entry:
    key: str
    value: str
    line: int
    column: int  # column where the value starts


@dataclass
class _Section:
    kind: str
    name: Optional[str]
    line: int
    entries: list[_Entry] = field(default_factory=list)

    def get(self, key: str) -> Optional[_Entry]:
        return next((e for e in self.entries if e.key == key), None)


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _read_sections(text: str, source: str) -> list[_Section]:
    sections: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if body.startswith("["):
            m = _HEADER.match(body)
            if m is None:
                raise ScenarioFileError("malformed section header", lineno, indent + 1, source)
            kind, name = m.group("kind"), m.group("name")
            if kind not in ("scenario", "region", "constraint", "possible"):
                raise ScenarioFileError(f"unknown section kind {kind!r}", lineno, indent + 2, source)
            if kind == "scenario" and name is not None:
                raise ScenarioFileError("[scenario] takes no name", lineno, indent + 1, source)
            if kind != "scenario" and name is None:
                raise ScenarioFileError(f"[{kind}] section needs a name", lineno, indent + 1, source)
            if name is not None and not _IDENT.match(name):
                col = indent + 1 + body.index(name)
                raise ScenarioFileError(f"invalid name {name!r}", lineno, col, source)
            sections.append(_Section(kind, name, lineno))
            continue
        m = _ENTRY.match(body)
        if m is None:
            raise ScenarioFileError("expected 'key = value' or a section header", lineno, indent + 1, source)
        if not sections:
            raise ScenarioFileError("entry before any section header", lineno, indent + 1, source)
        section = sections[-1]
        key = m.group("key")
        if section.get(key) is not None:
            raise ScenarioFileError(f"duplicate key {key!r}", lineno, indent + 1, source)
        allowed = _KEYS.get(section.kind)
        if allowed is not None and key not in allowed:
            raise ScenarioFileError(
                f"unknown key {key!r} in [{section.kind}] section", lineno, indent + 1, source
            )
        value_col = indent + 1 + m.start("value")
        section.entries.append(_Entry(key, m.group("value").strip(), lineno, value_col))
    return sections


def _split_items(value: str, column: int) -> list[tuple[str, int]]:
    """Split a comma list, keeping the column of each stripped item."""
    items = []
    offset = 0
    for part in value.split(","):
        lead = len(part) - len(part.lstrip())
        items.append((part.strip(), column + offset + lead))
        offset += len(part) + 1
    return items


class _PatternReader:
    """Resolves ``SETTING[OUTCOME]`` items against declared settings."""

    def __init__(self, settings: dict[str, tuple[str, tuple[str, ...]]]):
        self.settings = settings
        # longest first so "L10" wins over "L1"
        self.names = sorted(settings, key=len, reverse=True)

    def item(self, text: str) -> tuple[str, str, Optional[str]]:
        """Return (region, setting, outcome) or raise ValueError."""
        if not text:
            raise ValueError("empty item")
        for name in self.names:
            if text.startswith(name):
                rest = text[len(name):].strip()
                region, outcomes = self.settings[name]
                if not rest:
                    return region, name, None
                if rest not in outcomes:
                    # a longer setting name may still have matched a prefix of
                    # a different setting, so keep looking before failing
                    continue
                return region, name, rest
        raise ValueError(f"no declared setting/outcome matches {text!r}")

    def pattern(self, value: str, column: int, order: dict[str, int]) -> tuple[WorldPattern, list[int]]:
        items = []
        columns = []
        seen: dict[str, int] = {}
        if value.strip() in ("", "*"):
            return WorldPattern(()), []
        for text, col in _split_items(value, column):
            try:
                region, setting, outcome = self.item(text)
            except ValueError as exc:
                raise _ItemError(str(exc), col) from None
            if region in seen:
                raise _ItemError(f"region {region!r} appears twice", col)
            seen[region] = col
            items.append((region, setting, outcome))
            columns.append(col)
        paired = sorted(zip(items, columns), key=lambda ic: order[ic[0][0]])
        return WorldPattern(tuple(i for i, _ in paired)), [c for _, c in paired]


class _ItemError(Exception):
    def __init__(self, message: str, column: int):
        super().__init__(message)
        self.message = message
        self.column = column


def _bool(entry: _Entry, source: str) -> bool:
    if entry.value in ("true", "yes"):
        return True
    if entry.value in ("false", "no"):
        return False
    raise ScenarioFileError(f"expected true or false, got {entry.value!r}", entry.line, entry.column, source)


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse scenario text and return a validated ``Scenario``."""
    sections = _read_sections(text, source)
    headers = [s for s in sections if s.kind == "scenario"]
    if not headers:
        raise ScenarioFileError("missing [scenario] section", 1, 1, source)
    if len(headers) > 1:
        raise ScenarioFileError("duplicate [scenario] section", headers[1].line, 1, source)
    head = headers[0]
    name_entry = head.get("name")
    if name_entry is None:
        raise ScenarioFileError("[scenario] needs a 'name' entry", head.line, 1, source)
    if not _IDENT.match(name_entry.value):
        raise ScenarioFileError(
            f"invalid scenario name {name_entry.value!r}", name_entry.line, name_entry.column, source
        )
    spacelike_entry = head.get("spacelike")
    spacelike = True if spacelike_entry is None else _bool(spacelike_entry, source)

    regions: list[Region] = []
    settings: dict[str, tuple[str, tuple[str, ...]]] = {}
    seen_names: dict[tuple[str, str], int] = {}
    for sec in sections:
        if sec.kind in ("region", "constraint", "possible"):
            key = ("region" if sec.kind == "region" else "rule", sec.name)
            if key in seen_names:
                raise ScenarioFileError(f"duplicate {sec.kind} name {sec.name!r}", sec.line, 1, source)
            seen_names[key] = sec.line
        if sec.kind != "region":
            continue
        decl = []
        if not sec.entries:
            raise ScenarioFileError(f"region {sec.name!r} declares no settings", sec.line, 1, source)
        for e in sec.entries:
            if not _IDENT.match(e.key):
                raise ScenarioFileError(f"invalid setting name {e.key!r}", e.line, e.column, source)
            if e.key in settings:
                raise ScenarioFileError(f"duplicate setting name {e.key!r}", e.line, 1, source)
            labels = []
            for label, col in _split_items(e.value, e.column):
                if not label:
                    raise ScenarioFileError("empty outcome label", e.line, col, source)
                if not re.match(r"[^\s,()#;=<>\[\]]+\Z", label):
                    raise ScenarioFileError(f"invalid outcome label {label!r}", e.line, col, source)
                if label in labels:
                    raise ScenarioFileError(f"duplicate outcome label {label!r}", e.line, col, source)
                labels.append(label)
            settings[e.key] = (sec.name, tuple(labels))
            decl.append(Setting(e.key, labels))
        regions.append(Region(sec.name, decl))

    reader = _PatternReader(settings)
    order = {r.name: i for i, r in enumerate(regions)}

    def pattern(entry: _Entry) -> WorldPattern:
        try:
            return reader.pattern(entry.value, entry.column, order)[0]
        except _ItemError as exc:
            raise ScenarioFileError(exc.message, entry.line, exc.column, source) from None

    constraints: list[Constraint] = []
    possibilities: list[Possibility] = []
    for sec in sections:
        if sec.kind == "constraint":
            forbid, cond, then = sec.get("forbid"), sec.get("if"), sec.get("then")
            if forbid is not None:
                if cond is not None or then is not None:
                    raise ScenarioFileError(
                        "a constraint is either 'forbid' or 'if'/'then', not both", sec.line, 1, source
                    )
                constraints.append(Forbid(pattern(forbid), sec.name))
            elif cond is not None and then is not None:
                try:
                    region, setting, outcome = reader.item(then.value)
                except ValueError as exc:
                    raise ScenarioFileError(str(exc), then.line, then.column, source) from None
                if outcome is None:
                    raise ScenarioFileError(
                        "'then' needs a setting with an outcome, e.g. R1-", then.line, then.column, source
                    )
                constraints.append(Conditional(pattern(cond), region, setting, outcome, sec.name))
            else:
                raise ScenarioFileError(
                    "constraint needs 'forbid', or both 'if' and 'then'", sec.line, 1, source
                )
        elif sec.kind == "possible":
            match = sec.get("match")
            if match is None:
                raise ScenarioFileError("[possible] needs a 'match' entry", sec.line, 1, source)
            possibilities.append(Possibility(pattern(match), sec.name))

    scenario = Scenario(name_entry.value, regions, constraints, possibilities, spacelike)
    try:
        return validate_scenario(scenario)
    except ScenarioFileError:
        raise
    except ScenarioError as exc:
        raise ScenarioFileError(str(exc), 1, 1, source) from None


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), str(path))


def bundled_scenario_path(name: str = "her") -> Path:
    return Path(str(resources.files("cfcheck") / "data" / f"{name}.scenario"))


def load_bundled(name: str = "her") -> Scenario:
    return load_scenario(bundled_scenario_path(name))


def dump_scenario(s: Scenario) -> str:
    """Canonical text for ``s``; ``parse_scenario(dump_scenario(s)) == s``."""
    lines = ["[scenario]", f"name = {s.name}", f"spacelike = {'true' if s.spacelike else 'false'}"]
    for region in s.regions:
        lines += ["", f"[region {region.name}]"]
        lines += [f"{st.name} = {', '.join(st.outcomes)}" for st in region.settings]
    for i, c in enumerate(s.constraints, start=1):
        lines += ["", f"[constraint {c.label or f'c{i}'}]"]
        if isinstance(c, Forbid):
            lines.append(f"forbid = {_fmt_pattern(c.pattern)}")
        else:
            lines.append(f"if = {_fmt_pattern(c.condition)}")
            lines.append(f"then = {c.setting}{c.outcome}")
    for i, p in enumerate(s.possibilities, start=1):
        lines += ["", f"[possible {p.label or f'p{i}'}]", f"match = {_fmt_pattern(p.pattern)}"]
    return "\n".join(lines) + "\n"


def _fmt_pattern(p: WorldPattern) -> str:
    return ", ".join(s if o is None else f"{s}{o}" for _, s, o in p.items) or "*"


def _reader_for(s: Scenario) -> _PatternReader:
    return _PatternReader(
        {st.name: (r.name, st.outcomes) for r in s.regions for st in r.settings}
    )


def parse_pattern(text: str, s: Scenario) -> WorldPattern:
    """Parse ``"L1-,R1"`` style text into a pattern over ``s``."""
    order = {name: i for i, name in enumerate(s.region_names)}
    try:
        return _reader_for(s).pattern(text, 1, order)[0]
    except _ItemError as exc:
        raise ScenarioError(f"{exc.message} at column {exc.column}") from None


def parse_world(text: str, s: Scenario) -> World:
    """Parse a world literal such as ``"L2+,R2+"`` (parentheses optional)."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    p = parse_pattern(body, s)
    missing = [r for r in s.region_names if r not in p.as_dict()]
    if missing:
        raise ScenarioError(f"world {text!r} does not assign region(s) {', '.join(missing)}")
    if any(o is None for _, _, o in p.items):
        raise ScenarioError(f"world {text!r} must give an outcome for every region")
    return World(tuple((r, st, o) for r, st, o in p.items))
