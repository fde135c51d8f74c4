"""Machine (JSON) and text renderings of command results.

Machine output is a JSON object with sorted keys and two-space indent,
so identical inputs give byte-identical output. Worlds are rendered as
world literals (``"L2+,R2+"``), which parse back as patterns.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .analysis import HerReport, LocalityReport, PropertyReport
from .evaluator import Verdict
from .formula import to_text
from .scenario import Conditional, Forbid, World
from .worlds import PossibilityReport, WorldSet

FORMAT_VERSION = 1


def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def world(w: Optional[World]) -> Optional[str]:
    return None if w is None else w.format()


def worlds(ws) -> list[str]:
    return [w.format() for w in ws]


def verdict(v: Verdict) -> dict[str, Any]:
    return {
        "value": v.value,
        "witnesses": [{"world": w.format(), "role": role} for w, role in v.witnesses],
        "notes": list(v.notes),
    }


def possibilities(rep: PossibilityReport) -> list[dict[str, Any]]:
    return [
        {
            "label": c.possibility.label,
            "pattern": c.possibility.pattern.format(),
            "satisfied": c.satisfied,
            "witness": world(c.witness),
        }
        for c in rep.checks
    ]


def constraint(c) -> dict[str, Any]:
    if isinstance(c, Forbid):
        return {"label": c.label, "kind": "forbid", "forbid": c.pattern.format()}
    assert isinstance(c, Conditional)
    return {
        "label": c.label,
        "kind": "conditional",
        "if": c.condition.format(),
        "then": f"{c.setting}{c.outcome}",
    }


def world_tables(candidates: WorldSet, eliminated, possible: WorldSet, poss: PossibilityReport) -> dict[str, Any]:
    return {
        "counts": {
            "candidates": len(candidates),
            "eliminated": len(eliminated),
            "possible": len(possible),
        },
        "candidates": worlds(candidates),
        "eliminated": [
            {"world": w.format(), "constraints": [c.label for c in cs]} for w, cs in eliminated
        ],
        "possible": worlds(possible),
        "possibilities": possibilities(poss),
        "possibilities_satisfied": poss.satisfied,
    }


def property_report(rep: PropertyReport) -> dict[str, Any]:
    return {
        "property": rep.property_id,
        "setting": rep.setting,
        "formula": to_text(rep.formula),
        "expected": rep.expected,
        "value": rep.value,
        "passed": rep.passed,
        "trace": [
            {
                "world": row.world.format(),
                "value": row.value,
                "antecedent": row.antecedent,
                "accessible": worlds(row.accessible),
                "violating": worlds(row.violating),
            }
            for row in rep.trace
        ],
        "counterexamples": [
            {"world": row.world.format(), "violating": worlds(row.violating)}
            for row in rep.counterexamples
        ],
    }


def locality_report(rep: LocalityReport) -> dict[str, Any]:
    witness = None
    if rep.witness is not None:
        witness = [
            {"world": w.format(), "value": v} for w, v in zip(rep.witness, rep.witness_values)
        ]
    return {
        "formula": to_text(rep.formula),
        "region": rep.region,
        "local": rep.local,
        "pairs_checked": rep.pairs_checked,
        "witness": witness,
    }


def her(rep: HerReport) -> dict[str, Any]:
    doc = world_tables(rep.candidates, rep.eliminated, rep.possible, rep.possibilities)
    doc.update(
        {
            "scenario": rep.scenario.name,
            "statement": rep.statement_text,
            "constraints": [constraint(c) for c in rep.scenario.constraints],
            "property_I": property_report(rep.property_i) if rep.property_i else None,
            "property_II": property_report(rep.property_ii) if rep.property_ii else None,
            "locality": [locality_report(l) for l in rep.locality],
            "dependence": worlds(rep.dependence) if rep.dependence else None,
            "agreement_regions": list(rep.agreement_regions),
            "notes": list(rep.notes),
            "summary": list(rep.summary),
            "expectations_met": rep.expectations_met,
        }
    )
    return doc


# text renderings


def text_worlds(doc: dict[str, Any]) -> str:
    c = doc["counts"]
    lines = [f"scenario {doc['scenario']}: {c['candidates']} candidate, "
             f"{c['eliminated']} eliminated, {c['possible']} possible"]
    lines.append("")
    lines.append("candidates:")
    lines += [f"  ({w})" for w in doc["candidates"]]
    lines.append("eliminated:")
    lines += [f"  ({e['world']})  by {', '.join(e['constraints'])}" for e in doc["eliminated"]] or ["  (none)"]
    lines.append("possible:")
    lines += [f"  ({w})" for w in doc["possible"]]
    if doc["possibilities"]:
        lines.append("possibility assertions:")
        for p in doc["possibilities"]:
            status = f"satisfied by ({p['witness']})" if p["satisfied"] else "UNSATISFIED"
            lines.append(f"  {p['label'] or '-'}  ({p['pattern']})  {status}")
    return "\n".join(lines) + "\n"


def text_eval(doc: dict[str, Any]) -> str:
    lines = [
        f"world:   ({doc['world']})",
        f"formula: {doc['formula']}",
        f"value:   {str(doc['value']).lower()}",
    ]
    by_role: dict[str, list[str]] = {}
    for wit in doc["witnesses"]:
        by_role.setdefault(wit["role"], []).append(f"({wit['world']})")
    for role, ws in by_role.items():
        lines.append(f"{role}: {' '.join(ws)}")
    lines += [f"note: {n}" for n in doc["notes"]]
    return "\n".join(lines) + "\n"


def _text_property(p: dict[str, Any]) -> list[str]:
    lines = [
        f"property {p['property']}: {p['formula']}",
        f"  value {str(p['value']).lower()}, expected {str(p['expected']).lower()}: "
        f"{'PASS' if p['passed'] else 'FAIL'}",
    ]
    for row in p["trace"]:
        how = ""
        if row["antecedent"] is False:
            how = "antecedent false"
        elif row["accessible"] or row["antecedent"]:
            acc = " ".join(f"({w})" for w in row["accessible"]) or "(none)"
            how = f"accessible {acc}"
            if row["violating"]:
                how += f"; violating {' '.join(f'({w})' for w in row['violating'])}"
        lines.append(f"  ({row['world']})  {str(row['value']).lower():5}  {how}".rstrip())
    return lines


def text_check(doc: dict[str, Any]) -> str:
    if doc["kind"] == "property":
        return "\n".join(_text_property(doc)) + "\n"
    lines = [
        f"strict: {doc['formula']}",
        f"  value {str(doc['value']).lower()}, expected true: {'PASS' if doc['passed'] else 'FAIL'}",
    ]
    for wit in doc["witnesses"]:
        lines.append(f"  {wit['role']}: ({wit['world']})")
    return "\n".join(lines) + "\n"


def _text_locality(doc: dict[str, Any]) -> list[str]:
    head = f"{doc['formula']} w.r.t. region {doc['region']}: {'LOCAL' if doc['local'] else 'NON-LOCAL'}"
    lines = [head, f"  pairs checked: {doc['pairs_checked']}"]
    if doc["witness"]:
        for wit in doc["witness"]:
            lines.append(f"  ({wit['world']})  {str(wit['value']).lower()}")
    return lines


def text_locality(doc: dict[str, Any]) -> str:
    return "\n".join(_text_locality(doc)) + "\n"


def text_report(doc: dict[str, Any]) -> str:
    parts = [text_worlds(doc).rstrip("\n"), ""]
    parts.append(f"SR: {doc['statement'] or '(not applicable)'}")
    for key in ("property_I", "property_II"):
        if doc[key]:
            parts += _text_property(doc[key])
    for loc in doc["locality"]:
        parts += _text_locality(loc)
    if doc["notes"]:
        parts.append("notes:")
        parts += [f"  {n}" for n in doc["notes"]]
    parts.append("")
    parts.append("summary:")
    parts += [f"  {line}" for line in doc["summary"]]
    parts.append(f"expectations met: {'yes' if doc['expectations_met'] else 'NO'}")
    return "\n".join(parts) + "\n"
