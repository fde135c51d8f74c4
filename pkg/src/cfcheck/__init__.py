"""Counterfactual model checking over finite possible-worlds scenarios."""

from .analysis import (
    SR_TEXT,
    check_property_I,
    check_property_II,
    her_report,
    locality_analysis,
)
from .evaluator import Verdict, accessible, eval_at, strict_implies
from .formula import FormulaError, parse, to_text
from .scenario import Scenario, ScenarioError, World, WorldPattern, normalize_constraints, validate_scenario
from .scenario_file import load_bundled, load_scenario, parse_scenario, parse_world
from .worlds import check_possibilities, enumerate_candidates, filter_possible, possible_worlds

__version__ = "0.1.0"
