# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""COQL: the concept-oriented query language."""

from typing import Optional

from comdb.coql.checker import Checker, check
from comdb.coql.cube import CubeDimension, Measure, cube
from comdb.coql.evaluator import Evaluator, ResultTable, evaluate
from comdb.coql.parser import parse, parse_definition, parse_expression
from comdb.coql.printer import format_definition, format_expr, format_query
from comdb.coql.registry import register_derived
from comdb.model.propagate import ConstraintSet
from comdb.model.schema import Schema


def run_query(
    schema: Schema, text: str, constraints: Optional[ConstraintSet] = None
) -> ResultTable:
    """Parse, check and evaluate ``text`` against ``schema``."""
    return evaluate(check(parse(text), schema), schema, constraints)


__all__ = [
    "Checker",
    "CubeDimension",
    "Evaluator",
    "Measure",
    "ResultTable",
    "check",
    "cube",
    "evaluate",
    "format_definition",
    "format_expr",
    "format_query",
    "parse",
    "parse_definition",
    "parse_expression",
    "register_derived",
    "run_query",
]
