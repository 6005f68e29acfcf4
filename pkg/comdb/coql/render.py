# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Text renderings of query results: aligned table, TSV and JSON lines."""

import json
from decimal import Decimal
from enum import Enum
from typing import Any, List

from tabulate import tabulate

from comdb.coql.evaluator import ResultTable
from comdb.model.navigate import Collection
from comdb.model.schema import ItemRef, Schema


class OutputFormat(Enum):
    TABLE = "table"
    TSV = "tsv"
    JSON = "json"


def plain_value(schema: Schema, value: Any) -> Any:
    """JSON-friendly value: items as identifiers, value items as their literal."""
    if isinstance(value, ItemRef):
        if schema.has_concept(value.concept) and schema.concept(value.concept).is_value:
            return plain_value(schema, schema.value_of(value))
        return value.id
    if isinstance(value, Decimal):
        return format(value, "f")
    if isinstance(value, Collection):
        return [plain_value(schema, member) for member in value]
    if isinstance(value, (tuple, list)):
        return [plain_value(schema, member) for member in value]
    if isinstance(value, ResultTable):
        return [[plain_value(schema, v) for v in row] for row in value.rows]
    return value


def text_value(schema: Schema, value: Any) -> str:
    """Cell text; null is the empty string."""
    plain = plain_value(schema, value)
    if plain is None:
        return ""
    if isinstance(plain, bool):
        return "true" if plain else "false"
    if isinstance(plain, list):
        return "{" + ", ".join(text_value(schema, v) for v in plain) + "}"
    return str(plain)


def _text_rows(schema: Schema, table: ResultTable) -> List[List[str]]:
    return [[text_value(schema, value) for value in row] for row in table.rows]


def render_table(schema: Schema, table: ResultTable) -> str:
    return tabulate(_text_rows(schema, table), headers=list(table.columns), disable_numparse=True)


def render_tsv(schema: Schema, table: ResultTable) -> str:
    lines = ["\t".join(table.columns)]
    lines.extend("\t".join(row) for row in _text_rows(schema, table))
    return "\n".join(lines)


def render_json(schema: Schema, table: ResultTable) -> str:
    return "\n".join(
        json.dumps(
            {column: plain_value(schema, value) for column, value in zip(table.columns, row)}
        )
        for row in table.rows
    )


def render(schema: Schema, table: ResultTable, output: OutputFormat = OutputFormat.TABLE) -> str:
    if output is OutputFormat.TSV:
        return render_tsv(schema, table)
    if output is OutputFormat.JSON:
        return render_json(schema, table)
    return render_table(schema, table)
