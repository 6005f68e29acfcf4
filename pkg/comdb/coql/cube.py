# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""OLAP cubes over a fact concept.

A cube picks a level concept on each dimension path of the fact concept. Its
cells are the Cartesian product of the (filtered) level items; each cell groups
the fact items that de-project from all of its coordinates, and every measure is
aggregated over that group. Re-running with a finer level on the same path
drills down, a coarser one rolls up.

Classes:

    CubeDimension
    Measure

"""

import itertools
import logging
from dataclasses import dataclass
from decimal import Decimal
from typing import Any, List, Optional, Sequence, Tuple, Union

from comdb import errors
from comdb.coql.ast import AggFunc
from comdb.coql.checker import NUMERIC_AGGREGATES, Checker, numeric_members, unique_columns
from comdb.coql.evaluator import Evaluator, ResultTable, truthy
from comdb.coql.parser import parse_expression
from comdb.coql.types import QType
from comdb.model.navigate import Collection, deproject_path
from comdb.model.schema import DimPath, ItemRef, Schema, parse_path

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CubeDimension:
    """Dimension path from the fact concept, the level concept on it and a level filter."""

    path: Union[str, Sequence[str]]
    level: str
    filter: Optional[str] = None


@dataclass(frozen=True)
class Measure:
    """Aggregated column; ``expr`` is evaluated per fact item (omit it to count facts)."""

    name: str
    func: Union[AggFunc, str]
    expr: Optional[str] = None

    @property
    def aggregate(self) -> AggFunc:
        if isinstance(self.func, AggFunc):
            return self.func
        try:
            return AggFunc(self.func.upper())
        except ValueError as exc:
            raise errors.TypeMismatch(f"unknown aggregate '{self.func}'") from exc


def level_path(schema: Schema, fact: str, path: Any, level: str) -> DimPath:
    """Shortest prefix of ``path`` leading from ``fact`` to ``level``.

    Raises:
        PathMismatch: No prefix of the path reaches the level concept.
    """
    path = parse_path(path)
    for depth in range(len(path) + 1):
        try:
            reached = schema.path_target(fact, path[:depth])
        except errors.UnknownDimension as exc:
            raise errors.PathMismatch(
                f"'{'.'.join(path)}' is not a dimension path of '{fact}'"
            ) from exc
        if reached == level:
            return path[:depth]
    raise errors.PathMismatch(
        f"level '{level}' is not on path '{'.'.join(path)}' from '{fact}'"
    )


class _Scoped:
    """An expression checked and evaluated with ``this`` bound to one item."""

    def __init__(self, schema: Schema, evaluator: Evaluator, concept: str, text: str):
        self.text = text
        self.evaluator = evaluator
        self.resolved, self.qtype = Checker(schema).check_expression(
            parse_expression(text), {"this": QType.item(concept)}, "this"
        )

    def __call__(self, item: ItemRef) -> Any:
        return self.evaluator.eval(self.resolved, {"this": item})


def _aggregate(func: AggFunc, values: List[Any], group_size: int, counted: bool) -> Any:
    if func in (AggFunc.COUNT, AggFunc.SIZE):
        return len(values) if counted else group_size
    if func is AggFunc.SUM:
        return sum(values, 0)
    if not values:
        return None
    return Decimal(sum(values, 0)) / Decimal(len(values))


def cube(
    schema: Schema,
    fact: str,
    dims: Sequence[Union[CubeDimension, Tuple]],
    measures: Sequence[Union[Measure, Tuple]],
    fact_filter: Optional[str] = None,
) -> ResultTable:
    """Aggregate ``measures`` over every cell of the level product.

    Args:
        schema (Schema): Model.
        fact (str): Fact concept whose items are grouped.
        dims (Sequence[CubeDimension]): Dimension paths with their level concepts.
        measures (Sequence[Measure]): Aggregated columns.
        fact_filter (Optional[str]): Condition on fact items.

    Returns:
        ResultTable: One column per level then one per measure; one row per cell,
        empty groups included (COUNT and SUM 0, AVERAGE null).

    Raises:
        PathMismatch: A level is not on its dimension path.
        TypeMismatch: A SUM or AVERAGE measure over values that are not numbers.
    """
    # pylint: disable=too-many-locals
    snapshot = schema if schema.frozen else schema.snapshot()
    snapshot.concept(fact)
    evaluator = Evaluator(snapshot)
    dims = [d if isinstance(d, CubeDimension) else CubeDimension(*d) for d in dims]
    measures = [m if isinstance(m, Measure) else Measure(*m) for m in measures]

    paths = [level_path(snapshot, fact, d.path, d.level) for d in dims]
    levels = []
    for dim in dims:
        members = snapshot.item_refs(dim.level)
        if dim.filter:
            test = _Scoped(snapshot, evaluator, dim.level, dim.filter)
            members = [m for m in members if truthy(test(m))]
        levels.append(members)

    facts = set(snapshot.item_refs(fact))
    if fact_filter:
        test = _Scoped(snapshot, evaluator, fact, fact_filter)
        facts = {f for f in facts if truthy(test(f))}
    order = {ref: position for position, ref in enumerate(snapshot.item_refs(fact))}
    scoped = [
        _Scoped(snapshot, evaluator, fact, m.expr) if m.expr else None for m in measures
    ]
    for measure, expr in zip(measures, scoped):
        if measure.aggregate in NUMERIC_AGGREGATES:
            if expr is None or not numeric_members(snapshot, expr.qtype):
                raise errors.TypeMismatch(
                    f"measure '{measure.name}': {measure.aggregate.value} needs a number"
                )

    groups_by_level = [
        {
            member: set(
                deproject_path(
                    snapshot, Collection(dim.level, [member]), fact, path, evaluator.index
                ).members
            )
            for member in members
        }
        for dim, path, members in zip(dims, paths, levels)
    ]

    columns = unique_columns([d.level for d in dims] + [m.name for m in measures])
    table = ResultTable(columns)
    for cell in itertools.product(*levels):
        group = set(facts)
        for position, member in enumerate(cell):
            group &= groups_by_level[position][member]
        ordered = sorted(group, key=order.__getitem__)
        row: List[Any] = list(cell)
        for measure, expr in zip(measures, scoped):
            values = []
            if expr is not None:
                values = [evaluator.deref(expr(f)) for f in ordered]
                values = [v for v in values if v is not None]
            row.append(_aggregate(measure.aggregate, values, len(ordered), expr is not None))
        table.rows.append(tuple(row))
    logger.debug(
        "cube over %s: %d cell(s), %d fact item(s)", fact, len(table), len(facts)
    )
    return table
