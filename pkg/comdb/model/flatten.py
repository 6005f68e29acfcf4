# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Primitive semantics of a two-level model.

Every item of a concept reachable from the bottom concept is written once per
sub-dimension (concept path from the bottom to the item's concept). Columns are
the paths from the bottom to the primitive concepts.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from comdb.model.schema import DimPath, ItemRef, Schema, format_path

logger = logging.getLogger(__name__)

Cells = Tuple[Optional[ItemRef], ...]


@dataclass(frozen=True)
class Row:
    """Row generated by ``item`` along ``sub_dimension``."""

    item: ItemRef
    sub_dimension: DimPath
    cells: Cells


@dataclass
class PrimitiveTable:
    """Flattened table anchored at ``bottom``.

    Args:
        bottom (str): Bottom concept.
        columns (List[DimPath]): Primitive paths in canonical order.
        rows (List[Row]): Generated rows.
        skipped (List[str]): Concepts not reachable from the bottom.
    """

    bottom: str
    columns: List[DimPath]
    rows: List[Row] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    def rows_for(self, item: ItemRef) -> List[Row]:
        return [row for row in self.rows if row.item == item]

    def bottom_rows(self) -> List[Row]:
        return [row for row in self.rows if row.item.concept == self.bottom]

    def column_names(self) -> List[str]:
        return [format_path(column, self.bottom) for column in self.columns]


def _covers(general: Cells, specific: Cells) -> bool:
    """``specific`` agrees with every non-null cell of ``general``."""
    return all(g is None or g == s for g, s in zip(general, specific))


def _item_rows(schema: Schema, table: PrimitiveTable, item: ItemRef) -> List[Row]:
    concept = item.concept
    rows = []
    for sub in schema.concept_paths(table.bottom, concept):
        cells = []
        for column in table.columns:
            if column[: len(sub)] == sub:
                cells.append(schema.walk(item, column[len(sub) :]))
            else:
                cells.append(None)
        rows.append(Row(item, sub, tuple(cells)))
    return rows


def flatten(schema: Schema, bottom: Optional[str] = None) -> PrimitiveTable:
    """Flatten ``schema`` into its primitive table.

    Concepts that cannot be reached upward from the bottom are skipped and
    reported with a warning.

    Raises:
        NoBottom: If no bottom is given or derivable.
    """
    bottom = schema.require_bottom(bottom)
    table = PrimitiveTable(bottom, schema.concept_paths(bottom))
    reachable = {bottom} | set(schema.super_concepts(bottom))
    for name in sorted(schema.concepts):
        if name not in reachable:
            table.skipped.append(name)
            logger.warning(
                "UnreachableConcept: '%s' is not reachable from bottom '%s'", name, bottom
            )
            continue
        for ref in schema.item_refs(name):
            table.rows.extend(_item_rows(schema, table, ref))
    groups = duplicates(schema)
    if groups:
        logger.warning(
            "%d groups of semantically equal items, e.g. %s",
            len(groups),
            ", ".join(str(ref) for ref in groups[0]),
        )
    logger.debug("flattened %d rows over %d columns", len(table.rows), len(table.columns))
    return table


def signature(schema: Schema, item: ItemRef) -> FrozenSet[Tuple[DimPath, ItemRef]]:
    """Primitive ``(path, value)`` pairs of an item, null walks excluded."""
    schema.get_item(item)
    pairs = set()
    for path in schema.concept_paths(item.concept):
        value = schema.walk(item, path)
        if value is not None:
            pairs.add((path, value))
    return frozenset(pairs)


def item_leq(
    schema: Schema, a: ItemRef, b: ItemRef, bottom: Optional[str] = None
) -> bool:
    """Whether item ``a`` is at least as specific as item ``b``.

    Items are compared by their rows in the bottom-anchored column space: some
    row of ``a`` must agree with the non-null cells of every row of ``b``.
    """
    schema.get_item(a)
    schema.get_item(b)
    if a == b:
        return True
    bottom = schema.require_bottom(bottom)
    table = PrimitiveTable(bottom, schema.concept_paths(bottom))
    rows_a = _item_rows(schema, table, a)
    rows_b = _item_rows(schema, table, b)
    return any(
        all(_covers(rb.cells, ra.cells) for rb in rows_b) for ra in rows_a
    )


def coverage(
    schema: Schema,
    item: ItemRef,
    bottom: Optional[str] = None,
    table: Optional[PrimitiveTable] = None,
) -> List[Row]:
    """Bottom rows agreeing with the non-null cells of one of the item's rows."""
    schema.get_item(item)
    if table is None:
        table = flatten(schema, bottom)
    own = [row for row in table.rows if row.item == item]
    if not own:
        own = _item_rows(schema, table, item)
    return [
        row
        for row in table.bottom_rows()
        if any(_covers(general.cells, row.cells) for general in own)
    ]


def duplicates(schema: Schema) -> List[List[ItemRef]]:
    """Groups of entity items of one concept with identical slot vectors."""
    groups = []
    for name, concept in sorted(schema.concepts.items()):
        if concept.is_value or not concept.dimensions:
            continue
        seen: Dict[tuple, List[ItemRef]] = {}
        for item in schema.items(name):
            key = tuple(item.slots.get(dim) for dim in concept.dimensions)
            seen.setdefault(key, []).append(item.ref)
        groups.extend(refs for refs in seen.values() if len(refs) > 1)
    return groups


def render_tsv(schema: Schema, table: PrimitiveTable) -> str:
    """Render the table as TSV: dotted column header, null as an empty field."""

    def cell(ref: Optional[ItemRef]) -> str:
        if ref is None:
            return ""
        value = schema.value_of(ref)
        return str(value) if value is not None else ref.id

    lines = ["\t".join(table.column_names())]
    for row in table.rows:
        lines.append("\t".join(cell(ref) for ref in row.cells))
    return "\n".join(lines) + "\n"
