# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""Model resource normalizers for shell output."""

from typing import List, Optional

from comdb.model.propagate import Possibility
from comdb.model.schema import Item, ItemRef, Schema
from comdb.storage.ingest import IngestReport


def _slot_text(schema: Schema, ref: Optional[ItemRef]) -> Optional[str]:
    if ref is None:
        return None
    concept = schema.concept(ref.concept)
    if concept.is_value:
        return concept.value_type.render(schema.value_of(ref))
    return ref.id


def normalize_concept(schema: Schema, name: str) -> dict:
    """Normalize a concept definition."""
    concept = schema.concept(name)
    return {
        "name": concept.name,
        "kind": concept.kind.value,
        "value_type": concept.value_type.value if concept.value_type else None,
        "dimensions": {dim: decl.domain for dim, decl in concept.dimensions.items()},
        "items": schema.count_items(name),
    }


def normalize_item(schema: Schema, item: Item) -> dict:
    """Normalize a stored item; slots show literals for value domains."""
    concept = schema.concept(item.concept)
    value = concept.value_type.render(item.value) if concept.is_value else None
    return {
        "concept": item.concept,
        "id": item.id,
        "value": value,
        "slots": {
            dim: _slot_text(schema, schema.get_slot(item.ref, dim))
            for dim in concept.dimensions
        },
    }


def normalize_metrics(schema: Schema, name: str) -> dict:
    """Normalize the order metrics of a concept.

    Primitive dimensionality counts the paths up to primitive concepts, primitive
    cardinality the paths down from the bottom concept (None without a bottom).
    """
    concept = schema.concept(name)
    bottom = schema.bottom
    return {
        "concept": name,
        "dimensionality": len(concept.dimensions),
        "cardinality": len(schema.referencing_dimensions(name)),
        "primitive_dimensionality": len(schema.concept_paths(name)),
        "primitive_cardinality": (
            len(schema.concept_paths(bottom, name)) if bottom is not None else None
        ),
        "items": schema.count_items(name),
    }


def normalize_possibility(possibility: Possibility) -> dict:
    return {
        "concept": possibility.concept,
        "possible": sorted(possibility.possible()),
        "impossible": sorted(possibility.impossible()),
    }


def normalize_ingest_report(report: IngestReport) -> List[dict]:
    """Normalize an ingest report, one record per table."""
    return [
        {
            "file": table.file,
            "concept": table.concept,
            "created": table.created,
            "unchanged": table.unchanged,
            "rejected": table.rejected,
        }
        for table in report.tables
    ]
