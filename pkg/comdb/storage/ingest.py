# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""CSV snowflake ingest.

Each CSV file acts as the master table of one concept. An ingest map (YAML)
names, per file, the target concept, the key column, the columns holding
primitive values and the foreign-key columns that reference other concepts by
key. Tables load in map-file order, except that a table always follows the tables
of its super-concepts, so a foreign key refers to an item that is already stored.

Classes:

    TableMap
    IngestMap
    TableReport
    IngestReport

"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import networkx as nx
import pandas as pd
import pydantic
import yaml

from comdb import errors
from comdb.model.schema import ItemRef, Schema

logger = logging.getLogger(__name__)


class TableMap(pydantic.BaseModel):
    """Mapping of one CSV file onto a concept.

    ``columns`` maps CSV columns to dimensions with value domains, ``references``
    maps foreign-key columns to dimensions with entity domains. Value concepts
    take their literals from the ``value`` column.
    """

    file: str
    concept: str
    key: Optional[str] = None
    value: Optional[str] = None
    columns: Dict[str, str] = pydantic.Field(default_factory=dict)
    references: Dict[str, str] = pydantic.Field(default_factory=dict)


class IngestMap(pydantic.BaseModel):
    tables: List[TableMap]


@dataclass
class TableReport:
    concept: str
    file: str
    created: int = 0
    unchanged: int = 0
    rejected: int = 0
    errors: List[str] = field(default_factory=list)


@dataclass
class IngestReport:
    tables: List[TableReport] = field(default_factory=list)

    @property
    def created(self) -> int:
        return sum(t.created for t in self.tables)

    @property
    def rejected(self) -> int:
        return sum(t.rejected for t in self.tables)

    @property
    def unchanged(self) -> int:
        return sum(t.unchanged for t in self.tables)


def load_ingest_map(path: Union[str, Path]) -> IngestMap:
    """Read and validate a YAML ingest map.

    Raises:
        StorageError: The file cannot be read.
        FormatError: Invalid YAML or a document that does not match the map model.
    """
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as handle:
            payload = yaml.safe_load(handle)
        return IngestMap.model_validate(payload)
    except OSError as exc:
        raise errors.StorageError(f"cannot read file: {exc.strerror}", str(path)) from exc
    except yaml.YAMLError as exc:
        raise errors.FormatError(f"invalid YAML: {exc}", str(path)) from exc
    except pydantic.ValidationError as exc:
        raise errors.FormatError(f"invalid ingest map: {exc}", str(path)) from exc


def validate_map(schema: Schema, ingest_map: IngestMap):
    """Check every mapped concept and dimension against the schema.

    Raises:
        UnknownConcept, UnknownDimension, DomainViolation.
    """
    for table in ingest_map.tables:
        concept = schema.concept(table.concept)
        if concept.is_value:
            if not table.value:
                raise errors.DomainViolation(
                    f"{table.file}: value concept '{table.concept}' needs a value column"
                )
            continue
        if not table.key:
            raise errors.DomainViolation(
                f"{table.file}: entity concept '{table.concept}' needs a key column"
            )
        for column, dim in table.columns.items():
            domain = concept.dimension(dim).domain
            if not schema.concept(domain).is_value:
                raise errors.DomainViolation(
                    f"{table.file}: column '{column}' maps {table.concept}.{dim}, "
                    f"whose domain '{domain}' is not a value concept; list it under references"
                )
        for column, dim in table.references.items():
            domain = concept.dimension(dim).domain
            if schema.concept(domain).is_value:
                raise errors.DomainViolation(
                    f"{table.file}: reference column '{column}' maps {table.concept}.{dim}, "
                    f"whose domain '{domain}' is a value concept"
                )


def _read_csv(path: Path, table: TableMap) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise errors.FormatError(f"cannot read CSV: {exc}", str(path)) from exc
    needed = [table.key, table.value, *table.columns, *table.references]
    missing = [column for column in needed if column and column not in frame.columns]
    if missing:
        raise errors.FormatError(f"missing column(s): {', '.join(missing)}", str(path))
    return frame


def _row_slots(
    schema: Schema, table: TableMap, row: Dict[str, str]
) -> Dict[str, Optional[Any]]:
    """Validated slot values of one row: literals for value dims, refs for references."""
    concept = schema.concept(table.concept)
    slots: Dict[str, Optional[Any]] = {}
    for column, dim in table.columns.items():
        raw = row[column].strip()
        domain = schema.concept(concept.dimension(dim).domain)
        slots[dim] = domain.value_type.coerce(raw) if raw else None
    for column, dim in table.references.items():
        raw = row[column].strip()
        if not raw:
            slots[dim] = None
            continue
        ref = ItemRef(concept.dimension(dim).domain, raw)
        if not schema.has_item(ref):
            raise errors.UnknownReferent(f"{column}={raw!r} references missing item '{ref}'")
        slots[dim] = ref
    return slots


def _same_item(schema: Schema, table: TableMap, item_id: str, slots: Dict[str, Any]) -> bool:
    item = schema.get_item(ItemRef(table.concept, item_id))
    concept = schema.concept(table.concept)
    for dim, value in slots.items():
        current = item.slots.get(dim)
        if value is None or current is None:
            if value is not current:
                return False
        elif isinstance(value, ItemRef):
            if value.id != current:
                return False
        elif schema.value_of(ItemRef(concept.dimension(dim).domain, current)) != value:
            return False
    return True


def _ingest_values(schema: Schema, table: TableMap, frame: pd.DataFrame, report: TableReport):
    value_type = schema.concept(table.concept).value_type
    for line, raw in enumerate(frame[table.value], start=2):
        raw = raw.strip()
        try:
            literal = value_type.coerce(raw)
            if schema.find_value(table.concept, literal) is not None:
                report.unchanged += 1
            else:
                schema.add_value(table.concept, literal)
                report.created += 1
        except errors.ComdbError as exc:
            _reject(report, line, exc)


def _ingest_entities(
    schema: Schema, table: TableMap, frame: pd.DataFrame, report: TableReport
):
    seen = set()
    for line, row in enumerate(frame.to_dict(orient="records"), start=2):
        item_id = row[table.key].strip()
        try:
            if not item_id:
                raise errors.DomainViolation(f"empty key in column '{table.key}'")
            if item_id in seen:
                raise errors.DuplicateItem(f"key '{item_id}' repeats in the file")
            seen.add(item_id)
            slots = _row_slots(schema, table, row)
            if schema.has_item(ItemRef(table.concept, item_id)):
                if not _same_item(schema, table, item_id, slots):
                    raise errors.DuplicateItem(
                        f"item '{table.concept}:{item_id}' exists with other values"
                    )
                report.unchanged += 1
                continue
            _add_row(schema, table, item_id, slots)
            report.created += 1
        except errors.ComdbError as exc:
            _reject(report, line, exc)


def _add_row(schema: Schema, table: TableMap, item_id: str, slots: Dict[str, Any]):
    """Store one entity row; value items created for it are removed again if it is rejected."""
    concept = schema.concept(table.concept)
    created: List[ItemRef] = []
    bound: Dict[str, Optional[ItemRef]] = {}
    for dim, value in slots.items():
        if value is None or isinstance(value, ItemRef):
            bound[dim] = value
            continue
        domain = concept.dimension(dim).domain
        found = schema.find_value(domain, value)
        if found is None:
            found = schema.add_value(domain, value)
            created.append(found)
        bound[dim] = found
    try:
        schema.add_item(table.concept, item_id, bound)
    except errors.ComdbError:
        for ref in created:
            schema.delete_item(ref)
        raise


def _reject(report: TableReport, line: int, exc: errors.ComdbError):
    report.rejected += 1
    message = f"{report.file}:{line}: {exc.code}: {exc.message}"
    report.errors.append(message)
    logger.warning("rejected row %s", message)


def load_order(schema: Schema, ingest_map: IngestMap) -> List[TableMap]:
    """Tables in map-file order, each moved after the tables of its super-concepts.

    Ties keep the map order, so the order is deterministic for a given map.
    """
    tables = ingest_map.tables
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(tables)))
    supers = {table.concept: set(schema.super_concepts(table.concept)) for table in tables}
    for position, table in enumerate(tables):
        for other, candidate in enumerate(tables):
            if candidate.concept in supers[table.concept]:
                graph.add_edge(other, position)
    return [tables[position] for position in nx.lexicographical_topological_sort(graph)]


def ingest_csv(
    schema: Schema,
    ingest_map: IngestMap,
    base_dir: Union[str, Path, None] = None,
) -> IngestReport:
    """Load the mapped CSV files into ``schema``.

    Row-level failures (bad literals, unknown foreign keys, repeated keys) reject
    the row and are collected in the report.

    Args:
        schema (Schema): Target model.
        ingest_map (IngestMap): Validated map.
        base_dir (Union[str, Path, None]): Directory the map's file names are relative to.

    Raises:
        UnknownConcept, UnknownDimension, DomainViolation: Invalid map.
        FormatError: Unreadable CSV or missing columns.
    """
    validate_map(schema, ingest_map)
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    report = IngestReport()
    for table in load_order(schema, ingest_map):
        frame = _read_csv(base / table.file, table)
        table_report = TableReport(table.concept, table.file)
        if schema.concept(table.concept).is_value:
            _ingest_values(schema, table, frame, table_report)
        else:
            _ingest_entities(schema, table, frame, table_report)
        report.tables.append(table_report)
        logger.info(
            "ingested %s into %s: %d created, %d unchanged, %d rejected",
            table.file,
            table.concept,
            table_report.created,
            table_report.unchanged,
            table_report.rejected,
        )
    return report


def ingest_files(schema: Schema, map_path: Union[str, Path]) -> IngestReport:
    """Ingest using a YAML map file; CSV paths are relative to the map."""
    map_path = Path(map_path)
    return ingest_csv(schema, load_ingest_map(map_path), map_path.parent)
