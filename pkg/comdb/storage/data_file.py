# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Data text format.

::

    value Ages 30
    value Names 'Alice'
    item Employees e1 { name = 'Alice', age = 30 }

Slots of value domains hold the literal, slots of entity domains the item id;
``null`` leaves a slot empty. Entries may appear in any order: values load
first, then items from super-concepts down to sub-concepts.
"""

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Dict, List, Optional

from comdb import errors
from comdb.model.schema import ItemRef, Schema, ValueType
from comdb.storage.tokens import TokenStream, quote, word_or_quoted

logger = logging.getLogger(__name__)


@dataclass
class _Entry:
    kind: str
    concept: str
    location: str
    key: Any = None
    slots: Dict[str, Any] = field(default_factory=dict)


def _item_entry(stream: TokenStream, location: str) -> _Entry:
    concept = stream.name()
    entry = _Entry("item", concept, location, stream.name())
    stream.expect("{")
    if not stream.match("}"):
        while True:
            dim = stream.name()
            stream.expect("=")
            if dim in entry.slots:
                raise errors.DuplicateLabel(f"slot '{dim}' bound twice", stream.location())
            entry.slots[dim] = stream.literal()
            if stream.match("}"):
                break
            stream.expect(",")
    return entry


def _parse(text: str, source: str) -> List[_Entry]:
    stream = TokenStream(text, source)
    entries = []
    while not stream.at_end():
        location = stream.location()
        keyword = stream.keyword()
        if keyword == "value":
            stream.advance()
            concept = stream.name()
            literal = stream.literal()
            if literal is None:
                raise errors.FormatError("a value item cannot be null", location)
            entries.append(_Entry("value", concept, location, literal))
        elif keyword == "item":
            stream.advance()
            entries.append(_item_entry(stream, location))
        else:
            raise stream.error("expected 'value' or 'item'")
        stream.match(";")
    return entries


def _load_entry(schema: Schema, entry: _Entry):
    if entry.kind == "value":
        schema.add_value(entry.concept, entry.key)
        return
    concept = schema.concept(entry.concept)
    slots: Dict[str, Optional[ItemRef]] = {}
    for dim, raw in entry.slots.items():
        domain = concept.dimension(dim).domain
        if raw is None:
            slots[dim] = None
        elif schema.concept(domain).is_value:
            slots[dim] = schema.ensure_value(domain, raw)
        else:
            slots[dim] = ItemRef(domain, str(raw))
    schema.add_item(entry.concept, entry.key, slots)


def loads_data(schema: Schema, text: str, source: str = "<string>") -> Schema:
    """Add the items in ``text`` to ``schema``.

    Raises:
        FormatError, UnknownConcept, UnknownDimension, UnknownReferent,
        DuplicateItem, DomainViolation: With ``file:line``.
    """
    entries = _parse(text, source)
    for entry in entries:
        if not schema.has_concept(entry.concept):
            raise errors.UnknownConcept(
                f"concept '{entry.concept}' is not defined", entry.location
            )
    rank = {name: position for position, name in enumerate(reversed(schema.topological_order()))}
    ordered = sorted(
        entries, key=lambda e: (e.kind != "value", rank.get(e.concept, 0))
    )
    for entry in ordered:
        try:
            _load_entry(schema, entry)
        except errors.ComdbError as exc:
            exc.location = entry.location
            raise
    logger.info("loaded %d item(s) from %s", len(entries), source)
    return schema


def format_literal(value_type: ValueType, value: Any) -> str:
    if value_type in (ValueType.INT, ValueType.DECIMAL):
        return format(value, "f") if isinstance(value, Decimal) else str(value)
    return quote(str(value))


def dumps_data(schema: Schema) -> str:
    """Canonical text: entries by concept name, then item id."""
    lines = []
    for name in sorted(schema.concepts):
        concept = schema.concept(name)
        for item in sorted(schema.items(name), key=lambda i: i.id):
            if concept.is_value:
                lines.append(
                    f"value {word_or_quoted(name)} "
                    f"{format_literal(concept.value_type, item.value)}"
                )
                continue
            slots = []
            for dim, decl in concept.dimensions.items():
                target = item.slots.get(dim)
                if target is None:
                    text = "null"
                else:
                    domain = schema.concept(decl.domain)
                    if domain.is_value:
                        value = schema.value_of(ItemRef(decl.domain, target))
                        text = format_literal(domain.value_type, value)
                    else:
                        text = word_or_quoted(target)
                slots.append(f"{word_or_quoted(dim)} = {text}")
            lines.append(
                f"item {word_or_quoted(name)} {word_or_quoted(item.id)} "
                f"{{ {', '.join(slots)} }}"
                if slots
                else f"item {word_or_quoted(name)} {word_or_quoted(item.id)} {{ }}"
            )
    return "\n".join(lines) + ("\n" if lines else "")
