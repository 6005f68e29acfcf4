# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Schema text format.

::

    # comment
    concept Ages value int { }
    concept Employees {
      name : Names ;
      age : Ages ;
    }
    bottom Employees ;

Domains may be referenced before their concept is declared.
"""

import logging
from typing import Dict, List, Optional, Tuple

from comdb import errors
from comdb.model.schema import Schema, ValueType
from comdb.storage.tokens import TokenStream, word_or_quoted

logger = logging.getLogger(__name__)


def _concept_entry(stream: TokenStream) -> Tuple[str, List[Tuple[str, str]], Optional[str]]:
    name = stream.name()
    value_type = None
    if stream.keyword() == "value":
        stream.advance()
        raw = stream.name()
        try:
            value_type = ValueType(raw).value
        except ValueError as exc:
            raise errors.FormatError(
                f"unknown value type '{raw}'", stream.location()
            ) from exc
    stream.expect("{")
    dims: List[Tuple[str, str]] = []
    while not stream.match("}"):
        label = stream.name()
        stream.expect(":")
        domain = stream.name()
        stream.match(";")
        dims.append((label, domain))
    return name, dims, value_type


def loads_schema(text: str, source: str = "<string>", schema: Optional[Schema] = None) -> Schema:
    """Parse schema text into ``schema`` (a new one by default).

    Raises:
        FormatError: Malformed text, with ``file:line``.
        DuplicateConcept, UnknownDomain, CycleDetected: With ``file:line``.
    """
    schema = schema if schema is not None else Schema()
    stream = TokenStream(text, source)
    definitions = []
    lines: Dict[str, str] = {}
    bottom: Optional[Tuple[str, str]] = None
    while not stream.at_end():
        location = stream.location()
        keyword = stream.keyword()
        if keyword == "concept":
            stream.advance()
            name, dims, value_type = _concept_entry(stream)
            if name in lines or schema.has_concept(name):
                raise errors.DuplicateConcept(f"concept '{name}' already defined", location)
            lines[name] = location
            definitions.append((name, dims, value_type))
        elif keyword == "bottom":
            stream.advance()
            bottom = (stream.name(), location)
            stream.match(";")
        else:
            raise stream.error("expected 'concept' or 'bottom'")

    for name, dims, _ in definitions:
        for label, domain in dims:
            if domain not in lines and not schema.has_concept(domain):
                raise errors.UnknownDomain(
                    f"domain '{domain}' of {name}.{label} is not defined", lines[name]
                )
    try:
        schema.define_concepts(definitions)
    except errors.ComdbError as exc:
        exc.location = exc.location or source
        raise
    if bottom is not None:
        name, location = bottom
        if not schema.has_concept(name):
            raise errors.UnknownConcept(f"bottom concept '{name}' is not defined", location)
        schema.designate_bottom(name)
    logger.info("loaded %d concept(s) from %s", len(definitions), source)
    return schema


def dumps_schema(schema: Schema) -> str:
    """Canonical text: concepts by name, dimensions in declaration order."""
    lines = []
    for name in sorted(schema.concepts):
        concept = schema.concept(name)
        head = f"concept {word_or_quoted(name)}"
        if concept.is_value:
            head += f" value {concept.value_type.value}"
        if not concept.dimensions:
            lines.append(f"{head} {{ }}")
            continue
        lines.append(f"{head} {{")
        for label, decl in concept.dimensions.items():
            lines.append(f"  {word_or_quoted(label)} : {word_or_quoted(decl.domain)} ;")
        lines.append("}")
    if schema.designated_bottom:
        lines.append(f"bottom {word_or_quoted(schema.designated_bottom)} ;")
    return "\n".join(lines) + "\n"
