# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""One-level ordered set text format.

::

    top t ;
    bottom b ;
    element e1 { e4 : e4 ; e5 : e5 ; }

A binding to ``null`` is kept as an absent super-element.
"""

import logging
from typing import Dict, List, Optional, Tuple

import networkx as nx

from comdb import errors
from comdb.model.poset import DEFAULT_BOTTOM, DEFAULT_TOP, Combination, OrderedSet
from comdb.storage.tokens import TokenStream, word_or_quoted

logger = logging.getLogger(__name__)


def loads_poset(text: str, source: str = "<string>") -> OrderedSet:
    """Parse an ordered set; elements may reference supers declared later.

    Raises:
        FormatError, DuplicateId, UnknownSuper, CycleDetected: With ``file:line``.
    """
    stream = TokenStream(text, source)
    bounds = {"top": DEFAULT_TOP, "bottom": DEFAULT_BOTTOM}
    entries: Dict[str, Tuple[List[Tuple[str, Optional[str]]], str]] = {}
    while not stream.at_end():
        location = stream.location()
        keyword = stream.keyword()
        if keyword in bounds:
            stream.advance()
            bounds[keyword] = stream.name()
            stream.match(";")
            continue
        stream.expect_keyword("element")
        element = stream.name()
        if element in entries:
            raise errors.DuplicateId(f"element '{element}' already exists", location)
        stream.expect("{")
        pairs: List[Tuple[str, Optional[str]]] = []
        while not stream.match("}"):
            label = stream.name()
            stream.expect(":")
            value = stream.literal()
            stream.match(";")
            pairs.append((label, None if value is None else str(value)))
        entries[element] = (pairs, location)

    graph = nx.DiGraph()
    graph.add_nodes_from(entries)
    for element, (pairs, location) in entries.items():
        for _, target in pairs:
            if target is None:
                continue
            if target not in entries:
                raise errors.UnknownSuper(f"super-element '{target}' does not exist", location)
            graph.add_edge(target, element)
    try:
        order = list(nx.lexicographical_topological_sort(graph))
    except nx.NetworkXUnfeasible as exc:
        raise errors.CycleDetected("element definitions form a cycle", source) from exc

    ordered = OrderedSet(bounds["top"], bounds["bottom"])
    for element in order:
        pairs, location = entries[element]
        try:
            ordered.add_element(element, Combination.of(pairs))
        except errors.ComdbError as exc:
            exc.location = location
            raise
    logger.info("loaded %d element(s) from %s", len(order), source)
    return ordered


def dumps_poset(ordered: OrderedSet) -> str:
    lines = [f"top {word_or_quoted(ordered.top)} ;", f"bottom {word_or_quoted(ordered.bottom)} ;"]
    for element in sorted(ordered.elements):
        bindings = " ".join(
            f"{word_or_quoted(label)} : "
            f"{'null' if value is None else word_or_quoted(str(value))} ;"
            for label, value in ordered.definition(element)
        )
        lines.append(f"element {word_or_quoted(element)} {{ {bindings} }}".replace("{  }", "{ }"))
    return "\n".join(lines) + "\n"
