# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Two-level concept-oriented model.

A schema physically holds concepts and each concept holds items. Concepts are
ordered by their dimensions (an edge from the concept to the dimension's domain)
and item slots must reference items of the declared domain.

Classes:

    ValueType
    ItemRef
    DimensionDecl
    Concept
    Item
    Violation
    ValidationReport
    Schema

"""

import copy
import logging
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from enum import Enum
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx

from comdb import errors

logger = logging.getLogger(__name__)

DimPath = Tuple[str, ...]

TOP = "@top"


def parse_path(path: Union[str, Sequence[str], None]) -> DimPath:
    """Normalize ``"a.b"``, ``["a", "b"]`` or ``None`` into a path tuple."""
    if path is None:
        return ()
    if isinstance(path, str):
        return tuple(part for part in path.split(".") if part)
    return tuple(path)


def format_path(path: DimPath, prefix: Optional[str] = None) -> str:
    parts = list(path)
    if prefix:
        parts.insert(0, prefix)
    return ".".join(parts)


class ValueType(Enum):
    """Literal type of a value concept."""

    INT = "int"
    DECIMAL = "decimal"
    STRING = "string"
    DATE = "date"

    def coerce(self, raw: Any) -> Any:
        """Convert ``raw`` into this type's literal.

        Raises:
            DomainViolation: If ``raw`` cannot be converted.
        """
        try:
            if self is ValueType.INT:
                if isinstance(raw, bool):
                    raise ValueError(raw)
                if isinstance(raw, Decimal) and raw != raw.to_integral_value():
                    raise ValueError(raw)
                return int(raw)
            if self is ValueType.DECIMAL:
                if isinstance(raw, float):
                    raw = repr(raw)
                return Decimal(str(raw))
        except (ValueError, TypeError, InvalidOperation) as exc:
            raise errors.DomainViolation(
                f"'{raw}' is not a valid {self.value} literal"
            ) from exc
        return str(raw)

    @property
    def numeric(self) -> bool:
        return self in (ValueType.INT, ValueType.DECIMAL)

    def render(self, value: Any) -> str:
        return str(value)


@dataclass(frozen=True, order=True)
class ItemRef:
    """Reference to an item: its concept and identifier."""

    concept: str
    id: str

    def __str__(self) -> str:
        return f"{self.concept}:{self.id}"


@dataclass(frozen=True)
class DimensionDecl:
    """Dimension ``name`` of ``source`` whose values are items of ``domain``."""

    name: str
    source: str
    domain: str


class ConceptKind(Enum):
    VALUE = "value"
    ENTITY = "entity"


@dataclass
class Concept:
    """Concept definition.

    Args:
        name (str): Unique concept name.
        dimensions (Dict[str, DimensionDecl]): Dimensions in declaration order.
        value_type (Optional[ValueType]): Set for value concepts.
    """

    name: str
    dimensions: Dict[str, DimensionDecl] = field(default_factory=dict)
    value_type: Optional[ValueType] = None

    @property
    def kind(self) -> ConceptKind:
        return ConceptKind.VALUE if self.value_type else ConceptKind.ENTITY

    @property
    def is_value(self) -> bool:
        return self.value_type is not None

    @property
    def is_primitive(self) -> bool:
        return not self.dimensions

    def dimension(self, name: str) -> DimensionDecl:
        try:
            return self.dimensions[name]
        except KeyError as exc:
            raise errors.UnknownDimension(
                f"concept '{self.name}' has no dimension '{name}'"
            ) from exc


@dataclass
class Item:
    """Stored item.

    Args:
        concept (str): Owning concept.
        id (str): Identifier, unique within the concept.
        slots (Dict[str, Optional[str]]): Per-dimension identifier of the referenced
            domain item, or None.
        value (Any): Literal of a value-concept item.
    """

    concept: str
    id: str
    slots: Dict[str, Optional[str]] = field(default_factory=dict)
    value: Any = None

    @property
    def ref(self) -> ItemRef:
        return ItemRef(self.concept, self.id)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass
class ValidationReport:
    """Schema validation result."""

    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str):
        self.violations.append(Violation(code, message))

    def codes(self) -> List[str]:
        return [violation.code for violation in self.violations]


SlotValue = Union[ItemRef, str, int, Decimal, None]


class Schema:
    """Two-level model: concepts, items and the concept graph.

    The concept graph is a multigraph with an edge ``source -> domain`` keyed by
    dimension name. Primitive concepts (no dimensions) sit directly under the
    synthetic top.

    Args:
        name (str): Schema name.
    """

    def __init__(self, name: str = "comdb"):
        self.name = name
        self.concepts: Dict[str, Concept] = {}
        self.frozen = False
        self.designated_bottom: Optional[str] = None
        # Derived properties, owner concept -> property name -> definition.
        self.derived: Dict[str, Dict[str, Any]] = {}
        self._items: Dict[str, Dict[str, Item]] = {}
        self._values: Dict[str, Dict[Any, str]] = {}
        self._graph = nx.MultiDiGraph()

    # Concepts.

    def _check_mutable(self):
        if self.frozen:
            raise errors.SchemaFrozen(f"schema '{self.name}' is a frozen snapshot")

    def define_concept(
        self,
        name: str,
        dims: Sequence[Tuple[str, str]] = (),
        value_type: Union[ValueType, str, None] = None,
    ) -> str:
        """Define one concept whose domains already exist.

        Raises:
            DuplicateConcept, UnknownDomain, CycleDetected, DuplicateLabel.
        """
        self.define_concepts([(name, dims, value_type)])
        return name

    def define_concepts(
        self,
        definitions: Iterable[tuple],
        strict: bool = True,
    ) -> List[str]:
        """Define several concepts at once, allowing forward references among them.

        Args:
            definitions (Iterable[tuple]): ``(name, dims, value_type)`` triples; dims is
                a sequence of ``(label, domain)`` pairs.
            strict (bool): When False, dangling domains and cycles are registered and
                left for ``validate`` to report.

        Returns:
            List[str]: Defined concept names.
        """
        self._check_mutable()
        staged: List[Concept] = []
        for name, dims, value_type in definitions:
            if name in self.concepts or any(c.name == name for c in staged):
                raise errors.DuplicateConcept(f"concept '{name}' already defined")
            if name == TOP:
                raise errors.DuplicateConcept(f"concept name '{name}' is reserved")
            value_type = ValueType(value_type) if value_type else None
            concept = Concept(name, value_type=value_type)
            for label, domain in dims:
                if label in concept.dimensions:
                    raise errors.DuplicateLabel(
                        f"concept '{name}' declares dimension '{label}' twice"
                    )
                concept.dimensions[label] = DimensionDecl(label, name, domain)
            if value_type and concept.dimensions:
                raise errors.SchemaError(f"value concept '{name}' cannot have dimensions")
            staged.append(concept)

        known = set(self.concepts) | {c.name for c in staged}
        if strict:
            for concept in staged:
                for decl in concept.dimensions.values():
                    if decl.domain not in known:
                        raise errors.UnknownDomain(
                            f"domain '{decl.domain}' of {concept.name}.{decl.name} is not defined"
                        )

        graph = self._graph.copy()
        for concept in staged:
            graph.add_node(concept.name)
        for concept in staged:
            for decl in concept.dimensions.values():
                if decl.domain in known:
                    graph.add_edge(concept.name, decl.domain, key=decl.name)
        if strict and not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise errors.CycleDetected(
                "concept definitions form a cycle: "
                + " -> ".join(str(edge[0]) for edge in cycle)
            )

        self._graph = graph
        for concept in staged:
            self.concepts[concept.name] = concept
            self._items[concept.name] = {}
            if concept.is_value:
                self._values[concept.name] = {}
            logger.debug("defined concept %s", concept.name)
        self._rewire_dangling()
        return [concept.name for concept in staged]

    def _rewire_dangling(self):
        # Domains declared before their concept existed (lenient definitions).
        for concept in self.concepts.values():
            for decl in concept.dimensions.values():
                if decl.domain in self.concepts and not self._graph.has_edge(
                    concept.name, decl.domain, key=decl.name
                ):
                    self._graph.add_edge(concept.name, decl.domain, key=decl.name)

    def concept(self, name: str) -> Concept:
        try:
            return self.concepts[name]
        except KeyError as exc:
            raise errors.UnknownConcept(f"concept '{name}' is not defined") from exc

    def has_concept(self, name: str) -> bool:
        return name in self.concepts

    @property
    def graph(self) -> nx.MultiDiGraph:
        """Concept graph, edges ``source -> domain`` keyed by dimension name."""
        return self._graph

    def super_concepts(self, name: str) -> List[str]:
        """All concepts reachable upward from ``name``."""
        self.concept(name)
        return sorted(nx.descendants(self._graph, name))

    def sub_concepts(self, name: str) -> List[str]:
        """All concepts from which ``name`` is reachable upward."""
        self.concept(name)
        return sorted(nx.ancestors(self._graph, name))

    def referencing_dimensions(self, domain: str) -> List[DimensionDecl]:
        """Dimensions of any concept whose domain is ``domain``."""
        self.concept(domain)
        return [
            self.concepts[source].dimensions[label]
            for source, _, label in sorted(self._graph.in_edges(domain, keys=True))
        ]

    def primitive_concepts(self) -> List[str]:
        return sorted(name for name, c in self.concepts.items() if c.is_primitive)

    def minimal_concepts(self) -> List[str]:
        return sorted(n for n in self.concepts if self._graph.in_degree(n) == 0)

    def topological_order(self) -> List[str]:
        """Concepts ordered from sub-concepts to super-concepts."""
        return list(nx.lexicographical_topological_sort(self._graph))

    def designate_bottom(self, name: Optional[str]):
        """Designate the bottom concept, or clear the designation with None."""
        self._check_mutable()
        if name is not None:
            self.concept(name)
        self.designated_bottom = name

    @property
    def bottom(self) -> Optional[str]:
        """Designated bottom, else the unique minimal concept, else None."""
        if self.designated_bottom:
            return self.designated_bottom
        minimal = self.minimal_concepts()
        if len(minimal) == 1:
            return minimal[0]
        return None

    def require_bottom(self, bottom: Optional[str] = None) -> str:
        """Resolve an explicit or schema-level bottom concept.

        Raises:
            NoBottom: If neither is available.
        """
        if bottom is not None:
            self.concept(bottom)
            return bottom
        resolved = self.bottom
        if resolved is None:
            raise errors.NoBottom(
                f"schema '{self.name}' has no designated or unique minimal concept"
            )
        return resolved

    def concept_paths(self, source: str, target: str = TOP) -> List[DimPath]:
        """All dimension paths from ``source`` upward to ``target``.

        With ``target`` set to ``TOP`` the paths to every primitive concept are
        returned, ordered by primitive concept name and then by path.
        """
        self.concept(source)
        if target == TOP:
            found: List[Tuple[str, DimPath]] = []
            for primitive in self.primitive_concepts():
                for path in self._paths_between(source, primitive):
                    found.append((primitive, path))
            found.sort()
            return [path for _, path in found]
        self.concept(target)
        return sorted(self._paths_between(source, target))

    def _paths_between(self, source: str, target: str) -> List[DimPath]:
        if source == target:
            return [()]
        return [
            tuple(label for _, _, label in edges)
            for edges in nx.all_simple_edge_paths(self._graph, source, target)
        ]

    def path_target(self, source: str, path: Union[str, Sequence[str]]) -> str:
        """Concept reached by walking ``path`` upward from ``source``.

        Raises:
            UnknownDimension: If a step is not a dimension of the current concept.
        """
        current = self.concept(source)
        for label in parse_path(path):
            current = self.concept(current.dimension(label).domain)
        return current.name

    # Items.

    def _store(self, concept: str) -> Dict[str, Item]:
        self.concept(concept)
        return self._items[concept]

    def items(self, concept: str) -> List[Item]:
        return list(self._store(concept).values())

    def item_refs(self, concept: str) -> List[ItemRef]:
        return [item.ref for item in self._store(concept).values()]

    def all_items(self) -> List[Item]:
        return [item for store in self._items.values() for item in store.values()]

    def count_items(self, concept: Optional[str] = None) -> int:
        if concept is not None:
            return len(self._store(concept))
        return sum(len(store) for store in self._items.values())

    def has_item(self, ref: ItemRef) -> bool:
        return ref.concept in self._items and ref.id in self._items[ref.concept]

    def get_item(self, ref: ItemRef) -> Item:
        try:
            return self._store(ref.concept)[ref.id]
        except KeyError as exc:
            raise errors.UnknownItem(f"item '{ref}' does not exist") from exc

    def value_of(self, ref: ItemRef) -> Any:
        """Literal of a value-concept item, None for entity items."""
        return self.get_item(ref).value

    def find_value(self, concept: str, literal: Any) -> Optional[ItemRef]:
        """Look up the item carrying ``literal`` in a value concept."""
        definition = self.concept(concept)
        if not definition.is_value:
            raise errors.DomainViolation(f"concept '{concept}' is not a value concept")
        try:
            value = definition.value_type.coerce(literal)
        except errors.DomainViolation:
            return None
        item_id = self._values[concept].get(value)
        return ItemRef(concept, item_id) if item_id is not None else None

    def add_value(self, concept: str, literal: Any) -> ItemRef:
        """Add a value-concept item identified by its rendered literal.

        Raises:
            DuplicateItem: If the value is already stored.
        """
        self._check_mutable()
        definition = self.concept(concept)
        if not definition.is_value:
            raise errors.DomainViolation(f"concept '{concept}' is not a value concept")
        value = definition.value_type.coerce(literal)
        if value in self._values[concept]:
            raise errors.DuplicateItem(f"value {value!r} already stored in '{concept}'")
        item_id = definition.value_type.render(value)
        if item_id in self._items[concept]:
            raise errors.DuplicateItem(f"item '{concept}:{item_id}' already exists")
        self._items[concept][item_id] = Item(concept, item_id, value=value)
        self._values[concept][value] = item_id
        return ItemRef(concept, item_id)

    def ensure_value(self, concept: str, literal: Any) -> ItemRef:
        """Return the item for ``literal``, creating it on first reference."""
        found = self.find_value(concept, literal)
        if found is not None:
            return found
        return self.add_value(concept, literal)

    def _resolve_slot(self, decl: DimensionDecl, raw: SlotValue) -> Optional[str]:
        if raw is None:
            return None
        if isinstance(raw, ItemRef):
            if raw.concept != decl.domain:
                raise errors.DomainViolation(
                    f"{decl.source}.{decl.name} requires an item of '{decl.domain}', got '{raw}'"
                )
            if not self.has_item(raw):
                raise errors.UnknownReferent(f"referenced item '{raw}' does not exist")
            return raw.id
        domain = self.concept(decl.domain)
        if domain.is_value and not isinstance(raw, str):
            found = self.find_value(decl.domain, raw)
        else:
            key = str(raw)
            found = ItemRef(decl.domain, key) if key in self._items[decl.domain] else None
            if found is None and domain.is_value:
                found = self.find_value(decl.domain, raw)
        if found is None:
            raise errors.UnknownReferent(
                f"{decl.source}.{decl.name} references missing item '{decl.domain}:{raw}'"
            )
        return found.id

    def add_item(
        self,
        concept: str,
        item_id: str,
        slots: Optional[Mapping[str, SlotValue]] = None,
    ) -> ItemRef:
        """Store an entity item; omitted dimensions are null.

        Raises:
            DuplicateItem, UnknownDimension, DomainViolation, UnknownReferent.
        """
        self._check_mutable()
        definition = self.concept(concept)
        if definition.is_value:
            raise errors.DomainViolation(
                f"'{concept}' is a value concept; add its items by value"
            )
        item_id = str(item_id)
        if item_id in self._items[concept]:
            raise errors.DuplicateItem(f"item '{concept}:{item_id}' already exists")
        bound = self._bind_slots(definition, slots or {})
        resolved = {name: bound.get(name) for name in definition.dimensions}
        self._items[concept][item_id] = Item(concept, item_id, resolved)
        return ItemRef(concept, item_id)

    def _bind_slots(
        self, definition: Concept, slots: Mapping[str, SlotValue]
    ) -> Dict[str, Optional[str]]:
        bound: Dict[str, Optional[str]] = {}
        for name, raw in slots.items():
            decl = definition.dimension(name)
            bound[name] = self._resolve_slot(decl, raw)
        return bound

    def update_item(
        self, concept: str, item_id: str, slots: Mapping[str, SlotValue]
    ) -> ItemRef:
        """Rebind the named slots of an existing entity item."""
        self._check_mutable()
        item = self.get_item(ItemRef(concept, str(item_id)))
        definition = self.concept(concept)
        if definition.is_value:
            raise errors.DomainViolation(f"value item '{item.ref}' has no slots")
        item.slots.update(self._bind_slots(definition, slots))
        return item.ref

    def referencing(self, ref: ItemRef) -> List[Tuple[ItemRef, str]]:
        """Live items whose slot references ``ref``, with the slot name."""
        found = []
        for decl in self.referencing_dimensions(ref.concept):
            for item in self._items[decl.source].values():
                if item.slots.get(decl.name) == ref.id:
                    found.append((item.ref, decl.name))
        return found

    def check_unreferenced(self, ref: ItemRef):
        """Raise ItemReferenced when a live item references ``ref``."""
        users = self.referencing(ref)
        if users:
            raise errors.ItemReferenced(
                f"item '{ref}' is referenced by '{users[0][0]}' via {users[0][1]}"
            )

    def delete_item(self, ref: ItemRef):
        """Remove an item that no live item references.

        Raises:
            UnknownItem, ItemReferenced.
        """
        self._check_mutable()
        item = self.get_item(ref)
        self.check_unreferenced(ref)
        del self._items[ref.concept][ref.id]
        if ref.concept in self._values:
            self._values[ref.concept].pop(item.value, None)

    def get_slot(self, ref: ItemRef, dim: str) -> Optional[ItemRef]:
        """Value of dimension ``dim`` of the item, or None.

        Raises:
            UnknownDimension: If the item's concept lacks ``dim``.
        """
        decl = self.concept(ref.concept).dimension(dim)
        item = self.get_item(ref)
        target = item.slots.get(dim)
        return ItemRef(decl.domain, target) if target is not None else None

    def walk(self, ref: Optional[ItemRef], path: Union[str, Sequence[str]]) -> Optional[ItemRef]:
        """Compose slots along ``path``; a null anywhere yields None."""
        for label in parse_path(path):
            if ref is None:
                return None
            ref = self.get_slot(ref, label)
        return ref

    # Validation.

    def validate(self, require_bottom: bool = False) -> ValidationReport:
        """Report structural and syntactic-constraint violations."""
        report = ValidationReport()
        for cycle in nx.simple_cycles(nx.DiGraph(self._graph)):
            report.add("CycleDetected", "concept cycle: " + " -> ".join(cycle))
        for concept in self.concepts.values():
            for decl in concept.dimensions.values():
                if decl.domain not in self.concepts:
                    report.add(
                        "UnknownDomain",
                        f"domain '{decl.domain}' of {concept.name}.{decl.name} is not defined",
                    )
        for concept_name, store in self._items.items():
            concept = self.concepts[concept_name]
            for item in store.values():
                self._validate_item(concept, item, report)
        if self.designated_bottom and self.designated_bottom in self.concepts:
            reachable = {self.designated_bottom} | nx.descendants(
                self._graph, self.designated_bottom
            )
            for name in sorted(set(self.concepts) - reachable):
                report.add(
                    "UnreachableConcept",
                    f"concept '{name}' is not reachable from bottom '{self.designated_bottom}'",
                )
        if require_bottom and self.bottom is None:
            report.add("NoBottom", "no designated or unique minimal concept")
        return report

    def _validate_item(self, concept: Concept, item: Item, report: ValidationReport):
        if concept.is_value:
            try:
                concept.value_type.coerce(item.value)
            except errors.DomainViolation as exc:
                report.add("DomainViolation", f"{item.ref}: {exc.message}")
            return
        for name, target in item.slots.items():
            if name not in concept.dimensions:
                report.add("UnknownDimension", f"{item.ref} binds unknown dimension '{name}'")
                continue
            if target is None:
                continue
            domain = concept.dimensions[name].domain
            if domain not in self._items or target not in self._items[domain]:
                report.add(
                    "UnknownReferent",
                    f"{item.ref}.{name} references missing item '{domain}:{target}'",
                )

    # Copies.

    def snapshot(self) -> "Schema":
        """Independent frozen copy for query evaluation."""
        clone = copy.deepcopy(self)
        clone.frozen = True
        return clone

    def restrict(self, keep: Mapping[str, Iterable[str]]) -> "Schema":
        """Copy holding only the kept items of the listed concepts.

        Concepts absent from ``keep`` retain all items. Slots that reference a
        removed item become null.
        """
        clone = copy.deepcopy(self)
        clone._prune(keep)  # pylint: disable=protected-access
        return clone

    def _prune(self, keep: Mapping[str, Iterable[str]]):
        for concept, ids in keep.items():
            wanted = set(ids)
            store = self._store(concept)
            for item_id in [i for i in store if i not in wanted]:
                item = store.pop(item_id)
                if concept in self._values:
                    self._values[concept].pop(item.value, None)
        for store in self._items.values():
            for item in store.values():
                concept = self.concepts[item.concept]
                for name, target in item.slots.items():
                    domain = concept.dimensions[name].domain
                    if target is not None and target not in self._items.get(domain, {}):
                        item.slots[name] = None

    def __repr__(self) -> str:
        return (
            f"Schema({self.name!r}, concepts={len(self.concepts)}, "
            f"items={self.count_items()})"
        )
