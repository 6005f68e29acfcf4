# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Possibility semantics: constraints, propagation and inference.

A possibility maps every stored item of a concept to 1 (possible) or 0
(prohibited). Constraint sets only ever lower values, so combining them is a
pointwise minimum.

Classes:

    Possibility
    ConstraintKind
    ConstraintSet
    ItemView

"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from comdb import errors
from comdb.model import navigate
from comdb.model.schema import DimPath, Item, ItemRef, Schema, parse_path

logger = logging.getLogger(__name__)


@dataclass
class Possibility:
    """Total {0, 1} map over the stored items of ``concept``.

    Items stored after the map was built read as possible.
    """

    concept: str
    values: Dict[str, int] = field(default_factory=dict)

    @classmethod
    def all_possible(cls, schema: Schema, concept: str) -> "Possibility":
        return cls(concept, {ref.id: 1 for ref in schema.item_refs(concept)})

    @classmethod
    def only(cls, schema: Schema, concept: str, ids: Iterable[str]) -> "Possibility":
        """Possible exactly on ``ids``."""
        keep = {str(i) for i in ids}
        return cls(
            concept, {ref.id: int(ref.id in keep) for ref in schema.item_refs(concept)}
        )

    def __getitem__(self, item_id: str) -> int:
        return self.values.get(item_id, 1)

    def is_possible(self, item_id: str) -> bool:
        return self[item_id] == 1

    def possible(self) -> List[str]:
        return [i for i, v in self.values.items() if v]

    def impossible(self) -> List[str]:
        return [i for i, v in self.values.items() if not v]

    def combine(self, other: "Possibility") -> "Possibility":
        """Pointwise minimum."""
        if other.concept != self.concept:
            raise errors.PropagationError(
                f"cannot combine possibilities of '{self.concept}' and '{other.concept}'"
            )
        keys = list(dict.fromkeys(list(self.values) + list(other.values)))
        return Possibility(self.concept, {k: min(self[k], other[k]) for k in keys})

    def refs(self) -> List[ItemRef]:
        return [ItemRef(self.concept, i) for i in self.possible()]


class ConstraintKind(Enum):
    STATIC = "static"
    QUERY = "query"


@dataclass
class ConstraintSet:
    """Per-concept possibilities of one kind.

    Static sets may also exclude literals of value concepts that are not stored
    (yet); they only matter for consistency checks.
    """

    kind: ConstraintKind = ConstraintKind.QUERY
    maps: Dict[str, Possibility] = field(default_factory=dict)
    exclusions: Dict[str, List[Any]] = field(default_factory=dict)

    def add(self, possibility: Possibility) -> "ConstraintSet":
        """Merge a possibility; existing zeros are never reset."""
        current = self.maps.get(possibility.concept)
        self.maps[possibility.concept] = (
            current.combine(possibility) if current else possibility
        )
        return self

    def exclude_value(self, concept: str, literal: Any) -> "ConstraintSet":
        self.exclusions.setdefault(concept, []).append(literal)
        return self

    def get(self, schema: Schema, concept: str) -> Possibility:
        found = self.maps.get(concept)
        if found is None:
            return Possibility.all_possible(schema, concept)
        return found

    def keep(self) -> Dict[str, List[str]]:
        """Possible item ids per constrained concept, for ``Schema.restrict``."""
        return {concept: p.possible() for concept, p in self.maps.items()}


class ItemView:
    """Read-only view of one item's own slots, handed to elementary predicates.

    Value-domain slots read as their literal, entity slots as ItemRef. Reaching for
    anything else raises NonLocalPredicate.
    """

    def __init__(self, schema: Schema, item: Item):
        self._slots: Dict[str, Any] = {}
        concept = schema.concept(item.concept)
        for name, decl in concept.dimensions.items():
            target = item.slots.get(name)
            if target is None:
                self._slots[name] = None
            elif schema.concept(decl.domain).is_value:
                self._slots[name] = schema.value_of(ItemRef(decl.domain, target))
            else:
                self._slots[name] = ItemRef(decl.domain, target)
        self._slots["id"] = item.id
        self._slots["value"] = item.value

    def __getattr__(self, name: str) -> Any:
        if name.startswith("_"):
            raise AttributeError(name)
        try:
            return self._slots[name]
        except KeyError as exc:
            raise errors.NonLocalPredicate(
                f"predicate reads '{name}', which is not a slot of the item"
            ) from exc

    def __getitem__(self, name: str) -> Any:
        return self.__getattr__(name)


Predicate = Union[Callable[[ItemView], bool], str]


def constrain(schema: Schema, concept: str, predicate: Predicate) -> Possibility:
    """Elementary constraint: zero on items the predicate rejects.

    Args:
        schema (Schema): Model.
        concept (str): Constrained concept.
        predicate (Predicate): Callable over an ItemView, or COQL condition text
            using only the item's own dimensions.

    Raises:
        NonLocalPredicate: The predicate navigates beyond the item.
    """
    schema.concept(concept)
    if isinstance(predicate, str):
        # pylint: disable=import-outside-toplevel
        from comdb.coql.predicates import compile_predicate

        test = compile_predicate(schema, concept, predicate)
    else:

        def test(item: Item) -> bool:
            return bool(predicate(ItemView(schema, item)))

    values = {item.id: int(bool(test(item))) for item in schema.items(concept)}
    logger.debug(
        "constraint on %s excludes %d of %d items",
        concept,
        sum(1 for v in values.values() if not v),
        len(values),
    )
    return Possibility(concept, values)


def _down_scope(schema: Schema, seeds: Iterable[str]) -> Set[str]:
    scope: Set[str] = set()
    for seed in seeds:
        scope |= {seed} | set(schema.sub_concepts(seed))
    return scope


def propagate_down(
    schema: Schema,
    constraints: ConstraintSet,
    dims: Optional[Mapping[str, Sequence[str]]] = None,
) -> ConstraintSet:
    """Prohibit every item that has a prohibited super-item.

    Args:
        schema (Schema): Model.
        constraints (ConstraintSet): Seed possibilities.
        dims (Optional[Mapping[str, Sequence[str]]]): Per-concept dimensions to
            propagate along; concepts not listed use all their dimensions.

    Returns:
        ConstraintSet: Fixpoint covering the seeded concepts and all their sub-concepts.
    """
    dims = dims or {}
    scope = _down_scope(schema, constraints.maps)
    result = ConstraintSet(constraints.kind, exclusions=dict(constraints.exclusions))
    # Super-concepts before their sub-concepts: one pass reaches the fixpoint.
    for name in reversed(schema.topological_order()):
        if name not in scope:
            continue
        concept = schema.concept(name)
        seed = constraints.get(schema, name)
        along = dims.get(name, list(concept.dimensions))
        values = {}
        for item in schema.items(name):
            possible = seed[item.id]
            if possible:
                for dim in along:
                    target = item.slots.get(dim)
                    if target is None:
                        continue
                    domain = concept.dimension(dim).domain
                    domain_map = result.maps.get(domain)
                    if domain_map is not None and not domain_map[target]:
                        possible = 0
                        break
            values[item.id] = possible
        result.maps[name] = Possibility(name, values)
    logger.debug("downward propagation over %d concepts", len(scope))
    return result


def _up_scope(schema: Schema, seeds: Iterable[str]) -> Set[str]:
    scope: Set[str] = set()
    for seed in seeds:
        scope |= {seed} | set(schema.super_concepts(seed))
    return scope


def propagate_up(schema: Schema, constraints: ConstraintSet) -> ConstraintSet:
    """Keep possible only the super-items referenced by possible sub-items.

    Returns:
        ConstraintSet: Result covering the seeded concepts and all their super-concepts.
    """
    scope = _up_scope(schema, constraints.maps)
    result = ConstraintSet(constraints.kind, exclusions=dict(constraints.exclusions))
    # Sub-concepts before their super-concepts.
    for name in schema.topological_order():
        if name not in scope:
            continue
        subs = [
            decl
            for decl in schema.referencing_dimensions(name)
            if decl.source in scope
        ]
        seed = constraints.maps.get(name)
        if not subs:
            result.maps[name] = seed or Possibility.all_possible(schema, name)
            continue
        referenced: Set[str] = set()
        for decl in subs:
            source_map = result.maps[decl.source]
            for item in schema.items(decl.source):
                target = item.slots.get(decl.name)
                if target is not None and source_map[item.id]:
                    referenced.add(target)
        values = {}
        for ref in schema.item_refs(name):
            possible = int(ref.id in referenced)
            if seed is not None:
                possible = min(possible, seed[ref.id])
            values[ref.id] = possible
        result.maps[name] = Possibility(name, values)
    logger.debug("upward propagation over %d concepts", len(scope))
    return result


def check_consistency(schema: Schema, static: ConstraintSet) -> bool:
    """True iff no stored item is prohibited by the static constraints.

    Raises:
        PropagationError: If ``static`` is not a static constraint set.
    """
    if static.kind is not ConstraintKind.STATIC:
        raise errors.PropagationError("consistency is checked against static constraints")
    for concept, possibility in static.maps.items():
        for ref in schema.item_refs(concept):
            if not possibility[ref.id]:
                logger.info("stored item %s violates a static constraint", ref)
                return False
    for concept, literals in static.exclusions.items():
        for literal in literals:
            found = schema.find_value(concept, literal)
            if found is not None:
                logger.info("stored value %s violates a static constraint", found)
                return False
    return True


def _checked_path(schema: Schema, bottom: str, concept: str, path: Any) -> DimPath:
    path = parse_path(path)
    if path not in schema.concept_paths(bottom, concept):
        raise errors.PathMismatch(
            f"path '{'.'.join(path)}' does not lead from '{bottom}' to '{concept}'"
        )
    return path


def infer(
    schema: Schema,
    sources: Sequence[Tuple[Possibility, Any]],
    target: Tuple[str, Any],
    bottom: Optional[str] = None,
) -> Possibility:
    """Two-step inference through the bottom concept.

    Source possibilities are de-projected to the bottom concept along their
    paths, the results intersected, and the intersection projected up to the
    target concept.

    Args:
        schema (Schema): Model.
        sources (Sequence[Tuple[Possibility, Any]]): ``(possibility, path from bottom)`` pairs.
        target (Tuple[str, Any]): ``(concept, path from bottom)``.
        bottom (Optional[str]): Bottom concept; defaults to the schema's.

    Raises:
        NoBottom, PathMismatch.
    """
    bottom = schema.require_bottom(bottom)
    checked = [
        (possibility, _checked_path(schema, bottom, possibility.concept, path))
        for possibility, path in sources
    ]
    target_concept, target_path = target
    target_path = _checked_path(schema, bottom, target_concept, target_path)

    index = navigate.ReverseIndex(schema)
    selected: Optional[Set[ItemRef]] = None
    for possibility, path in checked:
        allowed = navigate.Collection(
            possibility.concept,
            [ref for ref in schema.item_refs(possibility.concept) if possibility[ref.id]],
        )
        below = set(navigate.deproject_path(schema, allowed, bottom, path, index))
        selected = below if selected is None else selected & below

    # Without sources every bottom item stays.
    kept = [
        ref for ref in schema.item_refs(bottom) if selected is None or ref in selected
    ]
    reached = navigate.project(schema, navigate.Collection(bottom, kept), target_path)
    logger.debug(
        "inference kept %d of %d bottom items", len(kept), schema.count_items(bottom)
    )
    return Possibility.only(schema, target_concept, reached.ids())
