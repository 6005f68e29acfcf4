# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Navigation over a two-level model.

Projection moves a collection up along dimensions (set semantics), dot does the
same without removing duplicates, and de-projection collects the sub-items that
reference a collection.

Classes:

    Collection
    DotResult
    ReverseIndex
    StepKind
    PathStep

"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from comdb import errors
from comdb.model.flatten import coverage, flatten
from comdb.model.schema import DimPath, ItemRef, Schema, parse_path

logger = logging.getLogger(__name__)


@dataclass
class Collection:
    """Ordered collection of members.

    Members are ItemRefs of ``concept``; a collection of literals (computed query
    output) has ``concept`` set to None.
    """

    concept: Optional[str]
    members: List[Any] = field(default_factory=list)

    @classmethod
    def of_concept(cls, schema: Schema, concept: str) -> "Collection":
        return cls(concept, schema.item_refs(concept))

    def distinct(self) -> "Collection":
        return Collection(self.concept, _unique(self.members))

    def __iter__(self) -> Iterator[Any]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, member: Any) -> bool:
        return member in self.members

    def ids(self) -> List[str]:
        return [m.id if isinstance(m, ItemRef) else str(m) for m in self.members]


@dataclass
class DotResult:
    """Dot output and the number of members dropped on a null walk."""

    collection: Collection
    dropped: int = 0


def _unique(members: Iterable[Any]) -> List[Any]:
    return list(dict.fromkeys(members))


class ReverseIndex:
    """Lazy map ``(concept, dimension) -> super-item id -> referencing item ids``.

    Built over a schema that is not mutated while the index is alive.
    """

    def __init__(self, schema: Schema):
        self.schema = schema
        self._maps: Dict[Tuple[str, str], Dict[str, List[str]]] = {}

    def referencing(self, concept: str, dim: str, target_id: str) -> List[str]:
        key = (concept, dim)
        if key not in self._maps:
            built: Dict[str, List[str]] = {}
            for item in self.schema.items(concept):
                value = item.slots.get(dim)
                if value is not None:
                    built.setdefault(value, []).append(item.id)
            self._maps[key] = built
            logger.debug("indexed %s.%s (%d keys)", concept, dim, len(built))
        return self._maps[key].get(target_id, [])


def _walk_all(
    schema: Schema, members: Iterable[ItemRef], path: DimPath
) -> Tuple[List[ItemRef], int]:
    reached, dropped = [], 0
    for member in members:
        value = schema.walk(member, path)
        if value is None:
            dropped += 1
        else:
            reached.append(value)
    return reached, dropped


def _target_concept(schema: Schema, source: Collection, path: DimPath) -> Optional[str]:
    if source.concept is None:
        if path:
            raise errors.DomainMismatch("cannot navigate a collection of literals")
        return None
    return schema.path_target(source.concept, path)


def project(
    schema: Schema, source: Collection, path: Union[str, Sequence[str]]
) -> Collection:
    """Distinct super-items reached along ``path``, in first-reached order."""
    path = parse_path(path)
    concept = _target_concept(schema, source, path)
    reached, _ = _walk_all(schema, source, path)
    return Collection(concept, _unique(reached))


def dot(
    schema: Schema, source: Collection, path: Union[str, Sequence[str]]
) -> DotResult:
    """One output per input member; null walks are dropped and counted."""
    path = parse_path(path)
    concept = _target_concept(schema, source, path)
    reached, dropped = _walk_all(schema, source, path)
    return DotResult(Collection(concept, reached), dropped)


def _owners(schema: Schema, dim: str, domain: str) -> List[str]:
    return sorted(
        name
        for name, concept in schema.concepts.items()
        if dim in concept.dimensions and concept.dimensions[dim].domain == domain
    )


def resolve_deprojection(
    schema: Schema, start: str, dims: Sequence[str], target: str
) -> List[str]:
    """Concepts visited by each de-projection hop from ``start`` to ``target``.

    Hops are resolved from ``start`` onward: every hop except the last goes to
    the unique concept owning the dimension with the current concept as its
    domain, and the last hop must land on ``target``.

    Raises:
        UnknownDimension: A dimension name is declared nowhere.
        DomainMismatch: No concept owns a hop's dimension over the current concept.
        AmbiguousDeprojection: Several concepts own an intermediate hop's dimension.
    """
    dims = list(dims)
    schema.concept(target)
    for dim in dims:
        if not any(dim in c.dimensions for c in schema.concepts.values()):
            raise errors.UnknownDimension(f"no concept declares dimension '{dim}'")
    if not dims:
        if start != target:
            raise errors.DomainMismatch(f"no de-projection from '{start}' to '{target}'")
        return []

    hops = []
    current = start
    for dim in dims[:-1]:
        owners = _owners(schema, dim, current)
        if not owners:
            raise errors.DomainMismatch(
                f"no concept has a dimension '{dim}' with domain '{current}'"
            )
        if len(owners) > 1:
            raise errors.AmbiguousDeprojection(
                f"de-projection from '{current}' via '{dim}' is ambiguous: "
                f"{', '.join(owners)}; name the intermediate concept"
            )
        current = owners[0]
        hops.append(current)
    decl = schema.concept(target).dimensions.get(dims[-1])
    if decl is None or decl.domain != current:
        raise errors.DomainMismatch(
            f"dimensions {'.'.join(dims)} do not lead from '{target}' to '{start}'"
        )
    hops.append(target)
    return hops


def _deproject_hop(
    schema: Schema,
    members: Sequence[ItemRef],
    concept: str,
    dim: str,
    index: Optional[ReverseIndex],
) -> List[ItemRef]:
    if index is not None:
        return _unique(
            ItemRef(concept, item_id)
            for member in members
            for item_id in index.referencing(concept, dim, member.id)
        )
    wanted = {member.id for member in members}
    return [
        item.ref for item in schema.items(concept) if item.slots.get(dim) in wanted
    ]


def deproject(
    schema: Schema,
    source: Collection,
    dims: Union[str, Sequence[str]],
    target: Union[str, Collection],
    index: Optional[ReverseIndex] = None,
) -> Collection:
    """Sub-items of ``target`` whose walk along the reversed ``dims`` lands in ``source``.

    Args:
        schema (Schema): Model.
        source (Collection): Super-items.
        dims (Union[str, Sequence[str]]): Dimension chain, nearest to ``source`` first.
        target (Union[str, Collection]): Target concept, or a collection restricting it.
        index (Optional[ReverseIndex]): Reverse index to use instead of scanning.
    """
    dims = [dims] if isinstance(dims, str) else list(dims)
    if isinstance(target, Collection):
        target_concept, allowed = target.concept, set(target.members)
    else:
        target_concept, allowed = target, None
    if source.concept is None or target_concept is None:
        raise errors.DomainMismatch("cannot de-project a collection of literals")
    hops = resolve_deprojection(schema, source.concept, dims, target_concept)
    members: List[ItemRef] = _unique(source.members)
    for concept, dim in zip(hops, dims):
        members = _deproject_hop(schema, members, concept, dim, index)
    if allowed is not None:
        members = [m for m in members if m in allowed]
    return Collection(target_concept, members)


class StepKind(Enum):
    PROJECT = "project"
    DOT = "dot"
    DEPROJECT = "deproject"


@dataclass(frozen=True)
class PathStep:
    """One step of an access path.

    Project and dot steps carry a dimension path; de-project steps carry the
    dimension chain and the target concept or collection.
    """

    kind: StepKind
    dims: Tuple[str, ...]
    target: Union[str, Collection, None] = None

    @classmethod
    def up(cls, path: Union[str, Sequence[str]]) -> "PathStep":
        return cls(StepKind.PROJECT, parse_path(path))

    @classmethod
    def dot(cls, path: Union[str, Sequence[str]]) -> "PathStep":
        return cls(StepKind.DOT, parse_path(path))

    @classmethod
    def down(cls, dims: Union[str, Sequence[str]], target: Union[str, Collection]) -> "PathStep":
        return cls(StepKind.DEPROJECT, parse_path(dims), target)


def eval_path(
    schema: Schema,
    source: Collection,
    steps: Sequence[PathStep],
    index: Optional[ReverseIndex] = None,
) -> Collection:
    """Fold the steps over ``source`` from left to right."""
    current = source
    for step in steps:
        if step.kind is StepKind.PROJECT:
            current = project(schema, current, step.dims)
        elif step.kind is StepKind.DOT:
            current = dot(schema, current, step.dims).collection
        else:
            current = deproject(schema, current, step.dims, step.target, index)
    return current


def _intersect(results: List[Collection]) -> Collection:
    first = results[0]
    common = set(first.members)
    for other in results[1:]:
        common &= set(other.members)
    return Collection(first.concept, [m for m in _unique(first.members) if m in common])


def multi_project(
    schema: Schema, source: Collection, dims: Sequence[str]
) -> Collection:
    """Intersection of the projections along each dimension.

    Raises:
        DomainMismatch: Dimensions with different domains.
    """
    if not dims:
        raise errors.DomainMismatch("multi-dimensional projection needs dimensions")
    concept = schema.concept(source.concept)
    domains = {concept.dimension(dim).domain for dim in dims}
    if len(domains) > 1:
        raise errors.DomainMismatch(
            f"dimensions {', '.join(dims)} have different domains: {sorted(domains)}"
        )
    return _intersect([project(schema, source, dim) for dim in dims])


def multi_deproject(
    schema: Schema,
    source: Collection,
    dims: Sequence[str],
    target: Union[str, Collection],
    index: Optional[ReverseIndex] = None,
) -> Collection:
    """Intersection of the single-dimension de-projections into ``target``."""
    if not dims:
        raise errors.DomainMismatch("multi-dimensional de-projection needs dimensions")
    return _intersect([deproject(schema, source, dim, target, index) for dim in dims])


def full_deproject(
    schema: Schema, source: Collection, bottom: Optional[str] = None
) -> Collection:
    """Bottom items more specific than some member of ``source``."""
    bottom = schema.require_bottom(bottom)
    if not len(source):
        return Collection(bottom, [])
    table = flatten(schema, bottom)
    found = []
    for member in _unique(source.members):
        found.extend(row.item for row in coverage(schema, member, bottom, table))
    return Collection(bottom, _unique(found))


def deproject_path(
    schema: Schema,
    source: Collection,
    fact: str,
    path: Union[str, Sequence[str]],
    index: Optional[ReverseIndex] = None,
) -> Collection:
    """Items of ``fact`` whose walk along ``path`` lands in ``source``.

    Unlike ``deproject`` the hop concepts come from the path itself, so no
    disambiguation is needed.

    Raises:
        PathMismatch: ``path`` does not lead from ``fact`` to the source concept.
    """
    path = parse_path(path)
    hops = [schema.path_target(fact, path[:depth]) for depth in range(len(path))]
    reached = schema.path_target(fact, path)
    if source.concept is None or reached != source.concept:
        raise errors.PathMismatch(
            f"path '{'.'.join(path)}' leads from '{fact}' to '{reached}', "
            f"not '{source.concept}'"
        )
    members: List[ItemRef] = _unique(source.members)
    for concept, dim in zip(reversed(hops), reversed(path)):
        members = _deproject_hop(schema, members, concept, dim, index)
    return Collection(fact, members)
