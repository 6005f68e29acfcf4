# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""One-level labelled ordered sets.

Elements are defined as labelled combinations of super-elements. The set keeps
a synthetic top and bottom so that path-based metrics are defined for every
element.

Classes:

    Combination
    Path
    Metrics
    BinaryRow
    BinaryTable
    OrderedSet

"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Callable,
    Dict,
    Hashable,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Set,
    Tuple,
    Union,
)

import networkx as nx

from comdb import errors

logger = logging.getLogger(__name__)

DEFAULT_TOP = "top"
DEFAULT_BOTTOM = "bottom"


class Direction(Enum):
    """Path enumeration direction."""

    UP = "up"
    DOWN = "down"


@dataclass(frozen=True, eq=False)
class Combination:
    """Labelled combination of super-elements.

    ``None`` marks an absent binding (the most general value).

    Args:
        bindings (Tuple[Tuple[str, Optional[Hashable]], ...]): Ordered ``(label, value)`` pairs.
    """

    bindings: Tuple[Tuple[str, Optional[Hashable]], ...] = ()

    def __post_init__(self):
        seen: Set[str] = set()
        for label, _ in self.bindings:
            if label in seen:
                raise errors.DuplicateLabel(f"label '{label}' is bound twice")
            seen.add(label)

    @classmethod
    def of(
        cls, pairs: Union[Mapping[str, Optional[Hashable]], Iterable[tuple]] = ()
    ) -> "Combination":
        """Build a combination from a mapping or an iterable of pairs."""
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        return cls(tuple((str(label), value) for label, value in pairs))

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(label for label, _ in self.bindings)

    def get(self, label: str) -> Optional[Hashable]:
        """Return the binding for ``label``.

        Raises:
            UnknownLabel: If the label is not bound.
        """
        for bound, value in self.bindings:
            if bound == label:
                return value
        raise errors.UnknownLabel(f"label '{label}' is not bound")

    def as_dict(self) -> Dict[str, Optional[Hashable]]:
        return dict(self.bindings)

    def __iter__(self) -> Iterator[Tuple[str, Optional[Hashable]]]:
        return iter(self.bindings)

    def __len__(self) -> int:
        return len(self.bindings)

    # Equality ignores binding order.
    def __eq__(self, other) -> bool:
        if not isinstance(other, Combination):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(frozenset(self.bindings))

    def __repr__(self) -> str:
        inner = ", ".join(f"{label}:{value}" for label, value in self.bindings)
        return f"<{inner}>"


def reduce(combination: Combination, label: str) -> Combination:
    """Remove one binding from a combination.

    Raises:
        UnknownLabel: If ``label`` is not bound.
    """
    if label not in combination.labels:
        raise errors.UnknownLabel(f"label '{label}' is not bound")
    return Combination(tuple(b for b in combination.bindings if b[0] != label))


def extend(
    combination: Combination, label: str, value: Optional[Hashable] = None
) -> Combination:
    """Add one binding to a combination.

    Raises:
        DuplicateLabel: If ``label`` is already bound.
    """
    if label in combination.labels:
        raise errors.DuplicateLabel(f"label '{label}' is already bound")
    return Combination(combination.bindings + ((label, value),))


def induced_leq(
    a: Combination,
    b: Combination,
    leq: Optional[Callable[[Hashable, Hashable], bool]] = None,
) -> bool:
    """Check whether ``a`` is at least as specific as ``b``.

    For every label, ``b`` must bind null or a value equal to (or, when ``leq``
    is given, dominating) the value bound in ``a``.

    Args:
        a (Combination): Candidate specific combination.
        b (Combination): Candidate general combination.
        leq (Optional[Callable]): Strict order on bound values, e.g. ``OrderedSet.less_than``.

    Raises:
        LabelMismatch: If the combinations are not aligned on one label set.
    """
    left, right = a.as_dict(), b.as_dict()
    if set(left) != set(right):
        raise errors.LabelMismatch(
            f"label sets differ: {sorted(set(left) ^ set(right))}"
        )
    for label, general in right.items():
        if general is None:
            continue
        specific = left[label]
        if specific is None:
            return False
        if specific == general:
            continue
        if leq is None or not leq(specific, general):
            return False
    return True


@dataclass(frozen=True)
class Path:
    """Label path through an ordered set, oriented upward.

    ``elements[0]`` is the lowest element and ``labels[i]`` names the edge from
    ``elements[i]`` to ``elements[i + 1]``.
    """

    elements: Tuple[str, ...]
    labels: Tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def source(self) -> str:
        return self.elements[0]

    @property
    def target(self) -> str:
        return self.elements[-1]

    def dotted(self, prefix: Optional[str] = None) -> str:
        parts = list(self.labels)
        if prefix is not None:
            parts.insert(0, prefix)
        return ".".join(parts)

    def __add__(self, other: "Path") -> "Path":
        if self.target != other.source:
            raise ValueError(f"paths do not meet: {self.target} != {other.source}")
        return Path(self.elements + other.elements[1:], self.labels + other.labels)


@dataclass(frozen=True)
class Metrics:
    """Order metrics of one element."""

    dimensionality: int
    cardinality: int
    primitive_dimensionality: int
    primitive_cardinality: int
    canonical_dimensionality: int
    canonical_cardinality: int


@dataclass(frozen=True)
class BinaryRow:
    """One row of the binary primitive table."""

    element: str
    sub_dimension: Path
    bits: Tuple[int, ...]


@dataclass
class BinaryTable:
    """Binary primitive semantics of a one-level set.

    Columns are bottom-to-top paths rendered as ``bottom.label.label...``.
    """

    columns: List[str]
    rows: List[BinaryRow] = field(default_factory=list)

    def rows_for(self, element: str) -> List[BinaryRow]:
        return [row for row in self.rows if row.element == element]

    def combination(self, row: BinaryRow) -> Combination:
        """Row as a combination over the columns, zero bits bound to null."""
        return Combination(
            tuple(
                (column, 1 if bit else None)
                for column, bit in zip(self.columns, row.bits)
            )
        )


class OrderedSet:
    """Labelled ordered set with synthetic top and bottom.

    Args:
        top (str): Name of the synthetic top element.
        bottom (str): Name of the synthetic bottom element.
    """

    def __init__(self, top: str = DEFAULT_TOP, bottom: str = DEFAULT_BOTTOM):
        if top == bottom:
            raise errors.DuplicateId(f"top and bottom share the name '{top}'")
        self.top = top
        self.bottom = bottom
        self._graph = nx.MultiDiGraph()
        self._definitions: Dict[str, Combination] = {}

    @property
    def elements(self) -> List[str]:
        """User elements in insertion order."""
        return list(self._definitions)

    def definition(self, element: str) -> Combination:
        self._require(element, synthetic=False)
        return self._definitions[element]

    def add_element(self, element: str, supers: Optional[Combination] = None) -> str:
        """Insert an element defined as a combination of existing super-elements.

        Null bindings add no edge.

        Raises:
            DuplicateId: ``element`` exists or collides with top/bottom.
            CycleDetected: ``element`` references itself.
            UnknownSuper: A referenced super-element does not exist.
        """
        supers = supers or Combination()
        if element in self._definitions or element in (self.top, self.bottom):
            raise errors.DuplicateId(f"element '{element}' already exists")
        targets = [value for _, value in supers if value is not None]
        if element in targets:
            raise errors.CycleDetected(f"element '{element}' cannot be its own super")
        for target in targets:
            if target not in self._definitions:
                raise errors.UnknownSuper(f"super-element '{target}' does not exist")

        self._graph.add_node(element)
        for label, target in supers:
            if target is not None:
                self._graph.add_edge(element, target, key=label)
        # A new node has no incoming edges, so the graph stays acyclic.
        self._definitions[element] = supers
        logger.debug("added element %s with %d supers", element, len(targets))
        return element

    def full_graph(self) -> nx.MultiDiGraph:
        """Edge graph including the synthetic top and bottom edges.

        Elements without outgoing edges get an edge to top labelled with the top
        name; elements without incoming edges get an edge from bottom labelled with
        the element itself.
        """
        graph = self._graph.copy()
        graph.add_node(self.top)
        graph.add_node(self.bottom)
        for element in self._definitions:
            if self._graph.out_degree(element) == 0:
                graph.add_edge(element, self.top, key=self.top)
            if self._graph.in_degree(element) == 0:
                graph.add_edge(self.bottom, element, key=element)
        if not self._definitions:
            graph.add_edge(self.bottom, self.top, key=self.top)
        return graph

    def _require(self, element: str, synthetic: bool = True):
        known = element in self._definitions or (
            synthetic and element in (self.top, self.bottom)
        )
        if not known:
            raise errors.UnknownElement(f"element '{element}' is not in the set")

    def less_than(self, a: str, b: str) -> bool:
        """Strict order: a directed path leads from ``a`` up to ``b``."""
        self._require(a)
        self._require(b)
        if a == b:
            return False
        return nx.has_path(self.full_graph(), a, b)

    def _path_counts(self, graph: nx.MultiDiGraph, start: str) -> Dict[str, int]:
        """Number of distinct edge paths from ``start`` to every reachable node."""
        counts = {start: 1}
        for node in nx.topological_sort(graph):
            if node not in counts:
                continue
            for _, target, _ in graph.out_edges(node, keys=True):
                counts[target] = counts.get(target, 0) + counts[node]
        return counts

    def metrics(self, element: str) -> Metrics:
        """Order metrics of ``element`` computed on the full graph."""
        self._require(element)
        graph = self.full_graph()
        up = self._path_counts(graph, element)
        down = self._path_counts(graph.reverse(copy=False), element)
        return Metrics(
            dimensionality=graph.out_degree(element),
            cardinality=graph.in_degree(element),
            primitive_dimensionality=up.get(self.top, 0) if element != self.top else 0,
            primitive_cardinality=(
                down.get(self.bottom, 0) if element != self.bottom else 0
            ),
            canonical_dimensionality=sum(up.values()) - 1,
            canonical_cardinality=sum(down.values()) - 1,
        )

    def enumerate_paths(
        self, element: str, direction: Direction = Direction.UP, complete: bool = False
    ) -> List[Path]:
        """All non-empty label paths from ``element`` in one direction.

        Args:
            element (str): Start element.
            direction (Direction): ``UP`` for complex dimensions, ``DOWN`` for inverse ones.
            complete (bool): Keep only paths ending at top (up) or bottom (down).

        Returns:
            List[Path]: Paths oriented upward, sorted by rank then labels.
        """
        self._require(element)
        direction = Direction(direction)
        graph = self.full_graph()
        paths: List[Path] = []

        def walk(node: str, trail: List[Tuple[str, str, str]]):
            if trail:
                paths.append(self._as_path(trail, direction))
            edges = (
                graph.out_edges(node, keys=True)
                if direction is Direction.UP
                else graph.in_edges(node, keys=True)
            )
            for source, target, label in edges:
                nxt = target if direction is Direction.UP else source
                walk(nxt, trail + [(source, target, label)])

        walk(element, [])
        if complete:
            if direction is Direction.UP:
                paths = [p for p in paths if p.target == self.top]
            else:
                paths = [p for p in paths if p.source == self.bottom]
        paths.sort(key=lambda p: (p.rank, p.labels, p.elements))
        logger.debug(
            "enumerated %d %s paths from %s", len(paths), direction.value, element
        )
        return paths

    @staticmethod
    def _as_path(trail: List[Tuple[str, str, str]], direction: Direction) -> Path:
        if direction is Direction.DOWN:
            trail = list(reversed(trail))
        elements = (trail[0][0],) + tuple(target for _, target, _ in trail)
        return Path(elements, tuple(label for _, _, label in trail))

    def flatten_binary(self) -> BinaryTable:
        """Binary primitive table of the set.

        Each non-top element emits one row per downward path from bottom; the row
        holds 1 exactly in the columns obtained by extending that path with each
        upward path of the element to top.
        """
        full = self.enumerate_paths(self.bottom, Direction.UP, complete=True)
        columns = sorted(path.dotted(self.bottom) for path in full)
        index = {column: position for position, column in enumerate(columns)}
        table = BinaryTable(columns)

        for element in [self.bottom] + sorted(self._definitions):
            ups = self.enumerate_paths(element, Direction.UP, complete=True)
            if element == self.bottom:
                subs = [Path((self.bottom,), ())]
            else:
                subs = self.enumerate_paths(element, Direction.DOWN, complete=True)
            for sub in sorted(subs, key=lambda p: p.labels):
                bits = [0] * len(columns)
                for up in ups:
                    bits[index[(sub + up).dotted(self.bottom)]] = 1
                table.rows.append(BinaryRow(element, sub, tuple(bits)))
        logger.debug(
            "flattened ordered set into %d rows over %d columns",
            len(table.rows),
            len(columns),
        )
        return table
