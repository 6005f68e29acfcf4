# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""COQL syntax trees.

The parser produces surface nodes. The checker rewrites them into resolved
nodes, where every name is bound to a variable, a concept or a dimension and
every de-projection hop is known. Spans never take part in equality.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Tuple


@dataclass(frozen=True)
class Span:
    line: int = 0
    column: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


NO_SPAN = Span()


class Node:
    """Base class of all COQL nodes."""


class Expr(Node):
    """Base class of expressions."""


class Stmt(Node):
    """Base class of query-body statements."""


# Surface expressions.


@dataclass(frozen=True)
class Literal(Expr):
    value: Any
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Name(Expr):
    ident: str
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


class NavOp(Enum):
    ARROW = "->"
    DOT = "."


@dataclass(frozen=True)
class Navigate(Expr):
    """``base -> name`` or ``base . name``."""

    base: Expr
    op: NavOp
    name: str
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class DotTuple(Expr):
    """``base.<expr, ...>``: expressions evaluated per member with ``this`` bound."""

    base: Expr
    items: Tuple[Expr, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Deproject(Expr):
    """``base <- link <- ... <- link``; the checker splits dimensions from targets."""

    base: Expr
    links: Tuple[Expr, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Call(Expr):
    """Derived property call ``base.name(args)``; ``base`` None means ``this``."""

    base: Optional[Expr]
    name: str
    args: Tuple[Expr, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


class AggFunc(Enum):
    COUNT = "COUNT"
    SIZE = "SIZE"
    SUM = "SUM"
    AVERAGE = "AVERAGE"


@dataclass(frozen=True)
class Aggregate(Expr):
    func: AggFunc
    arg: Expr
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Filter(Expr):
    """``(source var | cond)``."""

    source: Expr
    var: Optional[str]
    cond: Expr
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class SubQuery(Expr):
    query: "Query"
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class MultiDeproject(Expr):
    """``[chain AND chain ...]``: intersection of de-projections into one concept."""

    chains: Tuple[Expr, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class TupleExpr(Expr):
    items: Tuple[Expr, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


# Queries and statements.


@dataclass(frozen=True)
class Source(Node):
    expr: Expr
    var: Optional[str] = None


@dataclass(frozen=True)
class SelectItem(Node):
    expr: Expr
    alias: Optional[str] = None


@dataclass(frozen=True)
class Decl(Stmt):
    """``Type var = expr;`` with an optional ``<Concept>`` type argument."""

    type_name: str
    type_arg: Optional[str]
    var: str
    expr: Expr
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class IfReturn(Stmt):
    cond: Expr
    values: Tuple[Expr, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Return(Stmt):
    values: Tuple[Expr, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Query(Node):
    """A query. ``select`` None means omitted; ``star`` marks ``SELECT *``."""

    sources: Tuple[Source, ...]
    body: Tuple[Stmt, ...] = ()
    where: Optional[Expr] = None
    select: Optional[Tuple[SelectItem, ...]] = None
    star: bool = False
    forall: bool = False
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Param(Node):
    type_name: str
    type_arg: Optional[str]
    name: str


@dataclass(frozen=True)
class PropertyDef(Node):
    """``Owner::name(Type p, ...) { body }``."""

    owner: str
    name: str
    params: Tuple[Param, ...]
    body: Tuple[Stmt, ...]
    span: Span = field(default=NO_SPAN, compare=False, repr=False)


# Resolved expressions (checker output).


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class ConceptColl(Expr):
    """All items of a concept."""

    concept: str


@dataclass(frozen=True)
class SlotNav(Expr):
    """Slot access along ``dim``.

    On an item the result is the referenced item (or null). On a collection,
    ``distinct`` selects projection and otherwise dot semantics.
    """

    base: Expr
    dim: str
    domain: str
    many: bool
    distinct: bool


@dataclass(frozen=True)
class IdOf(Expr):
    base: Expr
    many: bool


@dataclass(frozen=True)
class ColumnOf(Expr):
    base: Expr
    column: str


@dataclass(frozen=True)
class Restrict(Expr):
    """Keep only members (or the item) contained in ``target``."""

    base: Expr
    target: Expr
    many: bool


@dataclass(frozen=True)
class DeprojectStep(Expr):
    """De-projection of ``base`` along ``dims`` into ``target`` through ``hops``."""

    base: Expr
    dims: Tuple[str, ...]
    hops: Tuple[str, ...]
    target: Expr


@dataclass(frozen=True)
class Intersect(Expr):
    concept: str
    chains: Tuple[Expr, ...]


@dataclass(frozen=True)
class DotMap(Expr):
    base: Expr
    items: Tuple[Expr, ...]
    many: bool


@dataclass(frozen=True)
class PropertyCall(Expr):
    base: Expr
    owner: str
    name: str
    args: Tuple[Expr, ...]
    many: bool


@dataclass(frozen=True)
class FilterNode(Expr):
    source: Expr
    var: str
    cond: Expr
    closed: bool


@dataclass(frozen=True)
class Plan(Node):
    """Resolved query.

    ``sources`` pairs variables with collection expressions. Output rows come
    from ``select`` when given, from body RETURN statements when ``returns``
    is set, and otherwise from the FROM tuple.
    """

    sources: Tuple[Tuple[str, Expr], ...]
    body: Tuple[Stmt, ...]
    where: Optional[Expr]
    select: Optional[Tuple[Expr, ...]]
    columns: Tuple[str, ...]
    returns: bool


@dataclass(frozen=True)
class QueryNode(Expr):
    """Subquery used as an expression; ``single`` yields a collection."""

    plan: Plan
    concept: Optional[str]
    single: bool
    closed: bool
