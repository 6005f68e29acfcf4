# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Static checking of COQL queries.

The checker resolves every name against the scope (variables, then the
implicit ``this`` dimensions, then concepts), splits de-projection chains into
dimensions and targets, rewrites the collection-versus-number shortcut into an
explicit COUNT and produces a resolved ``Plan``.

Classes:

    Frame
    Checker

"""

import logging
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

import networkx as nx

from comdb import errors
from comdb.coql import ast
from comdb.coql.printer import format_expr
from comdb.coql.types import (
    ANY,
    SCALAR,
    SCALAR_TYPE_NAMES,
    DerivedProperty,
    Kind,
    QType,
)
from comdb.model.navigate import resolve_deprojection
from comdb.model.schema import Schema

logger = logging.getLogger(__name__)

ARITHMETIC = {"+", "-", "*", "/"}
LOGICAL = {"AND", "OR"}
NUMERIC_AGGREGATES = (ast.AggFunc.SUM, ast.AggFunc.AVERAGE)


@dataclass
class Frame:
    """Variables bound by one query, filter, dot tuple or property body.

    ``implicit`` names the variable whose dimensions may be used unqualified.
    """

    variables: Dict[str, QType] = field(default_factory=dict)
    implicit: Optional[str] = None


def unique_columns(names: List[str]) -> Tuple[str, ...]:
    """Suffix repeated column names with ``_2``, ``_3``..."""
    used: Set[str] = set()
    result = []
    for name in names:
        candidate, count = name, 1
        while candidate in used:
            count += 1
            candidate = f"{name}_{count}"
        used.add(candidate)
        result.append(candidate)
    return tuple(result)


def numeric_members(schema: Schema, qtype: QType) -> bool:
    """Whether values of ``qtype`` may be summed.

    Items count when their concept has an ``int`` or ``decimal`` value type.
    Untyped collections pass here and are checked at evaluation time.
    """
    if qtype.kind in (Kind.ANY, Kind.SCALAR):
        return True
    if qtype.kind is Kind.TABLE:
        return len(qtype.columns) == 1 and numeric_members(schema, qtype.columns[0][1])
    if qtype.kind not in (Kind.ITEM, Kind.COLLECTION):
        return False
    if qtype.concept is None:
        return True
    value_type = schema.concept(qtype.concept).value_type
    return value_type is not None and value_type.numeric


class Checker:
    """Resolve surface trees against a schema and its derived properties.

    Args:
        schema (Schema): Model the names resolve against.
    """

    def __init__(self, schema: Schema):
        self.schema = schema
        self.frames: List[Frame] = []
        self._reach = sys.maxsize
        self._calls: Set[Tuple[str, str]] = set()
        self._pending: Optional[DerivedProperty] = None

    # Scope handling.

    def _push(self, frame: Frame) -> Frame:
        self.frames.append(frame)
        return frame

    def _pop(self):
        self.frames.pop()

    def _touch(self, index: int):
        self._reach = min(self._reach, index)

    def _closure(self, build: Callable[[], ast.Expr]) -> Tuple[ast.Expr, bool]:
        """Run ``build``; also report whether it only reads variables bound inside it."""
        depth = len(self.frames)
        saved, self._reach = self._reach, depth
        result = build()
        closed = self._reach >= depth
        self._reach = min(saved, self._reach)
        return result, closed

    def _lookup_variable(self, name: str) -> Optional[Tuple[int, QType]]:
        for index in range(len(self.frames) - 1, -1, -1):
            found = self.frames[index].variables.get(name)
            if found is not None:
                return index, found
        return None

    def _lookup_implicit(self, name: str) -> Optional[Tuple[ast.Expr, QType]]:
        shadowed: Set[str] = set()
        for index in range(len(self.frames) - 1, -1, -1):
            frame = self.frames[index]
            var = frame.implicit
            if var is not None and var not in shadowed:
                resolved = self._member(ast.Var(var), frame.variables[var], name)
                if resolved is not None:
                    self._touch(index)
                    return resolved
            shadowed |= set(frame.variables)
        return None

    def _member(
        self, base: ast.Expr, base_type: QType, name: str
    ) -> Optional[Tuple[ast.Expr, QType]]:
        """Dimension, column or identifier of a single item or row, if ``name`` names one."""
        if base_type.kind is Kind.ROW:
            column = base_type.column(name)
            return (ast.ColumnOf(base, name), column) if column else None
        if base_type.kind is not Kind.ITEM or base_type.concept is None:
            return None
        concept = self.schema.concept(base_type.concept)
        if name in concept.dimensions:
            domain = concept.dimensions[name].domain
            return ast.SlotNav(base, name, domain, False, False), QType.item(domain)
        if name == "id":
            return ast.IdOf(base, False), SCALAR
        return None

    # Names and types.

    def _name(self, expr: ast.Name, source: bool = False) -> Tuple[ast.Expr, QType]:
        found = self._lookup_variable(expr.ident)
        if found is not None:
            index, qtype = found
            self._touch(index)
            return ast.Var(expr.ident), qtype
        implicit = self._lookup_implicit(expr.ident)
        if implicit is not None:
            return implicit
        if self.schema.has_concept(expr.ident):
            return ast.ConceptColl(expr.ident), QType.collection(expr.ident)
        if source:
            raise errors.UnknownConcept(
                f"concept '{expr.ident}' is not defined", str(expr.span)
            )
        raise errors.UnboundVariable(f"'{expr.ident}' is not bound", str(expr.span))

    def _declared_type(
        self, type_name: str, type_arg: Optional[str], span: ast.Span
    ) -> Optional[QType]:
        """QType of a declared type; None for ``Item``, which takes the value's type."""
        if type_name.lower() in SCALAR_TYPE_NAMES:
            return SCALAR
        if type_name == "Item":
            return None
        if type_name == "Collection":
            if type_arg is not None and not self.schema.has_concept(type_arg):
                raise errors.UnknownConcept(f"concept '{type_arg}' is not defined", str(span))
            return QType.collection(type_arg)
        if not self.schema.has_concept(type_name):
            raise errors.UnknownConcept(f"type '{type_name}' is not defined", str(span))
        return QType.item(type_name)

    @staticmethod
    def _conforms(actual: QType, declared: QType) -> bool:
        if Kind.ANY in (actual.kind, declared.kind):
            return True
        if declared.kind is Kind.SCALAR:
            return actual.kind in (Kind.SCALAR, Kind.ITEM)
        if declared.kind is Kind.COLLECTION and actual.kind is Kind.TABLE:
            return len(actual.columns) == 1
        if actual.kind is not declared.kind:
            return False
        return declared.concept is None or actual.concept == declared.concept

    # Expressions.

    def expr(self, node: ast.Expr) -> Tuple[ast.Expr, QType]:
        """Resolve ``node`` in the current scope."""
        # pylint: disable=too-many-return-statements
        if isinstance(node, ast.Literal):
            return node, SCALAR
        if isinstance(node, ast.Name):
            return self._name(node)
        if isinstance(node, ast.Navigate):
            return self._navigate(node)
        if isinstance(node, ast.DotTuple):
            return self._dot_tuple(node)
        if isinstance(node, ast.Deproject):
            return self._deproject(node)
        if isinstance(node, ast.Call):
            return self._call(node)
        if isinstance(node, ast.Aggregate):
            return self._aggregate(node)
        if isinstance(node, ast.Binary):
            return self._binary(node)
        if isinstance(node, ast.Unary):
            return self._unary(node)
        if isinstance(node, ast.Filter):
            return self._filter(node)
        if isinstance(node, ast.SubQuery):
            return self._subquery(node)
        if isinstance(node, ast.MultiDeproject):
            return self._multi_deproject(node)
        if isinstance(node, ast.TupleExpr):
            items = tuple(self.expr(item)[0] for item in node.items)
            return ast.TupleExpr(items), QType(Kind.TUPLE)
        raise errors.CheckError(f"unsupported expression {type(node).__name__}")

    def _collection_operand(self, node: ast.Expr) -> Tuple[ast.Expr, QType]:
        """Resolve ``node`` as a collection; one-column tables count as collections."""
        if isinstance(node, ast.Name):
            resolved, qtype = self._name(node, source=True)
        else:
            resolved, qtype = self.expr(node)
        if qtype.kind is Kind.TABLE and len(qtype.columns) == 1:
            column_type = qtype.columns[0][1]
            return resolved, QType.collection(column_type.concept)
        return resolved, qtype

    def _target(self, node: ast.Expr) -> Tuple[ast.Expr, QType]:
        resolved, qtype = self._collection_operand(node)
        if qtype.kind is not Kind.COLLECTION or qtype.concept is None:
            raise errors.TypeMismatch(
                f"'{format_expr(node)}' is not a collection of items", str(node.span)
            )
        return resolved, qtype

    def _names_collection(self, name: str) -> bool:
        found = self._lookup_variable(name)
        if found is not None:
            return found[1].kind is Kind.COLLECTION
        return self.schema.has_concept(name)

    def _navigate(self, node: ast.Navigate) -> Tuple[ast.Expr, QType]:
        base, base_type = self.expr(node.base)
        if base_type.kind is Kind.ANY:
            return base, ANY
        if base_type.kind is Kind.TABLE and len(base_type.columns) == 1:
            base_type = QType.collection(base_type.columns[0][1].concept)
        member = self._member(base, base_type, node.name)
        if member is not None:
            return member
        if base_type.kind is Kind.COLLECTION and base_type.concept is not None:
            concept = self.schema.concept(base_type.concept)
            if node.name in concept.dimensions:
                domain = concept.dimensions[node.name].domain
                distinct = node.op is ast.NavOp.ARROW
                return (
                    ast.SlotNav(base, node.name, domain, True, distinct),
                    QType.collection(domain),
                )
            if node.name == "id":
                return ast.IdOf(base, True), QType.collection(None)
        if (
            node.op is ast.NavOp.ARROW
            and base_type.kind in (Kind.ITEM, Kind.COLLECTION)
            and self._names_collection(node.name)
        ):
            target, target_type = self._target(ast.Name(node.name, node.span))
            if target_type.concept != base_type.concept:
                raise errors.TypeMismatch(
                    f"cannot restrict {base_type} to {target_type}", str(node.span)
                )
            return ast.Restrict(base, target, base_type.many), base_type
        if base_type.kind in (Kind.ITEM, Kind.COLLECTION) and base_type.concept:
            raise errors.UnknownDimension(
                f"concept '{base_type.concept}' has no dimension '{node.name}'",
                str(node.span),
            )
        raise errors.TypeMismatch(
            f"cannot navigate '{node.name}' from a {base_type}", str(node.span)
        )

    def _dot_tuple(self, node: ast.DotTuple) -> Tuple[ast.Expr, QType]:
        base, base_type = self.expr(node.base)
        if base_type.kind not in (Kind.ITEM, Kind.COLLECTION) or not base_type.concept:
            raise errors.TypeMismatch(f"'.<' needs items, got {base_type}", str(node.span))
        self._push(Frame({"this": QType.item(base_type.concept)}, "this"))
        try:
            items = tuple(self.expr(item)[0] for item in node.items)
        finally:
            self._pop()
        many = base_type.many
        if many:
            result = QType.collection(None)
        else:
            result = SCALAR if len(items) == 1 else QType(Kind.TUPLE)
        return ast.DotMap(base, items, many), result

    def _is_target_link(self, link: ast.Expr) -> bool:
        if not isinstance(link, ast.Name):
            return True
        declared = any(
            link.ident in concept.dimensions for concept in self.schema.concepts.values()
        )
        return not declared and self._names_collection(link.ident)

    def _deproject(self, node: ast.Deproject) -> Tuple[ast.Expr, QType]:
        current, current_type = self.expr(node.base)
        dims: List[str] = []
        last = len(node.links) - 1
        for position, link in enumerate(node.links):
            if position < last and not self._is_target_link(link):
                dims.append(link.ident)
                continue
            if not dims:
                raise errors.TypeMismatch(
                    f"de-projection into '{format_expr(link)}' names no dimension",
                    str(node.span),
                )
            if current_type.kind not in (Kind.ITEM, Kind.COLLECTION) or not current_type.concept:
                raise errors.TypeMismatch(
                    f"cannot de-project from a {current_type}", str(node.span)
                )
            target, target_type = self._target(link)
            try:
                hops = resolve_deprojection(
                    self.schema, current_type.concept, dims, target_type.concept
                )
            except errors.ComdbError as exc:
                exc.location = exc.location or str(node.span)
                raise
            current = ast.DeprojectStep(current, tuple(dims), tuple(hops), target)
            current_type = target_type
            dims = []
        return current, current_type

    def _call(self, node: ast.Call) -> Tuple[ast.Expr, QType]:
        if node.base is None:
            found = self._lookup_variable("this")
            if found is None:
                raise errors.UnboundVariable(
                    f"'{node.name}()' needs an item; no 'this' is bound", str(node.span)
                )
            self._touch(found[0])
            base, base_type = ast.Var("this"), found[1]
        else:
            base, base_type = self.expr(node.base)
        if base_type.kind is Kind.ANY:
            return base, ANY
        if base_type.kind not in (Kind.ITEM, Kind.COLLECTION) or not base_type.concept:
            raise errors.TypeMismatch(
                f"'{node.name}()' needs items, got {base_type}", str(node.span)
            )
        prop = self._property(base_type.concept, node.name, node.span)
        if len(node.args) != len(prop.params):
            raise errors.TypeMismatch(
                f"{prop.owner}::{prop.name} takes {len(prop.params)} argument(s), "
                f"got {len(node.args)}",
                str(node.span),
            )
        args = []
        for arg, (param, declared) in zip(node.args, prop.params):
            resolved, actual = self.expr(arg)
            if not self._conforms(actual, declared):
                raise errors.TypeMismatch(
                    f"argument '{param}' of {prop.owner}::{prop.name} expects "
                    f"{declared}, got {actual}",
                    str(node.span),
                )
            args.append(resolved)
        self._calls.add(prop.key)
        result = prop.result
        if base_type.many and result.kind is not Kind.ANY:
            result = QType.collection(result.concept)
        return (
            ast.PropertyCall(base, prop.owner, prop.name, tuple(args), base_type.many),
            result,
        )

    def _property(self, concept: str, name: str, span: ast.Span) -> DerivedProperty:
        pending = self._pending
        if pending is not None and pending.key == (concept, name):
            return pending
        found = self.schema.derived.get(concept, {}).get(name)
        if found is None:
            raise errors.UnknownDimension(
                f"concept '{concept}' has no derived property '{name}'", str(span)
            )
        return found

    def _aggregate(self, node: ast.Aggregate) -> Tuple[ast.Expr, QType]:
        arg, arg_type = self._collection_operand(node.arg)
        if arg_type.kind not in (Kind.COLLECTION, Kind.TABLE, Kind.ANY):
            raise errors.TypeMismatch(
                f"{node.func.value} needs a collection, got {arg_type}", str(node.span)
            )
        if node.func in NUMERIC_AGGREGATES and not numeric_members(self.schema, arg_type):
            raise errors.TypeMismatch(
                f"{node.func.value} needs numbers, got {arg_type}", str(node.span)
            )
        return ast.Aggregate(node.func, arg), SCALAR

    def _count_shortcut(
        self, resolved: ast.Expr, qtype: QType, other: QType
    ) -> Tuple[ast.Expr, QType]:
        if qtype.kind in (Kind.COLLECTION, Kind.TABLE) and other.kind is Kind.SCALAR:
            return ast.Aggregate(ast.AggFunc.COUNT, resolved), SCALAR
        return resolved, qtype

    def _binary(self, node: ast.Binary) -> Tuple[ast.Expr, QType]:
        left, left_type = self.expr(node.left)
        right, right_type = self.expr(node.right)
        if node.op in LOGICAL:
            return ast.Binary(node.op, left, right), SCALAR
        if node.op in ARITHMETIC:
            for operand, qtype in ((node.left, left_type), (node.right, right_type)):
                if not self._numeric_operand(qtype):
                    raise errors.TypeMismatch(
                        f"'{format_expr(operand)}' is not a number", str(node.span)
                    )
            return ast.Binary(node.op, left, right), SCALAR
        left, left_type = self._count_shortcut(left, left_type, right_type)
        right, right_type = self._count_shortcut(right, right_type, left_type)
        for operand, qtype in ((node.left, left_type), (node.right, right_type)):
            if qtype.kind in (Kind.COLLECTION, Kind.TABLE, Kind.ROW):
                raise errors.TypeMismatch(
                    f"cannot compare '{format_expr(operand)}' ({qtype})", str(node.span)
                )
        return ast.Binary(node.op, left, right), SCALAR

    def _numeric_operand(self, qtype: QType) -> bool:
        if qtype.kind in (Kind.SCALAR, Kind.ANY):
            return True
        if qtype.kind is Kind.ITEM and qtype.concept:
            return self.schema.concept(qtype.concept).is_value
        return False

    def _unary(self, node: ast.Unary) -> Tuple[ast.Expr, QType]:
        operand, qtype = self.expr(node.operand)
        if node.op == "-" and not self._numeric_operand(qtype):
            raise errors.TypeMismatch(
                f"'{format_expr(node.operand)}' is not a number", str(node.span)
            )
        return ast.Unary(node.op, operand), SCALAR

    def _filter(self, node: ast.Filter) -> Tuple[ast.Expr, QType]:
        var = node.var or "this"
        holder: Dict[str, QType] = {}

        def build() -> ast.Expr:
            source, source_type = self._collection_operand(node.source)
            holder["type"] = source_type
            self._push(Frame({var: self._member_type(source_type, node.source)}, var))
            try:
                cond, _ = self.expr(node.cond)
            finally:
                self._pop()
            return ast.FilterNode(source, var, cond, False)

        resolved, closed = self._closure(build)
        resolved = ast.FilterNode(resolved.source, resolved.var, resolved.cond, closed)
        return resolved, holder["type"]

    def _member_type(self, qtype: QType, node: ast.Expr) -> QType:
        """Type of a variable ranging over values of type ``qtype``."""
        if qtype.kind is Kind.COLLECTION:
            return QType.item(qtype.concept) if qtype.concept else SCALAR
        if qtype.kind is Kind.TABLE:
            return QType(Kind.ROW, columns=qtype.columns)
        if qtype.kind in (Kind.ITEM, Kind.ANY):
            return qtype
        raise errors.TypeMismatch(
            f"'{format_expr(node)}' is not a collection ({qtype})",
            str(node.span),
        )

    def _subquery(self, node: ast.SubQuery) -> Tuple[ast.Expr, QType]:
        holder: Dict[str, Tuple[QType, ...]] = {}

        def build() -> ast.Expr:
            plan, column_types = self._plan(node.query)
            holder["types"] = column_types
            return ast.QueryNode(plan, None, False, False)

        resolved, closed = self._closure(build)
        plan = resolved.plan
        column_types = holder["types"]
        if len(column_types) == 1:
            concept = column_types[0].concept if column_types[0].kind is Kind.ITEM else None
            return ast.QueryNode(plan, concept, True, closed), QType.collection(concept)
        columns = tuple(zip(plan.columns, column_types))
        return ast.QueryNode(plan, None, False, closed), QType(Kind.TABLE, columns=columns)

    def _multi_deproject(self, node: ast.MultiDeproject) -> Tuple[ast.Expr, QType]:
        chains, concept = [], None
        for chain in node.chains:
            resolved, qtype = self._target(chain)
            if concept is not None and qtype.concept != concept:
                raise errors.TypeMismatch(
                    f"de-projections land in '{concept}' and '{qtype.concept}'",
                    str(node.span),
                )
            concept = qtype.concept
            chains.append(resolved)
        return ast.Intersect(concept, tuple(chains)), QType.collection(concept)

    # Statements and queries.

    def _statements(self, body: Tuple[ast.Stmt, ...], frame: Frame) -> Tuple[
        Tuple[ast.Stmt, ...], List[Tuple[ast.Expr, ...]], List[Tuple[QType, ...]]
    ]:
        resolved: List[ast.Stmt] = []
        returned: List[Tuple[ast.Expr, ...]] = []
        returned_types: List[Tuple[QType, ...]] = []
        for stmt in body:
            if isinstance(stmt, ast.Decl):
                expr, qtype = self.expr(stmt.expr)
                declared = self._declared_type(stmt.type_name, stmt.type_arg, stmt.span)
                if declared is not None and not self._conforms(qtype, declared):
                    raise errors.TypeMismatch(
                        f"'{stmt.var}' is declared {stmt.type_name} but bound to {qtype}",
                        str(stmt.span),
                    )
                if qtype.kind is Kind.TABLE and len(qtype.columns) == 1:
                    qtype = QType.collection(qtype.columns[0][1].concept)
                frame.variables[stmt.var] = qtype
                resolved.append(
                    ast.Decl(stmt.type_name, stmt.type_arg, stmt.var, expr, stmt.span)
                )
                continue
            pairs = [self.expr(value) for value in stmt.values]
            values = tuple(p[0] for p in pairs)
            returned.append(stmt.values)
            returned_types.append(tuple(p[1] for p in pairs))
            if isinstance(stmt, ast.IfReturn):
                cond, _ = self.expr(stmt.cond)
                resolved.append(ast.IfReturn(cond, values, stmt.span))
            else:
                resolved.append(ast.Return(values, stmt.span))
        if len({len(values) for values in returned}) > 1:
            raise errors.TypeMismatch("RETURN statements return different arities")
        return tuple(resolved), returned, returned_types

    def _plan(self, query: ast.Query) -> Tuple[ast.Plan, Tuple[QType, ...]]:
        # pylint: disable=too-many-locals,too-many-branches
        frame = self._push(Frame())
        try:
            sources = []
            single = len(query.sources) == 1
            for source in query.sources:
                var = source.var or ("this" if single else None)
                if var is None:
                    raise errors.CheckError(
                        f"source '{format_expr(source.expr)}' needs a variable "
                        "when several sources are given",
                        str(query.span),
                    )
                expr, qtype = self._collection_operand(source.expr)
                frame.variables[var] = self._member_type(qtype, source.expr)
                sources.append((var, expr))
            if single:
                frame.implicit = sources[0][0]
            body, returned, returned_types = self._statements(query.body, frame)
            where = self.expr(query.where)[0] if query.where is not None else None
            has_select = query.select is not None or query.star
            if returned and has_select:
                raise errors.CheckError(
                    "a query may use SELECT or RETURN in its body, not both",
                    str(query.span),
                )
            if returned:
                names = [format_expr(value) for value in returned[0]]
                plan = ast.Plan(
                    tuple(sources), body, where, None, unique_columns(names), True
                )
                return plan, returned_types[0]
            select, names, types = self._select(query, sources, frame)
            plan = ast.Plan(
                tuple(sources), body, where, tuple(select), unique_columns(names), False
            )
            return plan, tuple(types)
        finally:
            self._pop()

    def _select(
        self, query: ast.Query, sources: List[Tuple[str, ast.Expr]], frame: Frame
    ) -> Tuple[List[ast.Expr], List[str], List[QType]]:
        select: List[ast.Expr] = []
        names: List[str] = []
        types: List[QType] = []
        if query.star:
            if len(sources) != 1:
                raise errors.CheckError("SELECT * needs exactly one source", str(query.span))
            var = sources[0][0]
            var_type = frame.variables[var]
            if var_type.kind is Kind.ROW:
                for column, column_type in var_type.columns:
                    select.append(ast.ColumnOf(ast.Var(var), column))
                    names.append(column)
                    types.append(column_type)
            elif var_type.kind is Kind.ITEM:
                concept = self.schema.concept(var_type.concept)
                if concept.is_value:
                    select.append(ast.Var(var))
                    names.append(concept.name)
                    types.append(var_type)
                for name, decl in concept.dimensions.items():
                    select.append(ast.SlotNav(ast.Var(var), name, decl.domain, False, False))
                    names.append(name)
                    types.append(QType.item(decl.domain))
            else:
                select.append(ast.Var(var))
                names.append(var)
                types.append(var_type)
        elif query.select is not None:
            for item in query.select:
                expr, qtype = self.expr(item.expr)
                select.append(expr)
                names.append(item.alias or format_expr(item.expr))
                types.append(qtype)
        else:
            for var, _ in sources:
                select.append(ast.Var(var))
                names.append(var)
                types.append(frame.variables[var])
        return select, names, types

    # Entry points.

    def check_query(self, query: ast.Query) -> ast.Plan:
        plan, _ = self._plan(query)
        return plan

    def check_expression(
        self,
        expr: ast.Expr,
        bindings: Optional[Dict[str, QType]] = None,
        implicit: Optional[str] = None,
    ) -> Tuple[ast.Expr, QType]:
        """Resolve a standalone expression with ``bindings`` in scope."""
        self._push(Frame(dict(bindings or {}), implicit))
        try:
            return self.expr(expr)
        finally:
            self._pop()

    def check_definition(self, definition: ast.PropertyDef) -> DerivedProperty:
        """Resolve a derived property body with ``this`` bound to the owner.

        Raises:
            UnknownConcept: Unknown owner or parameter type.
            CheckError: The property calls itself, directly or through others.
        """
        owner = definition.owner
        if not self.schema.has_concept(owner):
            raise errors.UnknownConcept(
                f"concept '{owner}' is not defined", str(definition.span)
            )
        params = []
        for param in definition.params:
            declared = self._declared_type(param.type_name, param.type_arg, definition.span)
            params.append((param.name, declared or ANY))
        prop = DerivedProperty(owner, definition.name, tuple(params), definition=definition)
        self._pending = prop
        self._calls = set()
        frame = Frame({"this": QType.item(owner), **dict(params)}, "this")
        self._push(frame)
        try:
            body, returned, returned_types = self._statements(definition.body, frame)
        finally:
            self._pop()
            self._pending = None
        if not returned:
            raise errors.CheckError(
                f"{owner}::{definition.name} never returns", str(definition.span)
            )
        types = returned_types[0]
        prop.body = body
        prop.result = types[0] if len(types) == 1 else QType(Kind.TUPLE)
        prop.calls = frozenset(self._calls)
        self._reject_recursion(prop)
        logger.debug("checked %s::%s -> %s", owner, definition.name, prop.result)
        return prop

    def _reject_recursion(self, prop: DerivedProperty):
        graph = nx.DiGraph()
        for props in self.schema.derived.values():
            for other in props.values():
                if other.key != prop.key:
                    graph.add_edges_from((other.key, callee) for callee in other.calls)
        graph.add_edges_from((prop.key, callee) for callee in prop.calls)
        try:
            cycle = nx.find_cycle(graph, prop.key)
        except (nx.NetworkXNoCycle, nx.NodeNotFound):
            return
        names = " -> ".join(f"{edge[0][0]}::{edge[0][1]}" for edge in cycle)
        raise errors.CheckError(f"recursive derived property: {names}")


def check(query: ast.Query, schema: Schema) -> ast.Plan:
    """Resolve a parsed query against ``schema``.

    Raises:
        UnknownConcept, UnknownDimension, AmbiguousDeprojection, TypeMismatch,
        UnboundVariable, CheckError.
    """
    return Checker(schema).check_query(query)
