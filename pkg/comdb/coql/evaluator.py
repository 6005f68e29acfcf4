# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Nested-loop evaluation of resolved COQL plans.

Classes:

    ResultTable
    Evaluator

"""

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from comdb import errors
from comdb.coql import ast
from comdb.model import navigate
from comdb.model.navigate import Collection, ReverseIndex
from comdb.model.propagate import ConstraintSet, propagate_down
from comdb.model.schema import ItemRef, Schema

logger = logging.getLogger(__name__)

Env = Dict[str, Any]


@dataclass
class ResultTable:
    """Query output: unique column names and rectangular rows."""

    columns: Tuple[str, ...]
    rows: List[Tuple[Any, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> List[Any]:
        position = self.columns.index(name)
        return [row[position] for row in self.rows]

    def as_dicts(self) -> List[Dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def truthy(value: Any) -> bool:
    if value is None:
        return False
    if isinstance(value, (Collection, ResultTable)):
        return len(value) > 0
    return bool(value)


class Evaluator:
    """Evaluate resolved trees over a schema snapshot.

    Args:
        schema (Schema): Frozen model.
        index (Optional[ReverseIndex]): Reverse index for de-projection; built lazily
            over ``schema`` when omitted.
    """

    def __init__(self, schema: Schema, index: Optional[ReverseIndex] = None):
        self.schema = schema
        self.index = index or ReverseIndex(schema)
        self._cache: Dict[Any, Any] = {}
        self._handlers: Dict[type, Callable[[Any, Env], Any]] = {
            ast.Literal: lambda node, env: node.value,
            ast.Var: self._var,
            ast.ConceptColl: self._concept,
            ast.SlotNav: self._slot,
            ast.IdOf: self._id,
            ast.ColumnOf: lambda node, env: self.eval(node.base, env)[node.column],
            ast.Restrict: self._restrict,
            ast.DeprojectStep: self._deproject,
            ast.Intersect: self._intersect,
            ast.DotMap: self._dot_map,
            ast.PropertyCall: self._property,
            ast.FilterNode: self._filter,
            ast.QueryNode: self._query,
            ast.Aggregate: self._aggregate,
            ast.Binary: self._binary,
            ast.Unary: self._unary,
            ast.TupleExpr: lambda node, env: tuple(self.eval(i, env) for i in node.items),
        }

    def eval(self, node: ast.Expr, env: Env) -> Any:
        handler = self._handlers.get(type(node))
        if handler is None:
            raise errors.EvalError(f"cannot evaluate {type(node).__name__}")
        return handler(node, env)

    # Values.

    def deref(self, value: Any) -> Any:
        """Literal of a value item; other values unchanged."""
        if isinstance(value, ItemRef) and self.schema.concept(value.concept).is_value:
            return self.schema.value_of(value)
        return value

    def members(self, value: Any) -> List[Any]:
        if value is None:
            return []
        if isinstance(value, Collection):
            return list(value.members)
        if isinstance(value, ResultTable):
            if len(value.columns) == 1:
                return [row[0] for row in value.rows]
            return value.as_dicts()
        if isinstance(value, (list, tuple)):
            return list(value)
        return [value]

    def _as_collection(self, value: Any, concept: Optional[str]) -> Collection:
        if isinstance(value, Collection):
            return value
        if isinstance(value, ItemRef):
            return Collection(value.concept, [value])
        return Collection(concept, self.members(value))

    # Handlers.

    def _var(self, node: ast.Var, env: Env) -> Any:
        try:
            return env[node.name]
        except KeyError as exc:
            raise errors.UnboundVariable(f"'{node.name}' is not bound") from exc

    def _concept(self, node: ast.ConceptColl, _env: Env) -> Collection:
        key = ("concept", node.concept)
        if key not in self._cache:
            self._cache[key] = Collection.of_concept(self.schema, node.concept)
        return self._cache[key]

    def _slot(self, node: ast.SlotNav, env: Env) -> Any:
        base = self.eval(node.base, env)
        if not node.many:
            if base is None:
                return None
            return self.schema.get_slot(base, node.dim)
        source = self._as_collection(base, None)
        if node.distinct:
            return navigate.project(self.schema, source, node.dim)
        return navigate.dot(self.schema, source, node.dim).collection

    def _id(self, node: ast.IdOf, env: Env) -> Any:
        base = self.eval(node.base, env)
        if not node.many:
            return base.id if isinstance(base, ItemRef) else None
        return Collection(None, [m.id for m in self.members(base)])

    def _restrict(self, node: ast.Restrict, env: Env) -> Any:
        base = self.eval(node.base, env)
        allowed = set(self.members(self.eval(node.target, env)))
        if not node.many:
            return base if base in allowed else None
        collection = self._as_collection(base, None)
        return Collection(collection.concept, [m for m in collection if m in allowed])

    def _deproject(self, node: ast.DeprojectStep, env: Env) -> Collection:
        source = self._as_collection(self.eval(node.base, env), None)
        if isinstance(node.target, ast.ConceptColl):
            target: Any = node.target.concept
        else:
            target = self._as_collection(self.eval(node.target, env), node.hops[-1])
        return navigate.deproject(self.schema, source, node.dims, target, self.index)

    def _intersect(self, node: ast.Intersect, env: Env) -> Collection:
        results = [self.members(self.eval(chain, env)) for chain in node.chains]
        common = set(results[0])
        for other in results[1:]:
            common &= set(other)
        return Collection(node.concept, [m for m in dict.fromkeys(results[0]) if m in common])

    def _dot_map(self, node: ast.DotMap, env: Env) -> Any:
        def one(member: Any) -> Any:
            scope = {**env, "this": member}
            values = tuple(self.eval(item, scope) for item in node.items)
            return values[0] if len(values) == 1 else values

        base = self.eval(node.base, env)
        if not node.many:
            return one(base) if base is not None else None
        return Collection(None, [one(m) for m in self.members(base)])

    def _property(self, node: ast.PropertyCall, env: Env) -> Any:
        prop = self.schema.derived[node.owner][node.name]
        args = [self.eval(arg, env) for arg in node.args]

        def call(this: Any) -> Any:
            scope = {"this": this}
            scope.update(zip((name for name, _ in prop.params), args))
            return self.run_body(prop.body, scope)

        base = self.eval(node.base, env)
        if not node.many:
            return call(base) if base is not None else None
        found: List[Any] = []
        concept = None
        for member in self.members(base):
            result = call(member)
            if isinstance(result, Collection):
                concept = concept or result.concept
                found.extend(result.members)
            elif result is not None:
                concept = concept or getattr(result, "concept", None)
                found.append(result)
        return Collection(concept, list(dict.fromkeys(found)))

    def _filter(self, node: ast.FilterNode, env: Env) -> Any:
        key = id(node)
        if node.closed and key in self._cache:
            return self._cache[key]
        source = self.eval(node.source, env)
        kept = [
            member
            for member in self.members(source)
            if truthy(self.eval(node.cond, {**env, node.var: member}))
        ]
        if isinstance(source, ResultTable):
            result: Any = ResultTable(source.columns, [tuple(m.values()) for m in kept])
        else:
            concept = source.concept if isinstance(source, Collection) else None
            result = Collection(concept, kept)
        if node.closed:
            self._cache[key] = result
        return result

    def _query(self, node: ast.QueryNode, env: Env) -> Any:
        key = id(node)
        if node.closed and key in self._cache:
            return self._cache[key]
        table = self.run_plan(node.plan, env)
        result: Any = table
        if node.single:
            result = Collection(node.concept, [row[0] for row in table.rows])
        if node.closed:
            self._cache[key] = result
        return result

    def _aggregate(self, node: ast.Aggregate, env: Env) -> Any:
        values = self.members(self.eval(node.arg, env))
        if node.func in (ast.AggFunc.COUNT, ast.AggFunc.SIZE):
            return len(values)
        numbers = [self.deref(v) for v in values]
        numbers = [n for n in numbers if n is not None]
        for number in numbers:
            if isinstance(number, bool) or not isinstance(number, (int, Decimal)):
                raise errors.TypeMismatch(f"{node.func.value} over non-numeric value '{number}'")
        if node.func is ast.AggFunc.SUM:
            return sum(numbers, 0)
        if not numbers:
            raise errors.EvalError("AVERAGE over an empty collection")
        return Decimal(sum(numbers, 0)) / Decimal(len(numbers))

    def _binary(self, node: ast.Binary, env: Env) -> Any:
        if node.op == "AND":
            return truthy(self.eval(node.left, env)) and truthy(self.eval(node.right, env))
        if node.op == "OR":
            return truthy(self.eval(node.left, env)) or truthy(self.eval(node.right, env))
        left = self.eval(node.left, env)
        right = self.eval(node.right, env)
        if node.op in ("+", "-", "*", "/"):
            return arithmetic(node.op, self.deref(left), self.deref(right))
        return compare(node.op, self.deref(left), self.deref(right))

    def _unary(self, node: ast.Unary, env: Env) -> Any:
        value = self.eval(node.operand, env)
        if node.op == "NOT":
            return not truthy(value)
        value = self.deref(value)
        if value is None:
            raise errors.NullNavigation("negation of null")
        return -value

    # Plans and bodies.

    def run_body(self, body: Iterable[ast.Stmt], env: Env) -> Any:
        """Run property-body statements; the value of the first RETURN taken."""
        for values in self._statements(body, env):
            return values[0] if len(values) == 1 else values
        return None

    def _statements(self, body: Iterable[ast.Stmt], env: Env) -> List[Tuple[Any, ...]]:
        """Execute statements in ``env`` (mutated by declarations); returned rows."""
        for stmt in body:
            if isinstance(stmt, ast.Decl):
                env[stmt.var] = self.eval(stmt.expr, env)
            elif isinstance(stmt, ast.IfReturn):
                if truthy(self.eval(stmt.cond, env)):
                    return [tuple(self.eval(v, env) for v in stmt.values)]
            else:
                return [tuple(self.eval(v, env) for v in stmt.values)]
        return []

    def run_plan(self, plan: ast.Plan, env: Optional[Env] = None) -> ResultTable:
        """Nested loops over the sources in order, then body, WHERE and SELECT."""
        table = ResultTable(plan.columns)
        self._loop(plan, 0, dict(env or {}), table)
        return table

    def _loop(self, plan: ast.Plan, position: int, env: Env, table: ResultTable):
        if position == len(plan.sources):
            self._emit(plan, env, table)
            return
        var, expr = plan.sources[position]
        for member in self.members(self.eval(expr, env)):
            self._loop(plan, position + 1, {**env, var: member}, table)

    def _emit(self, plan: ast.Plan, env: Env, table: ResultTable):
        scope = dict(env)
        returned = self._statements(plan.body, scope)
        if plan.where is not None and not truthy(self.eval(plan.where, scope)):
            return
        if plan.returns:
            table.rows.extend(returned)
        else:
            table.rows.append(tuple(self.eval(expr, scope) for expr in plan.select))


def compare(op: str, left: Any, right: Any) -> bool:
    """Compare dereferenced operands; null compares false except with ``==``/``!=`` null."""
    if left is None or right is None:
        if op == "==":
            return left is None and right is None
        if op == "!=":
            return (left is None) != (right is None)
        return False
    if isinstance(left, ItemRef) and isinstance(right, str):
        left = left.id
    elif isinstance(right, ItemRef) and isinstance(left, str):
        right = right.id
    if op == "==":
        return left == right
    if op == "!=":
        return left != right
    try:
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        return left >= right
    except TypeError as exc:
        raise errors.EvalError(
            f"cannot order {type(left).__name__} and {type(right).__name__}"
        ) from exc


def arithmetic(op: str, left: Any, right: Any) -> Any:
    """Exact arithmetic; integers stay integral except under division."""
    if left is None or right is None:
        raise errors.NullNavigation(f"arithmetic '{op}' on null")
    if isinstance(left, ItemRef) or isinstance(right, ItemRef):
        raise errors.EvalError(f"arithmetic '{op}' on an entity item")
    if isinstance(left, Decimal) or isinstance(right, Decimal) or op == "/":
        left, right = Decimal(left), Decimal(right)
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if right == 0:
        raise errors.DivisionByZero("division by zero")
    return left / right


def scoped_schema(schema: Schema, constraints: Optional[ConstraintSet]) -> Schema:
    """Snapshot of ``schema`` without the items prohibited by ``constraints``.

    Constraints are propagated down first, so sub-items of prohibited items
    disappear as well.
    """
    if constraints is None or not constraints.maps:
        return schema if schema.frozen else schema.snapshot()
    keep = propagate_down(schema, constraints).keep()
    restricted = schema.restrict(keep)
    restricted.frozen = True
    logger.debug(
        "scoped evaluation keeps %d of %d items",
        restricted.count_items(),
        schema.count_items(),
    )
    return restricted


def evaluate(
    plan: ast.Plan, schema: Schema, constraints: Optional[ConstraintSet] = None
) -> ResultTable:
    """Evaluate a checked plan over a snapshot of ``schema``.

    Args:
        plan (Plan): Output of ``check``.
        schema (Schema): Model; never mutated.
        constraints (Optional[ConstraintSet]): Query-scoped constraints.

    Raises:
        NullNavigation, DivisionByZero, EvalError.
    """
    snapshot = scoped_schema(schema, constraints)
    table = Evaluator(snapshot).run_plan(plan)
    logger.debug("query produced %d row(s)", len(table))
    return table
