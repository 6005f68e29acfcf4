# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Elementary constraint predicates written in COQL."""

from typing import Callable

from comdb import errors
from comdb.coql import ast
from comdb.coql.checker import Checker
from comdb.coql.evaluator import Evaluator, truthy
from comdb.coql.parser import parse_expression
from comdb.coql.types import QType
from comdb.model.schema import Item, Schema

LOCAL_NODES = (ast.Literal, ast.Binary, ast.Unary, ast.TupleExpr)


def _require_local(node: ast.Expr, text: str):
    if isinstance(node, ast.Var) and node.name == "this":
        return
    if isinstance(node, (ast.SlotNav, ast.IdOf)) and not node.many:
        if isinstance(node.base, ast.Var) and node.base.name == "this":
            return
    if isinstance(node, LOCAL_NODES):
        if isinstance(node, ast.Binary):
            children = (node.left, node.right)
        elif isinstance(node, ast.Unary):
            children = (node.operand,)
        elif isinstance(node, ast.TupleExpr):
            children = node.items
        else:
            children = ()
        for child in children:
            _require_local(child, text)
        return
    raise errors.NonLocalPredicate(f"'{text}' reads beyond the item's own dimensions")


def compile_predicate(schema: Schema, concept: str, text: str) -> Callable[[Item], bool]:
    """Compile a condition over one item of ``concept``.

    The condition may only read the item's own dimensions (unqualified or via
    ``this``) and its identifier.

    Raises:
        ParseError, CheckError: Invalid condition.
        NonLocalPredicate: The condition navigates beyond the item.
    """
    resolved, _ = Checker(schema).check_expression(
        parse_expression(text), {"this": QType.item(concept)}, "this"
    )
    _require_local(resolved, text)
    evaluator = Evaluator(schema)

    def test(item: Item) -> bool:
        return truthy(evaluator.eval(resolved, {"this": item.ref}))

    return test
