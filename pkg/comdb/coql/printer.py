# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Canonical COQL text for surface syntax trees.

The output always uses the FROM-first clause order and reparses to an equal tree.
"""

from decimal import Decimal
from typing import Any

from comdb.coql import ast

BINARY_PRECEDENCE = {
    "OR": 1,
    "AND": 2,
    "==": 4,
    "!=": 4,
    "<": 4,
    "<=": 4,
    ">": 4,
    ">=": 4,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
}
COMPARISON = 4
POSTFIX = 8
PRIMARY = 9


def format_literal(value: Any) -> str:
    if value is None:
        return "NULL"
    if value is True:
        return "TRUE"
    if value is False:
        return "FALSE"
    if isinstance(value, str):
        return "'" + value.replace("'", "''") + "'"
    if isinstance(value, Decimal):
        return format(value, "f")
    return str(value)


def _precedence(expr: ast.Expr) -> int:
    if isinstance(expr, ast.Binary):
        return BINARY_PRECEDENCE[expr.op]
    if isinstance(expr, ast.Unary):
        return 3 if expr.op == "NOT" else 7
    if isinstance(expr, (ast.Navigate, ast.DotTuple, ast.Deproject)):
        return POSTFIX
    if isinstance(expr, ast.Call) and expr.base is not None:
        return POSTFIX
    if isinstance(expr, ast.Literal) and isinstance(expr.value, (int, Decimal)):
        # Negative numbers print with a sign and bind like unary minus.
        if not isinstance(expr.value, bool) and expr.value < 0:
            return 7
    return PRIMARY


def format_expr(expr: ast.Expr, min_precedence: int = 0) -> str:
    """Render ``expr``, parenthesized when it binds looser than ``min_precedence``."""
    text = _render(expr)
    if _precedence(expr) < min_precedence:
        return f"({text})"
    return text


def _postfix_base(expr: ast.Expr) -> str:
    return format_expr(expr, POSTFIX)


def _render(expr: ast.Expr) -> str:
    # pylint: disable=too-many-return-statements,too-many-branches
    if isinstance(expr, ast.Literal):
        return format_literal(expr.value)
    if isinstance(expr, ast.Name):
        return expr.ident
    if isinstance(expr, ast.Binary):
        precedence = BINARY_PRECEDENCE[expr.op]
        left_min = precedence + 1 if precedence == COMPARISON else precedence
        left = format_expr(expr.left, left_min)
        right = format_expr(expr.right, precedence + 1)
        return f"{left} {expr.op} {right}"
    if isinstance(expr, ast.Unary):
        if expr.op == "NOT":
            return f"NOT {format_expr(expr.operand, 3)}"
        return f"-{format_expr(expr.operand, 7)}"
    if isinstance(expr, ast.Navigate):
        if expr.op is ast.NavOp.DOT:
            return f"{_postfix_base(expr.base)}.{expr.name}"
        return f"{_postfix_base(expr.base)} -> {expr.name}"
    if isinstance(expr, ast.DotTuple):
        items = ", ".join(format_expr(item, 5) for item in expr.items)
        return f"{_postfix_base(expr.base)}.<{items}>"
    if isinstance(expr, ast.Deproject):
        base = _postfix_base(expr.base)
        if isinstance(expr.base, ast.Deproject):
            base = f"({base})"
        links = " <- ".join(
            link.ident if isinstance(link, ast.Name) else format_expr(link, PRIMARY)
            for link in expr.links
        )
        return f"{base} <- {links}"
    if isinstance(expr, ast.Call):
        args = ", ".join(format_expr(arg) for arg in expr.args)
        if expr.base is None:
            return f"{expr.name}({args})"
        return f"{_postfix_base(expr.base)}.{expr.name}({args})"
    if isinstance(expr, ast.Aggregate):
        return f"{expr.func.value}({format_expr(expr.arg)})"
    if isinstance(expr, ast.Filter):
        var = f" {expr.var}" if expr.var else ""
        return f"({format_expr(expr.source)}{var} | {format_expr(expr.cond)})"
    if isinstance(expr, ast.SubQuery):
        return f"({format_query(expr.query)})"
    if isinstance(expr, ast.MultiDeproject):
        return "[" + " AND ".join(_postfix_base(c) for c in expr.chains) + "]"
    if isinstance(expr, ast.TupleExpr):
        return "(" + ", ".join(format_expr(item) for item in expr.items) + ")"
    raise TypeError(f"cannot print {type(expr).__name__}")


def _format_source(source: ast.Source) -> str:
    text = _postfix_base(source.expr)
    return f"{text} {source.var}" if source.var else text


def _format_values(values) -> str:
    if len(values) == 1:
        return format_expr(values[0])
    return "(" + ", ".join(format_expr(v) for v in values) + ")"


def format_statement(stmt: ast.Stmt) -> str:
    if isinstance(stmt, ast.Decl):
        type_text = stmt.type_name
        if stmt.type_arg:
            type_text += f"<{stmt.type_arg}>"
        return f"{type_text} {stmt.var} = {format_expr(stmt.expr)};"
    if isinstance(stmt, ast.IfReturn):
        return f"IF ({format_expr(stmt.cond)}) RETURN {_format_values(stmt.values)};"
    return f"RETURN {_format_values(stmt.values)};"


def format_body(body) -> str:
    return "{ " + " ".join(format_statement(s) for s in body) + " }"


def format_query(query: ast.Query) -> str:
    """Canonical text of a query."""
    if len(query.sources) == 1:
        sources = _format_source(query.sources[0])
    else:
        sources = "(" + ", ".join(_format_source(s) for s in query.sources) + ")"
    parts = ["FORALL" if query.forall else "FROM", sources]
    if query.body or query.forall:
        parts.append(format_body(query.body))
    if query.where is not None:
        parts.extend(["WHERE", format_expr(query.where)])
    if query.star:
        parts.append("SELECT *")
    elif query.select is not None:
        items = []
        for item in query.select:
            text = format_expr(item.expr)
            items.append(f"{text} AS {item.alias}" if item.alias else text)
        parts.extend(["SELECT", ", ".join(items)])
    return " ".join(parts)


def format_definition(definition: ast.PropertyDef) -> str:
    params = []
    for param in definition.params:
        type_text = param.type_name
        if param.type_arg:
            type_text += f"<{param.type_arg}>"
        params.append(f"{type_text} {param.name}")
    return (
        f"{definition.owner}::{definition.name}({', '.join(params)}) "
        f"{format_body(definition.body)}"
    )
