# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Recursive-descent COQL parser.

Grammar (keywords case-insensitive)::

    query      := FROM sources body? (WHERE expr)? (SELECT selectList)?
                | SELECT selectList FROM sources body? (WHERE expr)?
                | FORALL sources body
    sources    := source | '(' source (',' source)* ')'
    source     := postfix IDENT?
    selectList := '*' | item (',' item)* | '(' item (',' item)* ')'
    item       := expr (AS IDENT)?
    body       := '{' stmt* '}'
    stmt       := type IDENT '=' expr ';'
                | IF '(' expr ')' THEN? RETURN values ';'
                | RETURN values ';'
    type       := IDENT ('<' IDENT '>')?
    expr       := or ; or := and (OR and)* ; and := not (AND not)*
    not        := NOT not | cmp ; cmp := add (cmpOp add)?
    add        := mul (('+'|'-') mul)* ; mul := unary (('*'|'/') unary)*
    unary      := '-' unary | postfix
    postfix    := primary ( '->' IDENT | '.' IDENT args? | '.<' add (',' add)* '>'
                          | ('<-' (IDENT | primary))+ )*
    primary    := literal | IDENT args? | AGG '(' expr ')' | '(' query ')'
                | '(' postfix IDENT? '|' expr ')' | '(' expr (',' expr)* ')'
                | '[' postfix (AND postfix)* ']' | query
    definition := IDENT '::' IDENT '(' params? ')' body

Classes:

    Parser

"""

from typing import List, Optional, Tuple

from comdb import errors
from comdb.coql import ast
from comdb.coql.lexer import Token, TokenType, tokenize

AGGREGATES = {func.value: func for func in ast.AggFunc}

COMPARISONS = {
    TokenType.EQ: "==",
    TokenType.ASSIGN: "==",
    TokenType.NE: "!=",
    TokenType.LT: "<",
    TokenType.LE: "<=",
    TokenType.GT: ">",
    TokenType.GE: ">=",
}

CLAUSE_END = {
    TokenType.EOF,
    TokenType.SEMICOLON,
    TokenType.RPAREN,
    TokenType.RBRACE,
    TokenType.RBRACKET,
    TokenType.COMMA,
}


class Parser:
    """COQL parser over a token list."""

    def __init__(self, text: str):
        self.tokens: List[Token] = tokenize(text)
        self.pos = 0

    # Token helpers.

    def _current(self) -> Token:
        return self.tokens[self.pos]

    def _peek(self, offset: int = 1) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def _check(self, *types: TokenType) -> bool:
        return self._current().type in types

    def _advance(self) -> Token:
        token = self._current()
        if token.type is not TokenType.EOF:
            self.pos += 1
        return token

    def _match(self, *types: TokenType) -> Optional[Token]:
        if self._check(*types):
            return self._advance()
        return None

    def _error(self, expected: Tuple[TokenType, ...] = ()) -> errors.ParseError:
        token = self._current()
        found = "end of input" if token.type is TokenType.EOF else repr(token.value)
        return errors.ParseError(
            f"unexpected {found}",
            token.location,
            frozenset(t.name for t in expected),
        )

    def _expect(self, *types: TokenType) -> Token:
        if self._check(*types):
            return self._advance()
        raise self._error(types)

    def _span(self) -> ast.Span:
        token = self._current()
        return ast.Span(token.line, token.column)

    def _finish(self):
        self._match(TokenType.SEMICOLON)
        if not self._check(TokenType.EOF):
            raise self._error((TokenType.EOF,))

    # Entry points.

    def parse_query(self) -> ast.Query:
        query = self._query()
        self._finish()
        return query

    def parse_expression(self) -> ast.Expr:
        expr = self._expr()
        self._finish()
        return expr

    def parse_definition(self) -> ast.PropertyDef:
        span = self._span()
        owner = self._expect(TokenType.IDENT).value
        self._expect(TokenType.DCOLON)
        name = self._expect(TokenType.IDENT).value
        self._expect(TokenType.LPAREN)
        params = []
        if not self._check(TokenType.RPAREN):
            params.append(self._param())
            while self._match(TokenType.COMMA):
                params.append(self._param())
        self._expect(TokenType.RPAREN)
        body = self._body()
        self._finish()
        return ast.PropertyDef(owner, name, tuple(params), body, span)

    def _param(self) -> ast.Param:
        type_name, type_arg = self._type()
        return ast.Param(type_name, type_arg, self._expect(TokenType.IDENT).value)

    # Queries.

    def _query(self) -> ast.Query:
        span = self._span()
        if self._match(TokenType.SELECT):
            star, select = self._select_list()
            self._expect(TokenType.FROM)
            sources = self._sources()
            body = self._body() if self._check(TokenType.LBRACE) else ()
            where = self._expr() if self._match(TokenType.WHERE) else None
            return ast.Query(sources, body, where, select, star, False, span)
        if self._match(TokenType.FORALL):
            sources = self._sources()
            body = self._body()
            return ast.Query(sources, body, None, None, False, True, span)
        self._expect(TokenType.FROM, TokenType.SELECT, TokenType.FORALL)
        sources = self._sources()
        body = self._body() if self._check(TokenType.LBRACE) else ()
        where = self._expr() if self._match(TokenType.WHERE) else None
        star, select = False, None
        if self._match(TokenType.SELECT):
            star, select = self._select_list()
        return ast.Query(sources, body, where, select, star, False, span)

    def _sources(self) -> Tuple[ast.Source, ...]:
        if not self._check(TokenType.LPAREN):
            return (self._source(),)
        # '(' opens either a source list or a single parenthesized source.
        saved = self.pos
        try:
            return self._source_list()
        except errors.ParseError as exc:
            list_error, list_reach = exc, self.pos
        self.pos = saved
        try:
            return (self._source(),)
        except errors.ParseError:
            if self.pos < list_reach:
                raise list_error from None
            raise

    def _source_list(self) -> Tuple[ast.Source, ...]:
        self._expect(TokenType.LPAREN)
        sources = [self._source()]
        while self._match(TokenType.COMMA):
            sources.append(self._source())
        self._expect(TokenType.RPAREN)
        if len(sources) == 1 and sources[0].var is None:
            raise self._error()
        return tuple(sources)

    def _source(self) -> ast.Source:
        expr = self._postfix()
        var = self._match(TokenType.IDENT)
        return ast.Source(expr, var.value if var else None)

    def _select_list(self) -> Tuple[bool, Optional[Tuple[ast.SelectItem, ...]]]:
        if self._match(TokenType.STAR):
            return True, None
        items = [self._select_item()]
        while self._match(TokenType.COMMA):
            items.append(self._select_item())
        if len(items) == 1 and items[0].alias is None:
            only = items[0].expr
            if isinstance(only, ast.TupleExpr):
                items = [ast.SelectItem(expr) for expr in only.items]
        return False, tuple(items)

    def _select_item(self) -> ast.SelectItem:
        expr = self._expr()
        alias = None
        if self._match(TokenType.AS):
            alias = self._expect(TokenType.IDENT).value
        return ast.SelectItem(expr, alias)

    def _body(self) -> Tuple[ast.Stmt, ...]:
        self._expect(TokenType.LBRACE)
        statements = []
        while not self._match(TokenType.RBRACE):
            statements.append(self._statement())
        return tuple(statements)

    def _statement(self) -> ast.Stmt:
        span = self._span()
        if self._match(TokenType.IF):
            self._expect(TokenType.LPAREN)
            cond = self._expr()
            self._expect(TokenType.RPAREN)
            self._match(TokenType.THEN)
            self._expect(TokenType.RETURN)
            values = self._values()
            self._expect(TokenType.SEMICOLON)
            return ast.IfReturn(cond, values, span)
        if self._match(TokenType.RETURN):
            values = self._values()
            self._expect(TokenType.SEMICOLON)
            return ast.Return(values, span)
        if self._check(TokenType.IDENT):
            type_name, type_arg = self._type()
            var = self._expect(TokenType.IDENT).value
            self._expect(TokenType.ASSIGN)
            expr = self._expr()
            self._expect(TokenType.SEMICOLON)
            return ast.Decl(type_name, type_arg, var, expr, span)
        raise self._error((TokenType.IF, TokenType.RETURN, TokenType.IDENT))

    def _type(self) -> Tuple[str, Optional[str]]:
        type_name = self._expect(TokenType.IDENT).value
        type_arg = None
        if self._match(TokenType.LT):
            type_arg = self._expect(TokenType.IDENT).value
            self._expect(TokenType.GT)
        return type_name, type_arg

    def _values(self) -> Tuple[ast.Expr, ...]:
        expr = self._expr()
        if isinstance(expr, ast.TupleExpr):
            return expr.items
        return (expr,)

    # Expressions, lowest precedence first.

    def _expr(self) -> ast.Expr:
        return self._or()

    def _or(self) -> ast.Expr:
        left = self._and()
        while self._check(TokenType.OR):
            span = self._span()
            self._advance()
            left = ast.Binary("OR", left, self._and(), span)
        return left

    def _and(self) -> ast.Expr:
        left = self._not()
        while self._check(TokenType.AND):
            span = self._span()
            self._advance()
            left = ast.Binary("AND", left, self._not(), span)
        return left

    def _not(self) -> ast.Expr:
        if self._check(TokenType.NOT):
            span = self._span()
            self._advance()
            return ast.Unary("NOT", self._not(), span)
        return self._comparison()

    def _comparison(self) -> ast.Expr:
        left = self._additive()
        if self._current().type in COMPARISONS:
            span = self._span()
            op = COMPARISONS[self._advance().type]
            left = ast.Binary(op, left, self._additive(), span)
        return left

    def _additive(self) -> ast.Expr:
        left = self._multiplicative()
        while self._check(TokenType.PLUS, TokenType.MINUS):
            span = self._span()
            op = self._advance().value
            left = ast.Binary(op, left, self._multiplicative(), span)
        return left

    def _multiplicative(self) -> ast.Expr:
        left = self._unary()
        while self._check(TokenType.STAR, TokenType.SLASH):
            span = self._span()
            op = self._advance().value
            left = ast.Binary(op, left, self._unary(), span)
        return left

    def _unary(self) -> ast.Expr:
        if self._check(TokenType.MINUS):
            span = self._span()
            self._advance()
            return ast.Unary("-", self._unary(), span)
        return self._postfix()

    def _postfix(self) -> ast.Expr:
        expr = self._primary()
        while True:
            span = self._span()
            if self._match(TokenType.ARROW):
                name = self._expect(TokenType.IDENT).value
                expr = ast.Navigate(expr, ast.NavOp.ARROW, name, span)
            elif self._match(TokenType.DOT):
                name = self._expect(TokenType.IDENT).value
                if self._check(TokenType.LPAREN):
                    expr = ast.Call(expr, name, self._args(), span)
                else:
                    expr = ast.Navigate(expr, ast.NavOp.DOT, name, span)
            elif self._match(TokenType.DOT_LT):
                items = [self._additive()]
                while self._match(TokenType.COMMA):
                    items.append(self._additive())
                self._expect(TokenType.GT)
                expr = ast.DotTuple(expr, tuple(items), span)
            elif self._check(TokenType.BACKARROW):
                links = []
                while self._match(TokenType.BACKARROW):
                    if self._check(TokenType.IDENT):
                        token = self._advance()
                        links.append(ast.Name(token.value, ast.Span(token.line, token.column)))
                    else:
                        links.append(self._primary())
                expr = ast.Deproject(expr, tuple(links), span)
            else:
                return expr

    def _args(self) -> Tuple[ast.Expr, ...]:
        self._expect(TokenType.LPAREN)
        args = []
        if not self._check(TokenType.RPAREN):
            args.append(self._expr())
            while self._match(TokenType.COMMA):
                args.append(self._expr())
        self._expect(TokenType.RPAREN)
        return tuple(args)

    def _primary(self) -> ast.Expr:
        token = self._current()
        span = self._span()
        if token.type in (TokenType.INTEGER, TokenType.DECIMAL, TokenType.STRING):
            self._advance()
            return ast.Literal(token.value, span)
        if self._match(TokenType.NULL):
            return ast.Literal(None, span)
        if self._match(TokenType.TRUE):
            return ast.Literal(True, span)
        if self._match(TokenType.FALSE):
            return ast.Literal(False, span)
        if token.type in (TokenType.FROM, TokenType.SELECT, TokenType.FORALL):
            return ast.SubQuery(self._query(), span)
        if token.type is TokenType.IDENT:
            self._advance()
            if self._check(TokenType.LPAREN):
                func = AGGREGATES.get(token.value.upper())
                if func is not None:
                    self._advance()
                    arg = self._expr()
                    self._expect(TokenType.RPAREN)
                    return ast.Aggregate(func, arg, span)
                return ast.Call(None, token.value, self._args(), span)
            return ast.Name(token.value, span)
        if self._match(TokenType.LBRACKET):
            chains = [self._postfix()]
            while self._match(TokenType.AND):
                chains.append(self._postfix())
            self._expect(TokenType.RBRACKET)
            return ast.MultiDeproject(tuple(chains), span)
        if self._match(TokenType.LPAREN):
            return self._parenthesized(span)
        raise self._error(
            (
                TokenType.IDENT,
                TokenType.INTEGER,
                TokenType.DECIMAL,
                TokenType.STRING,
                TokenType.LPAREN,
                TokenType.LBRACKET,
            )
        )

    def _parenthesized(self, span: ast.Span) -> ast.Expr:
        if self._check(TokenType.FROM, TokenType.SELECT, TokenType.FORALL):
            query = self._query()
            self._expect(TokenType.RPAREN)
            return ast.SubQuery(query, span)
        first = self._expr()
        var = None
        if self._check(TokenType.IDENT) and self._peek().type is TokenType.BAR:
            var = self._advance().value
        if self._match(TokenType.BAR):
            cond = self._expr()
            self._expect(TokenType.RPAREN)
            return ast.Filter(first, var, cond, span)
        items = [first]
        while self._match(TokenType.COMMA):
            items.append(self._expr())
        self._expect(TokenType.RPAREN, TokenType.COMMA, TokenType.BAR)
        if len(items) == 1:
            return first
        return ast.TupleExpr(tuple(items), span)


def parse(text: str) -> ast.Query:
    """Parse a COQL query.

    Raises:
        LexError, ParseError: With ``line:col`` and the expected token kinds.
    """
    return Parser(text).parse_query()


def parse_expression(text: str) -> ast.Expr:
    return Parser(text).parse_expression()


def parse_definition(text: str) -> ast.PropertyDef:
    return Parser(text).parse_definition()
