# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""COQL tokenizer.

Classes:

    TokenType
    Token
    Lexer

"""

from dataclasses import dataclass
from decimal import Decimal
from enum import Enum, auto
from typing import Any, List, Optional

from comdb import errors


class TokenType(Enum):
    """COQL token types."""

    # Literals
    IDENT = auto()
    INTEGER = auto()
    DECIMAL = auto()
    STRING = auto()

    # Keywords
    FROM = auto()
    SELECT = auto()
    WHERE = auto()
    FORALL = auto()
    IF = auto()
    THEN = auto()
    RETURN = auto()
    AND = auto()
    OR = auto()
    NOT = auto()
    AS = auto()
    NULL = auto()
    TRUE = auto()
    FALSE = auto()

    # Navigation
    ARROW = auto()
    BACKARROW = auto()
    DOT = auto()
    DOT_LT = auto()
    DCOLON = auto()
    BAR = auto()

    # Operators
    PLUS = auto()
    MINUS = auto()
    STAR = auto()
    SLASH = auto()
    EQ = auto()
    NE = auto()
    LT = auto()
    LE = auto()
    GT = auto()
    GE = auto()
    ASSIGN = auto()

    # Punctuation
    LPAREN = auto()
    RPAREN = auto()
    LBRACE = auto()
    RBRACE = auto()
    LBRACKET = auto()
    RBRACKET = auto()
    COMMA = auto()
    SEMICOLON = auto()

    EOF = auto()


KEYWORDS = {
    "FROM": TokenType.FROM,
    "SELECT": TokenType.SELECT,
    "WHERE": TokenType.WHERE,
    "FORALL": TokenType.FORALL,
    "IF": TokenType.IF,
    "THEN": TokenType.THEN,
    "RETURN": TokenType.RETURN,
    "AND": TokenType.AND,
    "OR": TokenType.OR,
    "NOT": TokenType.NOT,
    "AS": TokenType.AS,
    "NULL": TokenType.NULL,
    "TRUE": TokenType.TRUE,
    "FALSE": TokenType.FALSE,
}

TWO_CHAR = {
    "->": TokenType.ARROW,
    "<-": TokenType.BACKARROW,
    ".<": TokenType.DOT_LT,
    "::": TokenType.DCOLON,
    "==": TokenType.EQ,
    "!=": TokenType.NE,
    "<>": TokenType.NE,
    "<=": TokenType.LE,
    ">=": TokenType.GE,
}

ONE_CHAR = {
    ".": TokenType.DOT,
    "|": TokenType.BAR,
    "+": TokenType.PLUS,
    "-": TokenType.MINUS,
    "*": TokenType.STAR,
    "/": TokenType.SLASH,
    "<": TokenType.LT,
    ">": TokenType.GT,
    "=": TokenType.ASSIGN,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
    "[": TokenType.LBRACKET,
    "]": TokenType.RBRACKET,
    ",": TokenType.COMMA,
    ";": TokenType.SEMICOLON,
}


@dataclass
class Token:
    """Lexical token with its 1-based position."""

    type: TokenType
    value: Any
    line: int
    column: int

    @property
    def location(self) -> str:
        return f"{self.line}:{self.column}"

    def __repr__(self) -> str:
        return f"Token({self.type.name}, {self.value!r})"


class Lexer:
    """Split COQL text into tokens.

    Keywords are case-insensitive. ``--`` starts a comment running to the end
    of the line.
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def tokenize(self) -> List[Token]:
        tokens = []
        while True:
            token = self._next_token()
            if token is None:
                break
            tokens.append(token)
        tokens.append(Token(TokenType.EOF, None, self.line, self.column))
        return tokens

    def _peek(self, offset: int = 0) -> str:
        pos = self.pos + offset
        return self.text[pos] if pos < len(self.text) else ""

    def _advance(self, count: int = 1) -> str:
        chunk = self.text[self.pos : self.pos + count]
        for char in chunk:
            if char == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
        self.pos += count
        return chunk

    def _skip_blank(self):
        while self.pos < len(self.text):
            char = self._peek()
            if char.isspace():
                self._advance()
            elif char == "-" and self._peek(1) == "-":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                break

    def _next_token(self) -> Optional[Token]:
        self._skip_blank()
        if self.pos >= len(self.text):
            return None
        line, column = self.line, self.column
        char = self._peek()

        if char in ("'", '"'):
            return Token(TokenType.STRING, self._read_string(char), line, column)
        if char.isdigit():
            return self._read_number(line, column)
        if char.isalpha() or char == "_":
            word = self._read_word()
            keyword = KEYWORDS.get(word.upper())
            if keyword is not None:
                return Token(keyword, word, line, column)
            return Token(TokenType.IDENT, word, line, column)

        pair = char + self._peek(1)
        if pair in TWO_CHAR:
            self._advance(2)
            return Token(TWO_CHAR[pair], pair, line, column)
        if char in ONE_CHAR:
            self._advance()
            return Token(ONE_CHAR[char], char, line, column)
        raise errors.LexError(f"unexpected character {char!r}", f"{line}:{column}")

    def _read_string(self, quote: str) -> str:
        line, column = self.line, self.column
        self._advance()
        value = []
        while self.pos < len(self.text):
            char = self._advance()
            if char == quote:
                if self._peek() == quote:
                    value.append(self._advance())
                    continue
                return "".join(value)
            value.append(char)
        raise errors.LexError("unterminated string literal", f"{line}:{column}")

    def _read_number(self, line: int, column: int) -> Token:
        start = self.pos
        while self._peek().isdigit():
            self._advance()
        if self._peek() == "." and self._peek(1).isdigit():
            self._advance()
            while self._peek().isdigit():
                self._advance()
            return Token(
                TokenType.DECIMAL, Decimal(self.text[start : self.pos]), line, column
            )
        return Token(TokenType.INTEGER, int(self.text[start : self.pos]), line, column)

    def _read_word(self) -> str:
        start = self.pos
        while self._peek().isalnum() or self._peek() == "_":
            self._advance()
        return self.text[start : self.pos]


def tokenize(text: str) -> List[Token]:
    return Lexer(text).tokenize()
