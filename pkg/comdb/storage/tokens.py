# Copyright: (c) 2026, comdb contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)
"""Shared scanner for the schema, data and ordered-set text formats.

Classes:

    Token
    TokenStream

"""

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Any, List, Optional

from comdb import errors

TOKEN_PATTERN = re.compile(
    r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>-?\d+(?:\.\d+)?(?![\w.-]))
  | (?P<word>[A-Za-z0-9_][\w.-]*)
  | (?P<string>'(?:[^'\n]|'')*')
  | (?P<punct>[{}:;=,])
    """,
    re.VERBOSE,
)

WORD = "word"
NUMBER = "number"
STRING = "string"
PUNCT = "punct"
EOF = "eof"

BARE_WORD = re.compile(r"[A-Za-z0-9_][\w.-]*\Z")
NUMBER_LIKE = re.compile(r"-?\d+(?:\.\d+)?\Z")


@dataclass
class Token:
    kind: str
    value: Any
    line: int


def quote(text: str) -> str:
    return "'" + text.replace("'", "''") + "'"


def word_or_quoted(text: str) -> str:
    """Identifier as written in files: bare when it scans back to the same text."""
    if text == "null" or not BARE_WORD.match(text):
        return quote(text)
    if NUMBER_LIKE.match(text):
        number = Decimal(text) if "." in text else int(text)
        return text if str(number) == text else quote(text)
    return text


def scan(text: str, source: str) -> List[Token]:
    """Split ``text`` into tokens; ``#`` starts a comment.

    Raises:
        FormatError: On a character no token starts with.
    """
    tokens: List[Token] = []
    line, pos = 1, 0
    while pos < len(text):
        match = TOKEN_PATTERN.match(text, pos)
        if match is None:
            raise errors.FormatError(f"unexpected character {text[pos]!r}", f"{source}:{line}")
        kind = match.lastgroup
        raw = match.group()
        if kind == "newline":
            line += 1
        elif kind == NUMBER:
            value: Any = Decimal(raw) if "." in raw else int(raw)
            tokens.append(Token(NUMBER, value, line))
        elif kind == STRING:
            tokens.append(Token(STRING, raw[1:-1].replace("''", "'"), line))
        elif kind in (WORD, PUNCT):
            tokens.append(Token(kind, raw, line))
        pos = match.end()
    tokens.append(Token(EOF, None, line))
    return tokens


class TokenStream:
    """Cursor over scanned tokens with ``file:line`` error locations."""

    def __init__(self, text: str, source: str = "<string>"):
        self.source = source
        self.tokens = scan(text, source)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def location(self, token: Optional[Token] = None) -> str:
        return f"{self.source}:{(token or self.current).line}"

    def at_end(self) -> bool:
        return self.current.kind == EOF

    def error(self, message: str) -> errors.FormatError:
        return errors.FormatError(message, self.location())

    def advance(self) -> Token:
        token = self.current
        if token.kind != EOF:
            self.pos += 1
        return token

    def check(self, punct: str) -> bool:
        return self.current.kind == PUNCT and self.current.value == punct

    def match(self, punct: str) -> bool:
        if self.check(punct):
            self.advance()
            return True
        return False

    def expect(self, punct: str):
        if not self.match(punct):
            raise self.error(f"expected '{punct}', found {self._describe()}")

    def keyword(self) -> Optional[str]:
        if self.current.kind == WORD:
            return self.current.value
        return None

    def expect_keyword(self, word: str):
        if self.keyword() != word:
            raise self.error(f"expected '{word}', found {self._describe()}")
        self.advance()

    def name(self) -> str:
        """An identifier: a bare word, a number or a quoted string."""
        token = self.current
        if token.kind in (WORD, STRING, NUMBER):
            self.advance()
            return str(token.value)
        raise self.error(f"expected a name, found {self._describe()}")

    def literal(self) -> Any:
        """A slot reference: null, number, quoted string or bare word."""
        token = self.current
        if token.kind == WORD and token.value == "null":
            self.advance()
            return None
        if token.kind in (WORD, STRING, NUMBER):
            self.advance()
            return token.value
        raise self.error(f"expected a value, found {self._describe()}")

    def _describe(self) -> str:
        token = self.current
        return "end of file" if token.kind == EOF else repr(token.value)
