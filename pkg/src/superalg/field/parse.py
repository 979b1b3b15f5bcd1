"""Tokenizer and expression grammar for rational-function text.

The same tokens drive the definition language in :mod:`superalg.dsl`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import LexError, ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|!=|[-+*/^(){};:,=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "op", "eof"
    value: str
    line: int
    col: int
    start: int
    end: int


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise LexError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1, pos, m.end()))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1, pos, pos))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def peek_at(self, k: int) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek
        return tok.kind in ("op", "ident") and tok.value == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.next()
            return True
        return False

    def expect(self, value: str) -> Token:
        if not self.at(value):
            tok = self.peek
            shown = tok.value or "end of input"
            raise ParseError(f"expected {value!r}, found {shown!r}", tok.line, tok.col)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek
        if tok.kind != kind:
            shown = tok.value or "end of input"
            raise ParseError(f"expected {what}, found {shown!r}", tok.line, tok.col)
        return self.next()

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek
        return ParseError(message, tok.line, tok.col)


def parse_expression(ts: TokenStream, *, on_delta=None, stop_before_ref=False):
    """Parse a rational-function expression and return a Scalar.

    ``on_delta(scalar, token)`` is called for ``delta(...)`` factors and must
    return the Scalar to use in their place; without it ``delta`` is an error.
    With ``stop_before_ref`` a trailing ``* NAME(`` that is not ``delta`` is
    left unconsumed, so callers can parse ``coefficient * Family(index)``.
    """
    from .scalar import Scalar

    def expr():
        value = term()
        while ts.at("+") or ts.at("-"):
            op = ts.next().value
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term():
        value = unary()
        while ts.at("*") or ts.at("/"):
            if stop_before_ref and ts.at("*") and _starts_ref(ts, 1):
                break
            op = ts.next().value
            rhs = unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ts.error("division by zero in expression")
                value = value / rhs
        return value

    def unary():
        if ts.accept("-"):
            return -unary()
        if ts.accept("+"):
            return unary()
        return power()

    def power():
        base = atom()
        if ts.accept("^"):
            neg = ts.accept("-")
            tok = ts.expect_kind("int", "integer exponent")
            e = int(tok.value)
            if neg:
                if base.is_zero():
                    raise ts.error("zero to a negative power", tok)
                e = -e
            base = base**e
        return base

    def atom():
        tok = ts.peek
        if tok.kind == "int":
            ts.next()
            return Scalar.of(int(tok.value))
        if tok.kind == "ident":
            if tok.value == "delta" and ts.peek_at(1).value == "(":
                if on_delta is None:
                    raise ts.error("delta(...) is not allowed here")
                ts.next()
                ts.expect("(")
                arg = expr()
                ts.expect(")")
                return on_delta(arg, tok)
            ts.next()
            return Scalar.var(tok.value)
        if ts.accept("("):
            value = expr()
            ts.expect(")")
            return value
        shown = tok.value or "end of input"
        raise ParseError(f"unexpected {shown!r} in expression", tok.line, tok.col)

    return expr()


def _starts_ref(ts: TokenStream, k: int) -> bool:
    a, b = ts.peek_at(k), ts.peek_at(k + 1)
    return a.kind == "ident" and a.value != "delta" and b.value == "("


def parse_scalar(text: str):
    """Parse a standalone rational-function expression."""
    ts = TokenStream(tokenize(text))
    value = parse_expression(ts)
    if ts.peek.kind != "eof":
        raise ts.error(f"trailing input {ts.peek.value!r}")
    return value
