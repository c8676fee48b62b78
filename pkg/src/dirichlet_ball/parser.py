"""Parse and format polynomial expressions in ``z1..zn``.

Grammar (whitespace ignored)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := number | 'i' | 'z' uint | '(' expr ')'

Numbers are decimal with an optional fraction part; ``i`` is the imaginary
unit. Unary minus is allowed only at the head of an expression, which covers
the start of input and the position right after ``(``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .series import TruncatedPowerSeries

MAX_EXPONENT = 64
MAX_NESTING = 200

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<var>z(?P<index>\d+))
  | (?P<imag>i)
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class ExprSource:
    text: str
    dimension: int


@dataclass(frozen=True)
class _Token:
    kind: str  # 'number', 'var', 'imag', an operator character, or 'end'
    text: str
    offset: int  # byte offset into the UTF-8 encoding


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    byte_pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", byte_pos)
        chunk = m.group(0)
        if m.lastgroup != "ws":
            kind = m.lastgroup if m.lastgroup != "op" else chunk
            if m.group("index") is not None:
                kind = "var"
            tokens.append(_Token(kind, chunk, byte_pos))
        byte_pos += len(chunk.encode("utf-8"))
        pos = m.end()
    tokens.append(_Token("end", "", byte_pos))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str):
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}")
        return self.advance()

    def fail(self, message):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"{message}, found {found}", t.offset)

    def parse(self) -> TruncatedPowerSeries:
        result = self.expr()
        if self.tok.kind != "end":
            self.fail("expected operator or end of input")
        return result

    def expr(self):
        negate = False
        if self.tok.kind == "-":
            self.advance()
            negate = True
        value = self.term()
        if negate:
            value = -value
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.tok.kind == "*":
            self.advance()
            value = value * self.factor()
        return value

    def factor(self):
        base = self.base()
        if self.tok.kind == "^":
            self.advance()
            t = self.tok
            if t.kind != "number" or "." in t.text:
                self.fail("expected unsigned integer exponent")
            p = int(t.text)
            if p > MAX_EXPONENT:
                raise ParseError(f"exponent {p} exceeds {MAX_EXPONENT}", t.offset)
            self.advance()
            base = base**p
        return base

    def base(self):
        t = self.tok
        n = self.n
        if t.kind == "number":
            self.advance()
            return TruncatedPowerSeries.constant(n, float(t.text))
        if t.kind == "imag":
            self.advance()
            return TruncatedPowerSeries.constant(n, 1j)
        if t.kind == "var":
            idx = int(t.text[1:])
            if not 1 <= idx <= n:
                raise ParseError(f"variable z{idx} outside z1..z{n}", t.offset)
            self.advance()
            return TruncatedPowerSeries.variable(n, idx)
        if t.kind == "(":
            if self.depth >= MAX_NESTING:
                raise ParseError("parentheses nested too deeply", t.offset)
            self.advance()
            self.depth += 1
            inner = self.expr()
            self.depth -= 1
            self.expect(")")
            return inner
        self.fail("expected number, 'i', variable or '('")


def parse(source: ExprSource | str, n: int | None = None) -> TruncatedPowerSeries:
    """Parse an expression into a polynomial whose truncation degree is its degree.

    >>> parse("(1-z1)^2", 2)[(1, 0)]
    (-2+0j)
    """
    if isinstance(source, ExprSource):
        text, n = source.text, source.dimension
    else:
        text = source
    if n is None or n < 1:
        raise ParseError("dimension must be a positive integer", 0)
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("input is not valid UTF-8", exc.start) from None
    poly = _Parser(text, n).parse()
    return poly.truncate(max(poly.polynomial_degree, 0))


def _num(x: float) -> str:
    return np.format_float_positional(x, unique=True, trim="-")


def _monomial(k) -> str:
    parts = []
    for i, e in enumerate(k, start=1):
        if e == 1:
            parts.append(f"z{i}")
        elif e > 1:
            parts.append(f"z{i}^{e}")
    return "*".join(parts)


def format_series(f: TruncatedPowerSeries) -> str:
    """Canonical text form, graded-lex ordered, that :func:`parse` reads back exactly."""
    pieces = []
    for k, c in f.items():
        mono = _monomial(k)
        re_, im = c.real, c.imag
        if im == 0:
            sign = "-" if re_ < 0 else "+"
            mag = abs(re_)
            coef = "" if (mag == 1 and mono) else _num(mag)
        elif re_ == 0:
            sign = "-" if im < 0 else "+"
            mag = abs(im)
            coef = "i" if mag == 1 else f"{_num(mag)}*i"
        else:
            sign = "+"
            op = "-" if im < 0 else "+"
            coef = f"({_num(re_)} {op} {_num(abs(im))}*i)"
        body = "*".join(p for p in (coef, mono) if p)
        pieces.append((sign, body))
    if not pieces:
        return "0"
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
