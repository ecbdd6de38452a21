"""Text front end: polynomial expressions and map documents.

Expression grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := coefficient | var | var '^' uint | '(' expr ')'
    var    := 'x' uint            (1-based)
    coefficient := int | int '/' uint   (fractions only over Q)

A map document is a block of ``key: value`` header lines (``vars`` and
``ring`` are required) followed by one component expression per line.
Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ExponentOverflow, PolySyntaxError, UnknownVariable
from .jacobian import PolyMap
from .poly import MAX_EXPONENT, Polynomial
from .ring import QQ, RingSpec

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<op>[-+*/^()])|(?P<bad>\S))")
_HEADER = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$")


class _Parser:
    def __init__(self, text, nvars, ring, line):
        self.text = text
        self.nvars = nvars
        self.ring = ring
        self.line = line
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # only trailing whitespace left
                break
            if m.lastgroup == "bad":
                self.fail(f"unexpected character {m.group('bad')!r}", m.start("bad"))
            self.tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
            pos = m.end()
        self.i = 0

    def fail(self, message, offset=None):
        if offset is None:
            offset = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise PolySyntaxError(message, self.line, offset + 1)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, _ = self.peek()
        if text != value:
            self.fail(f"expected {value!r}, found {text!r}" if text else f"expected {value!r} at end of input")
        self.i += 1

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.fail("empty expression")
        p = self.expr()
        if self.i != len(self.tokens):
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        negate = False
        if self.peek()[1] == "-":
            self.take()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        kind, text, offset = self.peek()
        if kind == "num":
            self.take()
            value = int(text)
            if self.peek()[1] == "/":
                self.take()
                dkind, dtext, doff = self.peek()
                if dkind != "num":
                    self.fail("expected an unsigned integer denominator")
                self.take()
                if self.ring.modulus is not None:
                    self.fail("fractions are only allowed over Q", offset)
                if int(dtext) == 0:
                    self.fail("zero denominator", doff)
                return Polynomial.constant(self.nvars, f"{value}/{dtext}", self.ring)
            if self.peek()[0] in ("var",) or self.peek()[1] == "(":
                self.fail("implicit multiplication is not allowed; write '*'", self.peek()[2])
            return Polynomial.constant(self.nvars, value, self.ring)
        if kind == "var":
            self.take()
            index = int(text[1:])
            if not 1 <= index <= self.nvars:
                raise UnknownVariable(
                    f"line {self.line}, column {offset + 1}: variable {text} outside x1..x{self.nvars}")
            exps = [0] * self.nvars
            exps[index - 1] = 1
            if self.peek()[1] == "^":
                self.take()
                ekind, etext, eoff = self.peek()
                if ekind != "num":
                    self.fail("expected an unsigned integer exponent")
                self.take()
                if int(etext) > MAX_EXPONENT:
                    raise ExponentOverflow(f"line {self.line}, column {eoff + 1}: exponent {etext} too large")
                exps[index - 1] = int(etext)
            if self.peek()[0] == "var" or self.peek()[1] == "(" or self.peek()[0] == "num":
                self.fail("implicit multiplication is not allowed; write '*'", self.peek()[2])
            return Polynomial(self.nvars, self.ring, {tuple(exps): 1})
        if text == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        if text is None:
            self.fail("unexpected end of expression")
        self.fail(f"unexpected {text!r}")


def parse_polynomial(text: str, nvars: int | None = None, ring: RingSpec = QQ, line: int = 1) -> Polynomial:
    """Parse one expression; ``nvars`` defaults to the largest index used."""
    if nvars is None:
        found = [int(v) for v in re.findall(r"x(\d+)", text)]
        nvars = max(found, default=1)
    return _Parser(text, nvars, ring, line).parse()


@dataclass
class MapDocument:
    """A polynomial map plus free-form metadata, in canonical text form."""

    poly_map: PolyMap
    metadata: dict = field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"vars: {self.poly_map.nvars}", f"ring: {self.poly_map.ring}"]
        for key, value in self.metadata.items():
            lines.append(f"{key}: {value}")
        lines.extend(str(c) for c in self.poly_map.components)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> MapDocument:
        header = {}
        header_lines = {}
        body = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            if not line.strip():
                continue
            m = _HEADER.match(line)
            if m and not body:
                key = m.group(1)
                if key in header:
                    raise PolySyntaxError(f"duplicate header {key!r}", lineno, 1)
                header[key] = m.group(2).strip()
                header_lines[key] = lineno
                continue
            body.append((lineno, line))
        if "vars" not in header:
            raise PolySyntaxError("missing 'vars: n' header", 1, 1)
        if "ring" not in header:
            raise PolySyntaxError("missing 'ring: Q | Zmod m' header", 1, 1)
        value = header.pop("vars")
        if not value.isdigit() or int(value) < 1:
            raise PolySyntaxError(f"bad variable count {value!r}", header_lines["vars"], 1)
        nvars = int(value)
        try:
            ring = RingSpec.parse(header.pop("ring"))
        except PolySyntaxError as exc:
            raise PolySyntaxError(exc.message, header_lines["ring"], 1) from None
        if len(body) != nvars:
            raise PolySyntaxError(f"expected {nvars} component lines, found {len(body)}",
                                  body[-1][0] if body else 1, 1)
        comps = [parse_polynomial(line, nvars, ring, lineno) for lineno, line in body]
        return cls(PolyMap(comps), header)


def parse_map(text: str) -> PolyMap:
    return MapDocument.from_text(text).poly_map


def format_map(poly_map: PolyMap, **metadata) -> str:
    return MapDocument(poly_map, dict(metadata)).to_text()
