"""Knot expressions: parsing, printing, and realization as complexes.

Grammar (whitespace ignored):

    expr := term ('#' term)*
    term := '-'? atom
    atom := 'T(' int ',' int ')' | name | '@' path

'-' mirrors a single atom. Connected sum realizes as the tensor product,
mirroring as the dual complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Tuple, Union

from .builders import named_complex, torus_knot_complex
from .complexes import BigradedComplex
from .errors import ParseError


@dataclass(frozen=True)
class TorusKnot:
    p: int
    q: int


@dataclass(frozen=True)
class Mirror:
    child: "KnotExpr"


@dataclass(frozen=True)
class Sum:
    children: Tuple["KnotExpr", ...]


@dataclass(frozen=True)
class Named:
    name: str


@dataclass(frozen=True)
class FileRef:
    path: str


KnotExpr = Union[TorusKnot, Mirror, Sum, Named, FileRef]


def expr_to_string(e: KnotExpr) -> str:
    if isinstance(e, TorusKnot):
        return f"T({e.p},{e.q})"
    if isinstance(e, Mirror):
        return "-" + expr_to_string(e.child)
    if isinstance(e, Sum):
        return "#".join(expr_to_string(ch) for ch in e.children)
    if isinstance(e, Named):
        return e.name
    if isinstance(e, FileRef):
        return "@" + e.path
    raise TypeError(f"not a knot expression: {e!r}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def parse_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected an integer")
        return int(self.text[start : self.pos])

    def parse_atom(self) -> KnotExpr:
        ch = self.peek()
        if ch == "@":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and not self.text[self.pos].isspace() and self.text[self.pos] != "#":
                self.pos += 1
            if self.pos == start:
                raise self.error("expected a file path after '@'")
            return FileRef(self.text[start : self.pos])
        if ch == "T" and self._lookahead_torus():
            self.pos += 1
            self.expect("(")
            p = self.parse_int()
            self.expect(",")
            q = self.parse_int()
            close_at = self.pos
            self.expect(")")
            if p < 2 or q < 2:
                self.pos = close_at
                raise self.error(f"torus parameters must be >= 2, got ({p},{q})")
            if gcd(p, q) != 1:
                self.pos = close_at
                raise self.error(f"torus parameters ({p},{q}) are not coprime")
            return TorusKnot(p, q)
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            return Named(self.text[start : self.pos])
        raise self.error("expected a torus knot, a name, or '@path'")

    def _lookahead_torus(self) -> bool:
        save = self.pos
        self.pos += 1
        ok = self.peek() == "("
        self.pos = save
        return ok

    def parse_term(self) -> KnotExpr:
        if self.peek() == "-":
            self.pos += 1
            return Mirror(self.parse_atom())
        return self.parse_atom()

    def parse_expr(self) -> KnotExpr:
        terms = [self.parse_term()]
        while self.peek() == "#":
            self.pos += 1
            terms.append(self.parse_term())
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("unexpected trailing input")
        if len(terms) == 1:
            return terms[0]
        return Sum(tuple(terms))


def parse_knot_expr(text: str) -> KnotExpr:
    return _Parser(text).parse_expr()


def realize_expr(e: KnotExpr, loader=None) -> BigradedComplex:
    """Build the complex of an expression.

    `loader` maps a file path to a complex; required when the expression
    contains '@path' atoms.
    """
    if isinstance(e, TorusKnot):
        return torus_knot_complex(e.p, e.q)
    if isinstance(e, Mirror):
        return realize_expr(e.child, loader).dual()
    if isinstance(e, Sum):
        acc = realize_expr(e.children[0], loader)
        for child in e.children[1:]:
            acc = acc.tensor(realize_expr(child, loader))
        return acc.require_valid()
    if isinstance(e, Named):
        return named_complex(e.name)
    if isinstance(e, FileRef):
        if loader is None:
            from .fileio import load_complex

            loader = lambda path: load_complex(path)[0]  # noqa: E731
        return loader(e.path)
    raise TypeError(f"not a knot expression: {e!r}")


def is_torus_sum(e: KnotExpr) -> bool:
    """True when the expression is built from torus knots, mirrors, sums."""
    if isinstance(e, TorusKnot):
        return True
    if isinstance(e, Mirror):
        return is_torus_sum(e.child)
    if isinstance(e, Sum):
        return all(is_torus_sum(ch) for ch in e.children)
    return False
