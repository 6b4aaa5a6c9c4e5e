"""Construction expressions such as ``complement(union(C(5),C(5)))``.

Grammar (whitespace is ignored)::

    expr  := NAME [ "(" arg ("," arg)* ")" ]
    arg   := INT | expr

Atoms take integers and are built by :func:`catalog.catalog_build`; combinators
take expressions. ``minus(a, b)`` deletes the edges of ``b`` from ``a`` (same
vertex count, ``b`` a subgraph of ``a``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .catalog import FAMILIES, catalog_build
from .errors import InputError
from .graph import Graph, cartesian_product, complement, disjoint_union, join

# combinator -> (min args, max args or None)
COMBINATORS = {
    "prod": (2, None),
    "join": (2, None),
    "union": (2, None),
    "complement": (1, 1),
    "minus": (2, 2),
}


class ParseError(InputError):
    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        exp = f"; expected {' or '.join(expected)}" if expected else ""
        super().__init__(f"syntax error at byte {offset}: {message}{exp}")


@dataclass(frozen=True)
class Atom:
    name: str
    params: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.params and FAMILIES.get(self.name) == 0:
            return self.name
        return f"{self.name}({','.join(str(p) for p in self.params)})"


@dataclass(frozen=True)
class Combo:
    op: str
    args: tuple["Expr", ...]

    def __str__(self) -> str:
        return f"{self.op}({','.join(str(a) for a in self.args)})"


Expr = Union[Atom, Combo]

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<punct>[(),]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while text[pos:].strip():
            m = _TOKEN.match(text, pos)
            if not m:
                bad = len(text) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", _byte(text, bad))
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), _byte(text, m.start(kind))))
            pos = m.end()
        self.k = 0

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else ("eof", "", _byte(self.text, len(self.text)))

    def take(self, kind: str, value: str | None = None, expected: tuple[str, ...] = ()):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"unexpected {what}", tok[2], expected or (repr(value) if value else kind,))
        self.k += 1
        return tok

    def expr(self) -> Expr:
        _, name, off = self.take("name", expected=("atom or combinator name",))
        if name in COMBINATORS:
            lo, hi = COMBINATORS[name]
            self.take("punct", "(", expected=("'('",))
            args = [self.expr()]
            while self.peek()[:2] == ("punct", ","):
                self.k += 1
                args.append(self.expr())
            self.take("punct", ")", expected=("',' or ')'",))
            if len(args) < lo or (hi is not None and len(args) > hi):
                want = f"{lo}" if lo == hi else f"at least {lo}"
                raise InputError(f"{name} at byte {off} takes {want} argument(s), got {len(args)}")
            return Combo(name, tuple(args))
        if name not in FAMILIES:
            known = sorted(FAMILIES) + sorted(COMBINATORS)
            raise ParseError(f"unknown name {name!r}", off, (", ".join(known),))
        params: list[int] = []
        if self.peek()[:2] == ("punct", "("):
            self.k += 1
            if self.peek()[:2] != ("punct", ")"):
                params.append(int(self.take("int", expected=("integer",))[1]))
                while self.peek()[:2] == ("punct", ","):
                    self.k += 1
                    params.append(int(self.take("int", expected=("integer",))[1]))
            self.take("punct", ")", expected=("',' or ')'",))
        return Atom(name, tuple(params))


def _byte(text: str, idx: int) -> int:
    return len(text[:idx].encode())


def parse_construction(text: str) -> Expr:
    p = _Parser(text)
    tree = p.expr()
    tok = p.peek()
    if tok[0] != "eof":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], ("end of input",))
    return tree


def build(expr: Expr | str) -> Graph:
    """Evaluate an expression (or its text) to a graph; constraint errors name the broken rule."""
    if isinstance(expr, str):
        expr = parse_construction(expr)
    if isinstance(expr, Atom):
        return catalog_build(expr.name, *expr.params)
    gs = [build(a) for a in expr.args]
    if expr.op == "complement":
        return complement(gs[0])
    if expr.op == "minus":
        a, b = gs
        if a.n != b.n:
            raise InputError(f"minus: operands have {a.n} and {b.n} vertices")
        if any(b.adjacency[v] & ~a.adjacency[v] for v in range(a.n)):
            raise InputError("minus: second operand must be a subgraph of the first")
        return Graph(a.n, tuple(a.adjacency[v] & ~b.adjacency[v] for v in range(a.n)))
    op = {"prod": cartesian_product, "join": join, "union": disjoint_union}[expr.op]
    out = gs[0]
    for g in gs[1:]:
        out = op(out, g)
    return out
