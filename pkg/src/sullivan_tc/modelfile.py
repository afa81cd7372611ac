"""Reading and writing the plain-text model format.

One declaration per line::

    # comment
    generator x : 2
    generator y : 3
    d y = x^2
    assert elliptic

Polynomials use ``+``, ``-``, rational coefficients ``p/q``, ``^`` powers,
and juxtaposition or ``*`` for products.  A generator must be declared
before any line that mentions it.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .algebra import Element, GeneratorSpec, GradedAlgebra, format_element
from .errors import ParseError
from .model import ModelPresentation

IDENT = r"[A-Za-z_][A-Za-z0-9_@']*"
_TOKEN = re.compile(rf"\s*(?:(?P<num>\d+)|(?P<name>{IDENT})|(?P<op>[-+*/^()]))")
_GENERATOR = re.compile(rf"generator\s+(?P<name>{IDENT})\s*:\s*(?P<deg>-?\d+)\s*$")
_DIFF = re.compile(rf"d\s+(?P<name>{IDENT})\s*=(?P<rhs>.*)$")
_ASSERT = re.compile(r"assert\s+(?P<what>\w+)\s*$")
ASSERTIONS = ("elliptic", "formal")


def _tokenize(text: str, line: int, offset: int) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            col = offset + pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", line, col)
        kind = mt.lastgroup
        out.append((kind, mt.group(kind), offset + mt.start(kind) + 1))
        pos = mt.end()
    return out


class _PolyParser:
    def __init__(self, tokens, algebra: GradedAlgebra, declared: set[str], line: int, end_col: int):
        self.toks = tokens
        self.i = 0
        self.A = algebra
        self.declared = declared
        self.line = line
        self.end_col = end_col

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of polynomial", self.line, self.end_col)
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2] if tok else self.end_col)

    def parse(self) -> Element:
        if not self.toks:
            self.error("empty polynomial")
        e = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self) -> Element:
        sign = 1
        tok = self.peek()
        if tok and tok[1] in "+-" and tok[0] == "op":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term().scale(sign)
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "+-":
            self.take()
            t = self.term()
            acc = acc + t if tok[1] == "+" else acc - t
        return acc

    def _starts_factor(self, tok) -> bool:
        return tok is not None and (tok[0] in ("num", "name") or tok[1] == "(")

    def term(self) -> Element:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok is not None and tok[1] == "*":
                self.take()
                acc = acc * self.factor()
            elif tok is not None and tok[1] == "/":
                self.take()
                q = self.take()
                if q[0] != "num" or int(q[1]) == 0:
                    self.error("division only by a nonzero integer", q)
                acc = acc.scale(Fraction(1, int(q[1])))
            elif self._starts_factor(tok):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Element:
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                self.error("exponent must be a nonnegative integer", e)
            base = base ** int(e[1])
        return base

    def atom(self) -> Element:
        tok = self.take()
        kind, text, col = tok
        if kind == "num":
            return self.A.scalar(Fraction(int(text)))
        if kind == "name":
            if text not in self.declared:
                if text in self.A.index:
                    self.error(f"generator {text!r} used before its declaration", tok)
                self.error(f"unknown generator {text!r}", tok)
            return self.A.gen(text)
        if text == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                self.error("expected ')'", close)
            return inner
        self.error(f"unexpected {text!r}", tok)


def parse_model(text: str, name: str | None = None) -> ModelPresentation:
    """Parse model text; raise :class:`ParseError` with line and column on failure."""
    gens: list[GeneratorSpec] = []
    seen: dict[str, int] = {}
    pending: list[tuple[int, str, str, int]] = []  # line, name, rhs, rhs column
    asserts: dict[str, bool] = {}
    order: list[tuple[str, int]] = []  # ("gen"|"d", index) to replay forward-reference checks
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col0 = len(body) - len(body.lstrip()) + 1
        if mg := _GENERATOR.match(stripped):
            nm, deg = mg.group("name"), int(mg.group("deg"))
            if nm in seen:
                raise ParseError(f"duplicate generator {nm!r} (first declared on line {seen[nm]})", lineno, col0)
            if deg <= 1:
                raise ParseError(f"generator {nm!r} has degree {deg}; degrees must be at least 2",
                                 lineno, col0 + stripped.index(mg.group("deg"), len("generator")))
            seen[nm] = lineno
            gens.append(GeneratorSpec(nm, deg))
            order.append(("gen", len(gens) - 1))
        elif md := _DIFF.match(stripped):
            pending.append((lineno, md.group("name"), md.group("rhs"), col0 + md.start("rhs")))
            order.append(("d", len(pending) - 1))
        elif ma := _ASSERT.match(stripped):
            what = ma.group("what")
            if what not in ASSERTIONS:
                raise ParseError(f"unknown assertion {what!r}; expected one of {', '.join(ASSERTIONS)}", lineno, col0)
            asserts[what] = True
        else:
            raise ParseError(f"cannot parse declaration {stripped!r}", lineno, col0)
    if not gens:
        raise ParseError("no generators", 1 if not text.strip() else None)

    algebra = GradedAlgebra(gens)
    declared: set[str] = set()
    diff: dict[str, Element] = {}
    diff_line: dict[str, int] = {}
    for kind, idx in order:
        if kind == "gen":
            declared.add(gens[idx].name)
            continue
        lineno, nm, rhs, col = pending[idx]
        if nm not in declared:
            raise ParseError(f"differential of {nm!r} given before its declaration", lineno, 1)
        if nm in diff_line:
            raise ParseError(f"second differential for {nm!r} (first on line {diff_line[nm]})", lineno, 1)
        toks = _tokenize(rhs, lineno, col - 1)
        value = _PolyParser(toks, algebra, declared, lineno, col + len(rhs)).parse()
        diff_line[nm] = lineno
        if value:
            diff[nm] = value
    return ModelPresentation(gens, diff, asserts, name)


def load_model(path: str | Path) -> ModelPresentation:
    p = Path(path)
    return parse_model(p.read_text(encoding="utf-8"), name=p.stem)


def emit_model(m: ModelPresentation) -> str:
    """Canonical text: generators in order, then differentials, then assertions."""
    lines = [f"generator {g.name} : {g.degree}" for g in m.generators]
    for g, dg in zip(m.generators, m.d_gen):
        if dg:
            lines.append(f"d {g.name} = {format_element(dg)}")
    for what in ASSERTIONS:
        if m.metadata.get(what):
            lines.append(f"assert {what}")
    return "\n".join(lines) + "\n"
