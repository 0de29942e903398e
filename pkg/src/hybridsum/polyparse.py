"""Recursive-descent parser for polynomial and rational-function text.

Grammar (whitespace is insignificant)::

    rational := expr ('/' expr)?
    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := '-' factor | power
    power    := atom ('^' uint)?
    atom     := uint | 'x' | 'y' | '(' expr ')'

so ``^`` binds tighter than unary minus (``-x^2`` is ``-(x^2)``), which binds
tighter than ``*``.  Integer literals are reduced mod p when the tree is
flattened.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .algebra import BivarPoly, RationalMap
from .errors import NegativeExponent, PolySyntaxError, ZeroDenominator
from .field import PrimeField


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "PolyExpr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "PolyExpr"
    right: "PolyExpr"


@dataclass(frozen=True)
class Pow:
    base: "PolyExpr"
    exponent: int


PolyExpr = Union[Num, Var, Neg, BinOp, Pow]


@dataclass(frozen=True)
class Token:
    kind: str   # 'int', 'var', one of '+-*^()/', or 'end'
    text: str
    offset: int  # byte offset into the source


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    boff = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            boff += len(ch.encode())
            i += 1
            continue
        if ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], boff))
            boff += j - i
            i = j
            continue
        if ch in "xy":
            tokens.append(Token("var", ch, boff))
        elif ch in "+-*^()/":
            tokens.append(Token(ch, ch, boff))
        else:
            raise PolySyntaxError(f"unexpected character {ch!r}", boff)
        boff += len(ch.encode())
        i += 1
    tokens.append(Token("end", "", boff))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}",
                                  self.tok.offset)
        return self.advance()

    def expr(self) -> PolyExpr:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> PolyExpr:
        node = self.factor()
        while self.tok.kind == "*":
            self.advance()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> PolyExpr:
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> PolyExpr:
        base = self.atom()
        if self.tok.kind == "^":
            self.advance()
            if self.tok.kind == "-":
                raise NegativeExponent("negative exponent", self.tok.offset)
            exp = self.expect("int")
            return Pow(base, int(exp.text))
        return base

    def atom(self) -> PolyExpr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Num(int(t.text))
        if t.kind == "var":
            self.advance()
            return Var(t.text)
        if t.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise PolySyntaxError(f"unexpected {t.text or 'end of input'!r}", t.offset)


def parse_expr(text: str) -> PolyExpr:
    """Parse a single polynomial expression into its tree."""
    ps = _Parser(text)
    node = ps.expr()
    ps.expect("end")
    return node


def to_poly(node: PolyExpr, field: PrimeField) -> BivarPoly:
    """Flatten a parse tree into an expanded coefficient table."""
    if isinstance(node, Num):
        return BivarPoly.const(field, node.value)
    if isinstance(node, Var):
        return BivarPoly.x(field) if node.name == "x" else BivarPoly.y(field)
    if isinstance(node, Neg):
        return -to_poly(node.operand, field)
    if isinstance(node, Pow):
        return to_poly(node.base, field) ** node.exponent
    left, right = to_poly(node.left, field), to_poly(node.right, field)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    return left * right


def eval_tree(node: PolyExpr, x0: int, y0: int, p: int) -> int:
    """Evaluate the tree directly at a point, without expanding it."""
    if isinstance(node, Num):
        return node.value % p
    if isinstance(node, Var):
        return (x0 if node.name == "x" else y0) % p
    if isinstance(node, Neg):
        return -eval_tree(node.operand, x0, y0, p) % p
    if isinstance(node, Pow):
        return pow(eval_tree(node.base, x0, y0, p), node.exponent, p)
    a, b = eval_tree(node.left, x0, y0, p), eval_tree(node.right, x0, y0, p)
    if node.op == "+":
        return (a + b) % p
    if node.op == "-":
        return (a - b) % p
    return a * b % p


def parse_poly(text: str, field: PrimeField) -> BivarPoly:
    return to_poly(parse_expr(text), field)


def parse_rational(text: str, field: PrimeField) -> RationalMap:
    """Parse ``NUM / DEN`` (or a bare polynomial) into a RationalMap."""
    ps = _Parser(text)
    num = ps.expr()
    den = None
    slash = None
    if ps.tok.kind == "/":
        slash = ps.advance()
        den = ps.expr()
    ps.expect("end")
    numerator = to_poly(num, field)
    if den is None:
        return RationalMap.from_poly(numerator)
    denominator = to_poly(den, field)
    if denominator.is_zero():
        raise ZeroDenominator(f"denominator is zero mod {field.p} (after offset {slash.offset})")
    return RationalMap(numerator, denominator)
