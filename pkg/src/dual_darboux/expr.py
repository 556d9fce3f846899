"""A tiny expression language for parametric curve components.

Grammar (whitespace is ignored)::

    vector := '[' expr ',' expr ',' expr ']'
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INTEGER)*
    atom   := NUMBER | 'u' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := 'sin' | 'cos' | 'sqrt' | 'exp'

``^`` binds tighter than unary minus, so ``-u^2`` is ``-(u^2)``.  All binary
operators are left-associative.  Expressions evaluate over floats, numpy
arrays, :class:`DualScalar` or :class:`Jet` values of ``u``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .algebra import FUNCTIONS, DualScalar, Jet, call, ipow
from .errors import ExprSyntaxError, UnknownIdentifier

__all__ = [
    "Expr", "Num", "Var", "Pi", "Neg", "BinOp", "Pow", "Call",
    "parse", "parse_vector", "evaluate",
]


class Expr:
    """Base class of expression nodes."""

    def __call__(self, u):
        return evaluate(self, u)


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def __str__(self):
        return repr(float(self.value))


@dataclass(frozen=True)
class Var(Expr):
    def __str__(self):
        return "u"


@dataclass(frozen=True)
class Pi(Expr):
    def __str__(self):
        return "pi"


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __str__(self):
        return f"({self.base}^{self.exponent})"


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr

    def __str__(self):
        return f"{self.func}({self.arg})"


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int  # byte offset


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        boff = len(text[:pos].encode())
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", boff, text)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), boff))
        pos = m.end()
    tokens.append(_Token("end", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ExprSyntaxError(message, tok.offset, self.text)

    def advance(self) -> _Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def finish(self):
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")

    def vector(self) -> tuple[Expr, Expr, Expr]:
        self.expect("[")
        items = [self.expr()]
        while self.accept(","):
            items.append(self.expr())
        self.expect("]")
        if len(items) != 3:
            raise ExprSyntaxError(f"a curve needs 3 components, got {len(items)}", 0, self.text)
        return tuple(items)

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        while self.accept("^"):
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                raise self.error("exponent must be a non-negative integer literal")
            self.advance()
            node = Pow(node, int(tok.text))
        return node

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text == "u":
                return Var()
            if tok.text == "pi":
                return Pi()
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            raise UnknownIdentifier(f"unknown identifier {tok.text!r}", tok.offset, self.text)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise self.error(f"expected a number, 'u', 'pi', a function or '(', found {found!r}")


def parse(text: str) -> Expr:
    """Parse one scalar expression in the parameter ``u``."""
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


def parse_vector(text: str) -> tuple[Expr, Expr, Expr]:
    """Parse ``"[x(u), y(u), z(u)]"``."""
    p = _Parser(text)
    items = p.vector()
    p.finish()
    return items


def _const(value: float, like):
    if isinstance(like, Jet):
        return Jet.constant(np.full(like.shape, value), like.order)
    if isinstance(like, DualScalar):
        return DualScalar(value, 0.0)
    return value


def evaluate(node: Expr, u):
    """Evaluate ``node`` at ``u`` (float, array, DualScalar or Jet)."""
    if isinstance(node, Num):
        return _const(node.value, u)
    if isinstance(node, Var):
        return u
    if isinstance(node, Pi):
        return _const(math.pi, u)
    if isinstance(node, Neg):
        return -evaluate(node.arg, u)
    if isinstance(node, BinOp):
        a = evaluate(node.left, u)
        b = evaluate(node.right, u)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        a = evaluate(node.base, u)
        return ipow(a, node.exponent, _const(1.0, u))
    if isinstance(node, Call):
        return call(node.func, evaluate(node.arg, u))
    raise TypeError(f"not an expression node: {node!r}")
