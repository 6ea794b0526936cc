"""Recursive-descent parser for the expression grammar.

Grammar (precedence low to high):
    sum     := product (("+" | "-") product)*
    product := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?          (right associative)
    primary := NUMBER | IDENT | IDENT "'"* "(" args ")"
             | "(" sum ")"

NUMBER is an integer or decimal literal; decimals convert exactly to
rationals.  Reserved identifiers: pi (the circle constant), i (the
imaginary unit), and the series index n.  sin/cos/exp take one
argument; integrate(f, x, lo, hi) builds an unevaluated definite
integral; any other applied identifier is an opaque function, with
trailing apostrophes marking derivatives (f''(x)).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import ParseError
from .expr import (Const, Cos, Exp, Expr, Func, Integral, Mul, Pow, Sin, Var,
                   add, const, div, mul, neg)
from .scalars import IMAG, PI, Scalar

_TOKEN_RE = re.compile(r"""
    (?P<num>\d+\.\d+|\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>[-+*/^(),])
  | (?P<ws>\s+)
""", re.VERBOSE)

_BUILTIN_UNARY = {"sin": Sin, "cos": Cos, "exp": Exp}


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r})"


def _tokenize(text: str) -> List[_Token]:
    out: List[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            out.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(_Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, tokens: List[_Token]):
        self.toks = tokens
        self.k = 0

    def peek(self) -> _Token:
        return self.toks[self.k]

    def next(self) -> _Token:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.pos)
        return t

    # ---- grammar ----
    def sum(self) -> Expr:
        terms = [self.product()]
        while self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.product()
            terms.append(rhs if op == "+" else neg(rhs))
        return add(*terms)

    def product(self) -> Expr:
        factors = [self.unary()]
        while self.peek().text in ("*", "/"):
            op = self.next().text
            rhs = self.unary()
            factors.append(rhs if op == "*" else Pow(rhs, const(-1)))
        if len(factors) == 1:
            return factors[0]
        return mul(*factors)

    def unary(self) -> Expr:
        if self.peek().text == "-":
            self.next()
            return neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek().text == "^":
            self.next()
            return Pow(base, self.unary())
        return base

    def primary(self) -> Expr:
        t = self.next()
        if t.kind == "num":
            if "." in t.text:
                return const(Fraction(t.text))
            return const(int(t.text))
        if t.text == "(":
            inner = self.sum()
            self.expect(")")
            return inner
        if t.kind == "ident":
            return self._ident(t)
        raise ParseError(f"unexpected token {t.text!r}", t.pos)

    def _ident(self, t: _Token) -> Expr:
        name = t.text.rstrip("'")
        primes = len(t.text) - len(name)
        if not name:
            raise ParseError("dangling derivative tick", t.pos)
        applied = self.peek().text == "("
        if not applied:
            if primes:
                raise ParseError(
                    f"derivative tick on {name!r} without arguments", t.pos)
            if name == "pi":
                return Const(PI)
            if name == "i":
                return Const(IMAG)
            return Var(name)
        self.expect("(")
        args = [self.sum()]
        while self.peek().text == ",":
            self.next()
            args.append(self.sum())
        self.expect(")")
        if name in _BUILTIN_UNARY:
            if primes:
                raise ParseError(f"{name} does not take derivative ticks",
                                 t.pos)
            if len(args) != 1:
                raise ParseError(f"{name} takes one argument", t.pos)
            return _BUILTIN_UNARY[name](args[0])
        if name == "integrate":
            if primes or len(args) != 4:
                raise ParseError(
                    "integrate takes (integrand, variable, lo, hi)", t.pos)
            v = args[1]
            if not isinstance(v, Var):
                raise ParseError("integration variable must be a name", t.pos)
            return Integral(args[0], v.name, args[2], args[3])
        if name in ("pi", "i"):
            raise ParseError(f"{name!r} is a constant, not a function", t.pos)
        return Func(name, tuple(args), primes)


def parse(text: str) -> Expr:
    """Parse expression text into a raw tree (no canonicalization)."""
    tokens = _tokenize(text)
    p = _Parser(tokens)
    e = p.sum()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.pos)
    return e
