"""Immutable expression trees.

Nodes cover the symbolic fragment: exact scalar constants, float
constants (numeric results only), variables, sums, products, powers,
sin/cos/exp, opaque function applications (with derivative ticks), and
unevaluated definite integrals.  Trees are plain data; simplification
lives in the normal-form layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .scalars import Scalar, scalar as _coerce_scalar

# the series index symbol; always treated as an integer-valued variable
INDEX_VAR = "n"

RESERVED_NAMES = frozenset({"pi", "i", INDEX_VAR})


class Expr:
    """Base class; all subclasses are frozen dataclasses."""
    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: Scalar


@dataclass(frozen=True)
class FloatConst(Expr):
    """Floating-point constant; only produced by numeric code paths."""
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Func(Expr):
    """Opaque function application, e.g. f(x) or f''(x), or a known
    special function such as log(x) or bessel_j(m, x)."""
    name: str
    args: Tuple[Expr, ...]
    primes: int = 0


@dataclass(frozen=True)
class Integral(Expr):
    """Unevaluated definite integral over `var` from `lo` to `hi`."""
    integrand: Expr
    var: str
    lo: Expr
    hi: Expr


# ---------------------------------------------------------------------------
# builders

ZERO_E = Const(_coerce_scalar(0))
ONE_E = Const(_coerce_scalar(1))

Number = Union[int, Fraction, Scalar]


def const(value: Number) -> Const:
    return Const(_coerce_scalar(value))


def add(*terms: Expr) -> Expr:
    flat = []
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.terms)
        elif not (isinstance(t, Const) and t.value.is_zero):
            flat.append(t)
    if not flat:
        return ZERO_E
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def mul(*factors: Expr) -> Expr:
    flat = []
    for f in factors:
        if isinstance(f, Mul):
            flat.extend(f.factors)
        elif isinstance(f, Const) and f.value.is_one:
            continue
        else:
            flat.append(f)
    for f in flat:
        if isinstance(f, Const) and f.value.is_zero:
            return ZERO_E
    if not flat:
        return ONE_E
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def neg(e: Expr) -> Expr:
    return mul(const(-1), e)


def sub(a: Expr, b: Expr) -> Expr:
    return add(a, neg(b))


def div(a: Expr, b: Expr) -> Expr:
    return mul(a, Pow(b, const(-1)))


def powi(base: Expr, k: int) -> Expr:
    if k == 1:
        return base
    return Pow(base, const(k))


def scal_e(value: Number, e: Expr) -> Expr:
    """Scalar multiple of an expression."""
    return mul(const(value), e)


# ---------------------------------------------------------------------------
# tree utilities

def free_vars(e: Expr, bound: frozenset = frozenset()):
    """Set of free variable names in `e`."""
    if isinstance(e, Var):
        return set() if e.name in bound else {e.name}
    if isinstance(e, (Const, FloatConst)):
        return set()
    if isinstance(e, Add):
        out = set()
        for t in e.terms:
            out |= free_vars(t, bound)
        return out
    if isinstance(e, Mul):
        out = set()
        for f in e.factors:
            out |= free_vars(f, bound)
        return out
    if isinstance(e, Pow):
        return free_vars(e.base, bound) | free_vars(e.exponent, bound)
    if isinstance(e, (Sin, Cos, Exp)):
        return free_vars(e.arg, bound)
    if isinstance(e, Func):
        out = set()
        for a in e.args:
            out |= free_vars(a, bound)
        return out
    if isinstance(e, Integral):
        out = free_vars(e.lo, bound) | free_vars(e.hi, bound)
        out |= free_vars(e.integrand, bound | {e.var})
        return out
    raise TypeError(f"unknown node {type(e).__name__}")


def contains_var(e: Expr, name: str) -> bool:
    return name in free_vars(e)


def subst_var(e: Expr, name: str, value: Expr) -> Expr:
    """Capture-aware textual substitution on the raw tree."""
    if isinstance(e, Var):
        return value if e.name == name else e
    if isinstance(e, (Const, FloatConst)):
        return e
    if isinstance(e, Add):
        return add(*(subst_var(t, name, value) for t in e.terms))
    if isinstance(e, Mul):
        return mul(*(subst_var(f, name, value) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(subst_var(e.base, name, value),
                   subst_var(e.exponent, name, value))
    if isinstance(e, Sin):
        return Sin(subst_var(e.arg, name, value))
    if isinstance(e, Cos):
        return Cos(subst_var(e.arg, name, value))
    if isinstance(e, Exp):
        return Exp(subst_var(e.arg, name, value))
    if isinstance(e, Func):
        return Func(e.name, tuple(subst_var(a, name, value) for a in e.args),
                    e.primes)
    if isinstance(e, Integral):
        lo = subst_var(e.lo, name, value)
        hi = subst_var(e.hi, name, value)
        if e.var == name:  # bound occurrence shadows
            return Integral(e.integrand, e.var, lo, hi)
        return Integral(subst_var(e.integrand, name, value), e.var, lo, hi)
    raise TypeError(f"unknown node {type(e).__name__}")


def contains_float(e: Expr) -> bool:
    if isinstance(e, FloatConst):
        return True
    if isinstance(e, (Const, Var)):
        return False
    if isinstance(e, Add):
        return any(contains_float(t) for t in e.terms)
    if isinstance(e, Mul):
        return any(contains_float(f) for f in e.factors)
    if isinstance(e, Pow):
        return contains_float(e.base) or contains_float(e.exponent)
    if isinstance(e, (Sin, Cos, Exp)):
        return contains_float(e.arg)
    if isinstance(e, Func):
        return any(contains_float(a) for a in e.args)
    if isinstance(e, Integral):
        return (contains_float(e.integrand) or contains_float(e.lo)
                or contains_float(e.hi))
    raise TypeError(f"unknown node {type(e).__name__}")
