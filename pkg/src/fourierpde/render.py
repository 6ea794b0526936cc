"""Plain-text rendering of scalars and expression trees.

The output re-parses to an equal expression: parse(render(e)) == e up
to canonical form.  Precedence levels: sum < product/quotient < power
< atom.
"""

from __future__ import annotations

from fractions import Fraction

from .expr import (Add, Const, Cos, Exp, Expr, FloatConst, Func, Integral,
                   Mul, Pow, Sin, Var)
from .scalars import GaussRat, PiPoly, Scalar

_ADD, _MUL, _POW, _ATOM = 1, 2, 3, 4


def _frac_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _gauss_term(c: GaussRat, pik: str):
    """Render c * pi^k; returns (text, starts_like_sum)."""
    if c.is_real:
        q = c.re
        if pik:
            if q == 1:
                return pik, False
            if q == -1:
                return "-" + pik, False
            return f"{_frac_text(q)}*{pik}", False
        return _frac_text(q), False
    if not c.re:
        b = c.im
        if b == 1:
            core = "i"
        elif b == -1:
            core = "-i"
        else:
            core = f"{_frac_text(b)}*i"
        if pik:
            return f"{core}*{pik}", False
        return core, False
    # genuinely complex coefficient: parenthesized sum
    re_t = _frac_text(c.re)
    im_t = "i" if c.im == 1 else ("-i" if c.im == -1 else f"{_frac_text(c.im)}*i")
    joined = f"({re_t} + {im_t})" if not im_t.startswith("-") \
        else f"({re_t} - {im_t[1:]})"
    if pik:
        return f"{joined}*{pik}", False
    return joined, False


def _pipoly_text(p: PiPoly):
    """Render a polynomial in pi; returns (text, prec)."""
    if p.is_zero:
        return "0", _ATOM
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        pik = "pi" if k == 1 else (f"pi^{k}" if k > 1 else "")
        parts.append(_gauss_term(c, pik)[0])
    text = parts[0]
    for t in parts[1:]:
        if t.startswith("-"):
            text += " - " + t[1:]
        else:
            text += " + " + t
    if len(parts) > 1:
        return text, _ADD
    if text.startswith("-") or "*" in text or "/" in text or "(" in text:
        return text, _MUL
    return text, _ATOM


def render_scalar(s: Scalar):
    num, den = s.num, s.den
    if den.degree == 0 and den.coeffs[0] == GaussRat(1):
        return _pipoly_text(num)
    # fold a plain rational numerator denominator into the quotient:
    # (a/b) / pi  ->  a/(b*pi)
    if num.degree == 0:
        c = num.coeffs[0]
        q = c.re if c.is_real else (c.im if not c.re else None)
        if q is not None and q.denominator != 1:
            num = num.scale(GaussRat(q.denominator))
            den = den.scale(GaussRat(q.denominator))
    num_t, num_p = _pipoly_text(num)
    den_t, den_p = _pipoly_text(den)
    if num_p <= _ADD:
        num_t = f"({num_t})"
    if den_p < _ATOM:
        den_t = f"({den_t})"
    return f"{num_t}/{den_t}", _MUL


def _render(e: Expr, parent: int) -> str:
    text, prec = _render_prec(e)
    if prec < parent:
        return f"({text})"
    return text


def _split_division(factors):
    """Separate Pow(_, negative const int) factors into a denominator."""
    num, den = [], []
    for f in factors:
        if isinstance(f, Pow) and isinstance(f.exponent, Const) \
                and f.exponent.value.is_integer \
                and f.exponent.value.as_integer() < 0:
            k = -f.exponent.value.as_integer()
            den.append(f.base if k == 1 else Pow(f.base, Const(-f.exponent.value)))
        else:
            num.append(f)
    return num, den


def _render_prec(e: Expr):
    if isinstance(e, Const):
        return render_scalar(e.value)
    if isinstance(e, FloatConst):
        t = repr(e.value)
        return t, (_MUL if t.startswith("-") else _ATOM)
    if isinstance(e, Var):
        return e.name, _ATOM
    if isinstance(e, Add):
        parts = [_render(t, _ADD) for t in e.terms]
        text = parts[0]
        for t in parts[1:]:
            if t.startswith("-"):
                text += " - " + t[1:]
            else:
                text += " + " + t
        return text, _ADD
    if isinstance(e, Mul):
        num, den = _split_division(list(e.factors))
        neg = False
        if len(num) > 1 and isinstance(num[0], Const) \
                and num[0].value == Scalar.from_int(-1):
            neg = True
            num = num[1:]
        num_t = "*".join(_render(f, _MUL) for f in num) if num else "1"
        if neg:
            num_t = "-" + num_t
        if not den:
            return num_t, _MUL
        den_parts = [_render(f, _ATOM) for f in den]
        den_t = den_parts[0] if len(den_parts) == 1 \
            else "(" + "*".join(den_parts) + ")"
        return f"{num_t}/{den_t}", _MUL
    if isinstance(e, Pow):
        base_t = _render(e.base, _ATOM)
        expo_t = _render(e.exponent, _POW + 1)
        return f"{base_t}^{expo_t}", _POW
    if isinstance(e, Sin):
        return f"sin({_render(e.arg, 0)})", _ATOM
    if isinstance(e, Cos):
        return f"cos({_render(e.arg, 0)})", _ATOM
    if isinstance(e, Exp):
        return f"exp({_render(e.arg, 0)})", _ATOM
    if isinstance(e, Func):
        args = ", ".join(_render(a, 0) for a in e.args)
        ticks = "'" * e.primes
        return f"{e.name}{ticks}({args})", _ATOM
    if isinstance(e, Integral):
        parts = (_render(e.integrand, 0), e.var, _render(e.lo, 0),
                 _render(e.hi, 0))
        return "integrate(" + ", ".join(parts) + ")", _ATOM
    raise TypeError(f"unknown node {type(e).__name__}")


def render(e: Expr) -> str:
    return _render(e, 0)
