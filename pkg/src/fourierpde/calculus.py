"""Differentiation, exact definite integration, and numeric evaluation.

The integrator covers products x^r * trig(a*x+b) * exp(p*x+q) with
coefficients that may be rational functions of the series index; the
recursion is integration by parts on the polynomial degree.  Factors
containing opaque functions stay inside an unevaluated integral node
with all variable-free factors pulled out front.
"""

from __future__ import annotations

import cmath
import math
import warnings
from typing import Callable, Dict, Optional, Tuple, Union

from .errors import ConvergenceError, FragmentError, UnboundSymbolError
from .expr import (Add, Const, Cos, Exp, Expr, FloatConst, Func, Integral,
                   Mul, Pow, Sin, Var, add, const, contains_float, free_vars,
                   mul, neg, sub, subst_var)
from .nf import (NF, NF_ONE, NF_ZERO, AFunc, AIntegral, ASymPow, ATrig, AVar,
                 Monomial, _atom_free_vars, canonicalize, from_nf,
                 nf_add, nf_defer_integral, nf_div, nf_exp, nf_free_vars,
                 nf_free_vars_mp, nf_from_int, nf_from_mono, nf_from_scalar,
                 nf_from_var, nf_inv, nf_linear_in_var, nf_make, nf_mul,
                 nf_neg, nf_pow_int, nf_sub, nf_trig, to_nf)
from .scalars import IMAG, ONE, Scalar, ZERO, scalar

Numberish = Union[int, float, Scalar, Expr]


def as_expr(x: Numberish) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Scalar):
        return Const(x)
    if isinstance(x, int):
        return const(x)
    if isinstance(x, float):
        return FloatConst(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as an expression")


# ---------------------------------------------------------------------------
# differentiation

def differentiate(e: Expr, var: str) -> Expr:
    """Raw derivative tree; canonicalize() if a normal form is wanted."""
    d = _diff(e, var)
    return d


def _diff(e: Expr, var: str) -> Expr:
    if isinstance(e, (Const, FloatConst)):
        return const(0)
    if isinstance(e, Var):
        return const(1) if e.name == var else const(0)
    if isinstance(e, Add):
        return add(*(_diff(t, var) for t in e.terms))
    if isinstance(e, Mul):
        terms = []
        fs = e.factors
        for i, f in enumerate(fs):
            df = _diff(f, var)
            if isinstance(df, Const) and df.value.is_zero:
                continue
            terms.append(mul(*fs[:i], df, *fs[i + 1:]))
        return add(*terms)
    if isinstance(e, Pow):
        b, x = e.base, e.exponent
        if var not in free_vars(x):
            db = _diff(b, var)
            return mul(x, Pow(b, sub(x, const(1))), db)
        if var not in free_vars(b):
            dx = _diff(x, var)
            return mul(e, Func("log", (b,)), dx)
        raise FragmentError("cannot differentiate f(x)^g(x) forms")
    if isinstance(e, Sin):
        return mul(Cos(e.arg), _diff(e.arg, var))
    if isinstance(e, Cos):
        return mul(neg(Sin(e.arg)), _diff(e.arg, var))
    if isinstance(e, Exp):
        return mul(e, _diff(e.arg, var))
    if isinstance(e, Func):
        if e.name == "log" and len(e.args) == 1 and e.primes == 0:
            return mul(_diff(e.args[0], var), Pow(e.args[0], const(-1)))
        if len(e.args) == 1:
            return mul(Func(e.name, e.args, e.primes + 1),
                       _diff(e.args[0], var))
        # multi-argument special functions: differentiate in the last
        # argument only (e.g. bessel_j(m, u) in u)
        head, last = e.args[:-1], e.args[-1]
        if any(var in free_vars(a) for a in head):
            raise FragmentError(
                f"cannot differentiate {e.name} in a non-final argument")
        return mul(Func(e.name, e.args, e.primes + 1), _diff(last, var))
    if isinstance(e, Integral):
        parts = []
        dhi = _diff(e.hi, var)
        if not (isinstance(dhi, Const) and dhi.value.is_zero):
            parts.append(mul(subst_var(e.integrand, e.var, e.hi), dhi))
        dlo = _diff(e.lo, var)
        if not (isinstance(dlo, Const) and dlo.value.is_zero):
            parts.append(neg(mul(subst_var(e.integrand, e.var, e.lo), dlo)))
        if var != e.var and var in free_vars(e.integrand):
            parts.append(Integral(_diff(e.integrand, var), e.var, e.lo, e.hi))
        return add(*parts)
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# exact definite integration

def integrate_definite(e: Expr, var: str, lo: Numberish, hi: Numberish) -> Expr:
    """Exact integral of `e` dvar over [lo, hi]; canonical result."""
    return from_nf(integrate_nf(to_nf(e), var, as_expr(lo), as_expr(hi)))


def integrate_or_defer(e: Expr, var: str, lo: Numberish,
                       hi: Numberish) -> Expr:
    """Like integrate_definite, but shapes outside the closed-form
    fragment come back as an unevaluated Integral node."""
    lo, hi = as_expr(lo), as_expr(hi)
    try:
        return integrate_definite(e, var, lo, hi)
    except FragmentError:
        return from_nf(to_nf(Integral(canonicalize(e), var, lo, hi)))


def integrate_nf(nf: NF, var: str, lo: Expr, hi: Expr) -> NF:
    if var in nf_free_vars_mp(nf.den):
        raise FragmentError(
            f"integration variable '{var}' occurs in a denominator")
    total = NF_ZERO
    for mono, coeff in nf.num.items:
        total = nf_add(total, _integrate_monomial(mono, coeff, var, lo, hi))
    den_nf = NF(nf.den, NF_ONE.den)
    if not _den_is_one(nf):
        total = nf_div(total, den_nf)
    return total


def _den_is_one(nf: NF) -> bool:
    its = nf.den.items
    return len(its) == 1 and not its[0][0].atoms \
        and its[0][0].exparg is None and its[0][1].is_one


def _integrate_monomial(m: Monomial, c: Scalar, var: str,
                        lo: Expr, hi: Expr) -> NF:
    coeff_pairs = []
    dep_pairs = []
    opaque = False
    r = 0
    trig: Optional[ATrig] = None
    for a, p in m.atoms:
        if var not in _atom_free_vars(a):
            coeff_pairs.append((a, p))
            continue
        dep_pairs.append((a, p))
        if isinstance(a, (AFunc, AIntegral)):
            opaque = True
        elif isinstance(a, AVar) and a.name == var:
            r = p
        elif isinstance(a, ATrig) and trig is None and p == 1:
            trig = a
    p_slope = NF_ZERO
    q_rest = None
    if m.exparg is not None:
        if var in nf_free_vars(m.exparg):
            p_slope, q_rest = nf_linear_in_var(m.exparg, var)
        else:
            q_rest = m.exparg

    coeff_mono = Monomial(tuple(coeff_pairs),
                          q_rest if q_rest is not None and not q_rest.is_zero
                          else None)
    coeff_nf = nf_from_mono(coeff_mono, c)

    if opaque:
        dep_exp = None if p_slope.is_zero else nf_mul(p_slope, nf_from_var(var))
        dep_mono, s = _mono_from(dep_pairs, dep_exp)
        deferred = nf_defer_integral(nf_from_mono(dep_mono, s), var,
                                     to_nf(lo), to_nf(hi))
        return nf_mul(coeff_nf, deferred)

    # strict fragment checks for the closed-form path
    for a, p in dep_pairs:
        if isinstance(a, AVar) and a.name == var:
            if p < 0:
                raise FragmentError(
                    "negative power of the integration variable")
        elif isinstance(a, ATrig):
            if p != 1 or a is not trig:
                raise FragmentError(
                    "unsupported trig power in the integration variable")
        else:
            raise FragmentError(
                f"unsupported factor in the integration variable: "
                f"{type(a).__name__}")

    body = _poly_exp_trig_nf(r, trig, p_slope, var)
    F = _antiderivative(body, var)
    upper = _nf_subst(F, var, hi)
    lower = _nf_subst(F, var, lo)
    return nf_mul(coeff_nf, nf_sub(upper, lower))


def _mono_from(pairs, exparg) -> Tuple[Monomial, Scalar]:
    from .nf import mono_make
    return mono_make(tuple(pairs), exparg)


def _poly_exp_trig_nf(r: int, trig: Optional[ATrig], p: NF, var: str) -> NF:
    out = nf_pow_int(nf_from_var(var), r) if r else NF_ONE
    if trig is not None:
        out = nf_mul(out, nf_from_mono(Monomial(((trig, 1),), None), ONE))
    if not p.is_zero:
        out = nf_mul(out, nf_exp(nf_mul(p, nf_from_var(var))))
    return out


def _nf_subst(a: NF, var: str, value: Expr) -> NF:
    return to_nf(subst_var(from_nf(a), var, value))


def _antiderivative(body: NF, var: str) -> NF:
    """Antiderivative of a fragment normal form with respect to var."""
    if var in nf_free_vars_mp(body.den):
        raise FragmentError(
            f"integration variable '{var}' occurs in a denominator")
    total = NF_ZERO
    for m, c in body.num.items:
        total = nf_add(total, _anti_mono(m, c, var))
    if not _den_is_one(body):
        total = nf_div(total, NF(body.den, NF_ONE.den))
    return total


def _anti_mono(m: Monomial, c: Scalar, var: str) -> NF:
    coeff_pairs = []
    r = 0
    trig: Optional[ATrig] = None
    for a, p in m.atoms:
        if var not in _atom_free_vars(a):
            coeff_pairs.append((a, p))
        elif isinstance(a, AVar) and a.name == var and p > 0:
            r = p
        elif isinstance(a, ATrig) and p == 1 and trig is None:
            trig = a
        else:
            raise FragmentError(
                f"unsupported factor in antiderivative: {type(a).__name__}")
    p_slope, q_rest = NF_ZERO, None
    if m.exparg is not None:
        if var in nf_free_vars(m.exparg):
            p_slope, q_rest = nf_linear_in_var(m.exparg, var)
        else:
            q_rest = m.exparg
    cm = Monomial(tuple(coeff_pairs),
                  q_rest if q_rest is not None and not q_rest.is_zero else None)
    coeff_nf = nf_from_mono(cm, c)
    return nf_mul(coeff_nf, _anti_core(r, trig, p_slope, var))


def _anti_core(r: int, trig: Optional[ATrig], p: NF, var: str) -> NF:
    xv = nf_from_var(var)
    if trig is None and p.is_zero:
        # plain power
        return nf_div(nf_pow_int(xv, r + 1), nf_from_int(r + 1))
    phi = _base_phi(trig, p, var)
    if phi is None:
        # exp * trig with p^2 + a^2 = 0: split the trig exponentially
        a_nf, b_nf = nf_linear_in_var(trig.arg, var)
        i_nf = nf_from_scalar(IMAG)
        plus = nf_exp(nf_add(nf_mul(p, xv),
                             nf_mul(i_nf, nf_add(nf_mul(a_nf, xv), b_nf))))
        minus = nf_exp(nf_sub(nf_mul(p, xv),
                              nf_mul(i_nf, nf_add(nf_mul(a_nf, xv), b_nf))))
        if trig.kind == "sin":
            two_i = nf_mul(nf_from_int(2), i_nf)
            body = nf_div(nf_sub(plus, minus), two_i)
        else:
            body = nf_div(nf_add(plus, minus), nf_from_int(2))
        if r:
            body = nf_mul(nf_pow_int(xv, r), body)
        return _antiderivative(body, var)
    if r == 0:
        return phi
    # by parts: int x^r d(phi-part) = x^r*phi - r * int x^(r-1)*phi
    tail = _antiderivative(nf_mul(nf_pow_int(xv, r - 1), phi), var)
    return nf_sub(nf_mul(nf_pow_int(xv, r), phi),
                  nf_mul(nf_from_int(r), tail))


def _base_phi(trig: Optional[ATrig], p: NF, var: str) -> Optional[NF]:
    """Antiderivative of trig(ax+b)*exp(px); None if resonant (p = +-ia)."""
    xv = nf_from_var(var)
    if trig is None:
        return nf_div(nf_exp(nf_mul(p, xv)), p)
    a_nf, _ = nf_linear_in_var(trig.arg, var)
    t_nf = nf_from_mono(Monomial(((trig, 1),), None), ONE)
    if p.is_zero:
        other = "cos" if trig.kind == "sin" else "sin"
        o_nf = nf_trig(other, trig.arg)
        if trig.kind == "sin":
            return nf_div(nf_neg(o_nf), a_nf)
        return nf_div(o_nf, a_nf)
    dsq = nf_add(nf_mul(p, p), nf_mul(a_nf, a_nf))
    if dsq.is_zero:
        return None
    e_nf = nf_exp(nf_mul(p, xv))
    o_nf = nf_trig("cos" if trig.kind == "sin" else "sin", trig.arg)
    if trig.kind == "sin":
        core = nf_sub(nf_mul(p, t_nf), nf_mul(a_nf, o_nf))
    else:
        core = nf_add(nf_mul(p, t_nf), nf_mul(a_nf, o_nf))
    return nf_div(nf_mul(e_nf, core), dsq)


# ---------------------------------------------------------------------------
# numeric evaluation

Bindings = Dict[str, Union[int, float, complex]]
FuncImpls = Dict[str, Callable[..., Union[float, complex]]]


def _builtin_func(name: str, primes: int):
    if name == "log" and primes == 0:
        return lambda z: cmath.log(z) if (isinstance(z, complex)
                                          or z <= 0) else math.log(z)
    if name == "bessel_j":
        from scipy.special import jv, jvp
        if primes == 0:
            return lambda m, z: jv(m, _real(z, "bessel_j order/argument"))
        return lambda m, z: jvp(m, _real(z, "bessel_j argument"), n=primes)
    return None


def _real(z, what: str) -> float:
    if isinstance(z, complex):
        if abs(z.imag) > 1e-12 * max(1.0, abs(z.real)):
            raise ValueError(f"{what} must be real, got {z}")
        return z.real
    return float(z)


def eval_numeric(e: Expr, bindings: Optional[Bindings] = None,
                 funcs: Optional[FuncImpls] = None) -> Union[float, complex]:
    """Evaluate to a float (or complex when the value is genuinely complex).

    `bindings` maps variable names to numbers; `funcs` maps opaque
    function names (with derivative ticks, e.g. "f'") to callables.
    Unevaluated integrals are computed by adaptive quadrature and
    non-convergence raises ConvergenceError.
    """
    z = _eval(e, bindings or {}, funcs or {})
    if isinstance(z, complex):
        if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
            return z.real
        return z
    return float(z)


def _eval(e: Expr, env: Bindings, funcs: FuncImpls) -> complex:
    if isinstance(e, Const):
        z = e.value.to_complex()
        return z.real if z.imag == 0.0 else z
    if isinstance(e, FloatConst):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise UnboundSymbolError(f"unbound variable '{e.name}'") from None
    if isinstance(e, Add):
        return sum(_eval(t, env, funcs) for t in e.terms)
    if isinstance(e, Mul):
        out = 1.0
        for f in e.factors:
            out = out * _eval(f, env, funcs)
        return out
    if isinstance(e, Pow):
        b = _eval(e.base, env, funcs)
        x = _eval(e.exponent, env, funcs)
        if isinstance(x, float) and x == int(x) and not isinstance(b, complex):
            return b ** int(x)
        return complex(b) ** x
    if isinstance(e, Sin):
        z = _eval(e.arg, env, funcs)
        return cmath.sin(z) if isinstance(z, complex) else math.sin(z)
    if isinstance(e, Cos):
        z = _eval(e.arg, env, funcs)
        return cmath.cos(z) if isinstance(z, complex) else math.cos(z)
    if isinstance(e, Exp):
        z = _eval(e.arg, env, funcs)
        return cmath.exp(z) if isinstance(z, complex) else math.exp(z)
    if isinstance(e, Func):
        tag = e.name + "'" * e.primes
        impl = funcs.get(tag)
        if impl is None and e.primes == 0:
            impl = funcs.get(e.name)
        if impl is None:
            impl = _builtin_func(e.name, e.primes)
        if impl is None:
            raise UnboundSymbolError(f"unbound function '{tag}'")
        args = [_eval(a, env, funcs) for a in e.args]
        return impl(*args)
    if isinstance(e, Integral):
        return _eval_integral(e, env, funcs)
    raise TypeError(f"unknown node {type(e).__name__}")


def _eval_integral(e: Integral, env: Bindings, funcs: FuncImpls) -> complex:
    from scipy.integrate import quad

    lo = _real(_eval(e.lo, env, funcs), "integration bound")
    hi = _real(_eval(e.hi, env, funcs), "integration bound")

    def f(s: float) -> complex:
        inner = dict(env)
        inner[e.var] = s
        return _eval(e.integrand, inner, funcs)

    def run(part: Callable[[float], float]) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            try:
                val, err = quad(part, lo, hi, epsabs=1e-12, epsrel=1e-12,
                                limit=200)
            except Warning as w:
                raise ConvergenceError(
                    f"quadrature did not converge: {w}") from None
        if err > max(1e-9, 1e-8 * abs(val)):
            raise ConvergenceError(
                f"quadrature error estimate {err:.2e} too large")
        return val

    probe = f(lo + 0.382 * (hi - lo))
    needs_imag = isinstance(probe, complex) and probe.imag != 0.0
    re = run(lambda s: complex(f(s)).real)
    if needs_imag:
        im = run(lambda s: complex(f(s)).imag)
        if im != 0.0:
            return complex(re, im)
    return re


# ---------------------------------------------------------------------------
# convenience

def substitute(e: Expr, var: str, value: Numberish) -> Expr:
    """Substitute, re-canonicalizing when the tree is exact."""
    out = subst_var(e, var, as_expr(value))
    if contains_float(out):
        return out
    return canonicalize(out)
