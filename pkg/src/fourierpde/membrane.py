"""Numeric modal solver for the vibrating circular membrane.

Initial displacement and velocity enter as plain numeric callables, not
expressions: the coefficients come from quadrature against the Bessel
modes, so the result is a finite expression tree with floating-point
prefactors.  `chop` then strips the terms that are pure round-off.
"""

import math
from typing import Callable, List, Union

import numpy as np
from scipy.special import jv as _jv

from .bessel import bessel_j_zeros
from .errors import DomainError
from .expr import (ZERO_E, Add, Const, Cos, Expr, FloatConst, Func, Mul,
                   Pow, Sin, Var, const, mul)

__all__ = ["solve_wave_disk", "chop"]

# fixed quadrature sizes keep repeated runs byte-identical and pin the
# coefficient values exactly
_N_RADIAL_INTERVALS = 14
_N_ANGULAR = 256

Sampler = Union[Callable[[float, float], float], int, float]


def _as_sampler(data: Sampler, what: str) -> Callable[[float, float], float]:
    if callable(data):
        return data
    try:
        value = float(data)
    except (TypeError, ValueError):
        raise DomainError(f"{what} must be a callable of (r, theta) "
                          f"or a number, got {data!r}") from None
    return lambda r, theta: value


def solve_wave_disk(c: float, R: float, f: Sampler, g: Sampler,
                    k: int, l: int, rvar: str = "r", avar: str = "theta",
                    tvar: str = "t") -> Expr:
    """Standing-wave expansion of a circular membrane of radius R.

    `f` and `g` sample the initial displacement and velocity at (r, theta).
    Angular orders m = 0..k each contribute its first l radial modes
    J_m(z_{m,j} r/R) with frequencies c z_{m,j}/R; the coefficients are
    projections computed by a fixed composite Simpson rule (14
    subintervals) in r against weight r and a 256-point periodic rule in
    theta, normalized by the closed-form mode norms.  Returns a
    float-coefficient expression in (rvar, avar, tvar) ready for `chop`
    and grid evaluation.
    """
    c = float(c)
    R = float(R)
    if not (c > 0.0 and R > 0.0):
        raise DomainError(f"need c > 0 and R > 0, got c={c}, R={R}")
    if not (isinstance(k, int) and k >= 0):
        raise DomainError(f"max angular order k must be an integer >= 0, got {k}")
    if not (isinstance(l, int) and l >= 1):
        raise DomainError(f"zeros per order l must be an integer >= 1, got {l}")
    fs = _as_sampler(f, "initial displacement f")
    gs = _as_sampler(g, "initial velocity g")

    n_r = _N_RADIAL_INTERVALS
    r_nodes = R * np.arange(n_r + 1) / n_r
    r_weights = np.ones(n_r + 1)
    r_weights[1:-1:2] = 4.0
    r_weights[2:-1:2] = 2.0
    r_weights *= R / (3.0 * n_r)
    thetas = 2.0 * math.pi * np.arange(_N_ANGULAR) / _N_ANGULAR
    dtheta = 2.0 * math.pi / _N_ANGULAR

    def sample(fn: Callable[[float, float], float], what: str) -> np.ndarray:
        vals = np.empty((n_r + 1, _N_ANGULAR))
        for i, r in enumerate(r_nodes):
            for q, th in enumerate(thetas):
                vals[i, q] = fn(float(r), float(th))
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"{what} produced a non-finite sample")
        return vals

    fv = sample(fs, "initial displacement")
    gv = sample(gs, "initial velocity")

    terms: List[Expr] = []
    rv, av, tv = Var(rvar), Var(avar), Var(tvar)
    for m in range(k + 1):
        zeros = bessel_j_zeros(float(m), l)
        cos_m = np.cos(m * thetas)
        sin_m = np.sin(m * thetas)
        # angular projections, still functions of r
        f_cos = fv @ cos_m * dtheta
        f_sin = fv @ sin_m * dtheta
        g_cos = gv @ cos_m * dtheta
        g_sin = gv @ sin_m * dtheta
        ang_norm = 2.0 * math.pi if m == 0 else math.pi
        for z in zeros:
            radial = _jv(float(m), z * r_nodes / R)
            proj = r_weights * r_nodes * radial
            norm = 0.5 * R * R * float(_jv(m + 1.0, z)) ** 2 * ang_norm
            omega = c * z / R
            a_c = float(proj @ f_cos) / norm
            at_c = float(proj @ g_cos) / (omega * norm)
            mode = Func("bessel_j", (const(m), mul(FloatConst(z / R), rv)))
            time_c = Cos(mul(FloatConst(omega), tv))
            time_s = Sin(mul(FloatConst(omega), tv))
            if m == 0:
                pairs = [(a_c, None, time_c), (at_c, None, time_s)]
            else:
                a_s = float(proj @ f_sin) / norm
                at_s = float(proj @ g_sin) / (omega * norm)
                ang_c = Cos(mul(const(m), av))
                ang_s = Sin(mul(const(m), av))
                pairs = [(a_c, ang_c, time_c), (a_s, ang_s, time_c),
                         (at_c, ang_c, time_s), (at_s, ang_s, time_s)]
            for coef, ang, osc in pairs:
                if coef == 0.0:
                    continue
                factors = [FloatConst(coef), mode]
                if ang is not None:
                    factors.append(ang)
                factors.append(osc)
                terms.append(Mul(tuple(factors)))
    if not terms:
        return ZERO_E
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def _prefactor(term: Expr) -> float:
    """Product of the numeric factors of a term; 1 when there are none."""
    if isinstance(term, FloatConst):
        return term.value
    if isinstance(term, Const):
        z = term.value.to_complex()
        return abs(z) if z.imag else z.real
    if isinstance(term, Mul):
        out = 1.0
        for f in term.factors:
            if isinstance(f, (FloatConst, Const)):
                out *= _prefactor(f)
        return out
    return 1.0


def chop(e: Expr, exponent: int = 12) -> Expr:
    """Drop additive terms whose numeric prefactor is below 10^-exponent.

    The cut is a strict less-than, so a prefactor exactly at the
    threshold survives.  Applying chop twice changes nothing.
    """
    if not (isinstance(exponent, int) and exponent >= 1):
        raise DomainError(f"exponent must be a positive integer, got {exponent}")
    threshold = 10.0 ** (-exponent)
    terms = e.terms if isinstance(e, Add) else (e,)
    kept = tuple(t for t in terms if abs(_prefactor(t)) >= threshold)
    if not kept:
        return ZERO_E
    if len(kept) == 1:
        return kept[0]
    return Add(kept)
