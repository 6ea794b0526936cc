"""Eigenfunction-expansion solvers for heat, parabolic, and wave
problems on an interval.

Pipeline: subtract a polynomial boundary lift, expand the data in the
eigenfamily of the homogeneous endpoint conditions, solve each modal
ODE in closed form (Duhamel integrals stay unevaluated outside the
poly*exp*trig fragment), and carry singular indices separately when the
data already contains basis frequencies.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .calculus import (as_expr, differentiate, integrate_definite,
                       integrate_or_defer, substitute)
from .eigen import BoundaryCondition, Eigensystem, RobinEigensystem, \
    eigensystem
from .errors import DomainError, UnsupportedProblemError
from .expr import (Const, Cos, Exp, Expr, FloatConst, Sin, Var, add,
                   const, div, mul, neg, powi, sub)
from .nf import canonicalize, expr_equal, to_nf
from .parse import parse
from .piecewise import PiecewiseExpr, as_piecewise, expr_to_scalar
from .render import render
from .fourier import resonant_indices
from .scalars import ONE, Scalar, ZERO, scalar
from .series import SeriesSolution


_ZERO = const(0)


def _as_input(e) -> Expr:
    if isinstance(e, str):
        return parse(e)
    return as_expr(e)


# ---------------------------------------------------------------------------
# boundary records and the polynomial lift

@dataclass(frozen=True)
class BoundaryRecord:
    """alpha*u + beta*u_x = h(t) at one endpoint."""
    alpha: Scalar
    beta: Scalar
    h: Expr

    @property
    def condition(self) -> BoundaryCondition:
        return BoundaryCondition(self.alpha, self.beta)

    @property
    def kind(self) -> str:
        if self.beta.is_zero:
            return "dirichlet"
        if self.alpha.is_zero:
            return "neumann"
        return "robin"

    @staticmethod
    def make(spec) -> "BoundaryRecord":
        if isinstance(spec, BoundaryRecord):
            return spec
        if isinstance(spec, str):
            bc = BoundaryCondition.make(spec)
            return BoundaryRecord(bc.alpha, bc.beta, _ZERO)
        if isinstance(spec, dict):
            bc = BoundaryCondition.make((spec.get("alpha", 0),
                                         spec.get("beta", 0)))
            return BoundaryRecord(bc.alpha, bc.beta,
                                  _as_input(spec.get("h", 0)))
        try:
            items = tuple(spec)
        except TypeError:
            raise DomainError(f"bad boundary record {spec!r}")
        if len(items) == 2:
            a, b = items
            h = _ZERO
        elif len(items) == 3:
            a, b, h = items
        else:
            raise DomainError(f"bad boundary record {spec!r}")
        bc = BoundaryCondition.make((a, b))
        return BoundaryRecord(bc.alpha, bc.beta, _as_input(h))


_LIFT_BASES: Tuple[Tuple[int, int], ...] = (
    # exponent pairs for w = A(t)*x^i + B(t)*x^j
    (0, 1), (0, 2), (1, 2), (0, 3), (1, 3),
)


def boundary_lift(left, right, L, var: str = "x") -> Expr:
    """Smallest polynomial w(x, t) matching both endpoint conditions.

    Tries w = A(t) x^i + B(t) x^j over a fixed basis ladder and takes the
    first pair whose endpoint system is nonsingular."""
    left = BoundaryRecord.make(left)
    right = BoundaryRecord.make(right)
    Ls = expr_to_scalar(L)
    if _is_zero_expr(left.h) and _is_zero_expr(right.h):
        return _ZERO

    def apply(rec: BoundaryRecord, at: Scalar, k: int) -> Scalar:
        # alpha*x^k + beta*k*x^(k-1) evaluated at the endpoint
        val = at ** k if k > 0 else ONE
        dval = scalar(k) * (at ** (k - 1)) if k >= 1 else ZERO
        return rec.alpha * val + rec.beta * dval

    for i, j in _LIFT_BASES:
        m11, m12 = apply(left, ZERO, i), apply(left, ZERO, j)
        m21, m22 = apply(right, Ls, i), apply(right, Ls, j)
        det = m11 * m22 - m12 * m21
        if det.is_zero:
            continue
        a = add(mul(Const(m22 / det), left.h),
                mul(Const(-m12 / det), right.h))
        b = add(mul(Const(-m21 / det), left.h),
                mul(Const(m11 / det), right.h))
        x = Var(var)
        return canonicalize(add(mul(a, powi(x, i) if i else const(1)),
                                mul(b, powi(x, j))))
    raise UnsupportedProblemError(
        "no polynomial lift fits these boundary conditions")


def _is_zero_expr(e: Expr) -> bool:
    return expr_equal(e, _ZERO)


# ---------------------------------------------------------------------------
# modal data shared by the time-dependent solvers

@dataclass
class _Modal:
    es: Eigensystem
    Fn: Expr                      # projection of initial data, symbolic n
    Qn: Expr                      # projection of source, symbolic n and t
    F0: Optional[Expr]            # zero-mode pieces when the family has one
    Q0: Optional[Expr]
    singular: List[int]
    Fj: Dict[int, Expr]
    Qj: Dict[int, Expr]


def _project(es: Eigensystem, pw: PiecewiseExpr, Q: Expr, var: str,
             extra_singular: Optional[List[int]] = None) -> _Modal:
    L = es.L
    inv_norm = (es.L / scalar(2)).inverse()
    phi = es.eigenfunction()
    Fn = canonicalize(mul(Const(inv_norm), pw.integrate(phi)))
    if _is_zero_expr(Q):
        Qn = _ZERO
    else:
        Qn = canonicalize(mul(Const(inv_norm),
                              integrate_definite(mul(Q, phi), var,
                                                 const(0), Const(L))))
    F0 = Q0 = None
    if es.has_zero_mode:
        F0 = canonicalize(mul(Const(L.inverse()), pw.integrate(None)))
        if _is_zero_expr(Q):
            Q0 = _ZERO
        else:
            Q0 = canonicalize(mul(Const(L.inverse()),
                                  integrate_definite(Q, var, const(0),
                                                     Const(L))))
    sing = set(resonant_indices(pw, var, L, es.p, es.q))
    if not _is_zero_expr(Q):
        sing |= set(resonant_indices(Q, var, L, es.p, es.q))
    if extra_singular:
        sing |= set(extra_singular)
    Fj: Dict[int, Expr] = {}
    Qj: Dict[int, Expr] = {}
    for j in sorted(sing):
        phij = es.eigenfunction(j)
        Fj[j] = canonicalize(mul(Const(inv_norm), pw.integrate(phij)))
        if _is_zero_expr(Q):
            Qj[j] = _ZERO
        else:
            Qj[j] = canonicalize(mul(Const(inv_norm),
                                     integrate_definite(mul(Q, phij), var,
                                                        const(0), Const(L))))
    return _Modal(es, Fn, Qn, F0, Q0, sorted(sing), Fj, Qj)


def _dummy_var(*taken: str) -> str:
    for name in ("s", "s0", "s1"):
        if name not in taken:
            return name
    raise DomainError("no free dummy variable")


# ---------------------------------------------------------------------------
# heat equation u_t = kappa u_xx + Q

def solve_heat(F, left, right, L, kappa=1, Q=0, var: str = "x",
               tvar: str = "t", terms: Optional[int] = None
               ) -> SeriesSolution:
    left = BoundaryRecord.make(left)
    right = BoundaryRecord.make(right)
    Ls = expr_to_scalar(L)
    ks = expr_to_scalar(kappa)
    if ks.sign() <= 0:
        raise DomainError("diffusivity must be positive")
    Q = _as_input(Q)
    pw = as_piecewise(_as_input(F) if not isinstance(F, PiecewiseExpr) else F,
                      var, 0, Ls)

    if "robin" in (left.kind, right.kind):
        return _solve_heat_robin(pw, left, right, Ls, ks, Q, var, tvar,
                                 terms)

    es = eigensystem(left.condition, right.condition, Ls, var)
    w = boundary_lift(left, right, Ls, var)
    if not _is_zero_expr(w):
        w0 = substitute(w, tvar, const(0))
        pw = pw.map(lambda b: sub(b, w0))
        Q = sub(Q, sub(differentiate(w, tvar),
                       mul(Const(ks), differentiate(differentiate(w, var),
                                                    var))))
        Q = canonicalize(Q)
    m = _project(es, pw, Q, var)

    t = Var(tvar)
    s = _dummy_var(var, tvar)

    def mode(Fc: Expr, Qc: Expr, lam: Expr) -> Expr:
        decay = Exp(mul(const(-1), Const(ks), lam, t))
        parts = []
        if not _is_zero_expr(Fc):
            parts.append(Fc)
        if not _is_zero_expr(Qc):
            grow = Exp(mul(Const(ks), lam, Var(s)))
            inner = integrate_or_defer(mul(grow, substitute(Qc, tvar,
                                                            Var(s))),
                                       s, const(0), t)
            parts.append(inner)
        if not parts:
            return _ZERO
        return mul(decay, add(*parts))

    summand = canonicalize(mul(mode(m.Fn, m.Qn, es.eigenvalue()),
                               es.eigenfunction()))
    closed_parts: List[Expr] = []
    if not _is_zero_expr(w):
        closed_parts.append(w)
    if es.has_zero_mode:
        u0 = []
        if m.F0 is not None and not _is_zero_expr(m.F0):
            u0.append(m.F0)
        if m.Q0 is not None and not _is_zero_expr(m.Q0):
            u0.append(integrate_or_defer(substitute(m.Q0, tvar, Var(s)),
                                         s, const(0), t))
        if u0:
            closed_parts.append(add(*u0))
    closed = canonicalize(add(*closed_parts)) if closed_parts else _ZERO

    special = []
    for j in m.singular:
        lam_j = canonicalize(es.eigenvalue(j))
        term = canonicalize(mul(mode(m.Fj[j], m.Qj[j], lam_j),
                                es.eigenfunction(j)))
        special.append((j, term))

    return SeriesSolution(summand=summand, closed=closed,
                          special=tuple(special), start=1,
                          truncation=terms)


def _solve_heat_robin(pw: PiecewiseExpr, left: BoundaryRecord,
                      right: BoundaryRecord, Ls: Scalar, ks: Scalar,
                      Q: Expr, var: str, tvar: str,
                      terms: Optional[int]) -> SeriesSolution:
    """Numeric-eigenvalue path for genuine Robin conditions.  Restricted
    to time-independent data: a finite modal sum with float scalars."""
    if terms is None:
        raise UnsupportedProblemError(
            "Robin conditions need a finite truncation order")
    if not _is_zero_expr(Q):
        raise UnsupportedProblemError(
            "Robin conditions support only Q = 0")
    w = boundary_lift(left, right, Ls, var)
    for rec in (left, right):
        if var in _free(rec.h) or tvar in _free(rec.h):
            raise UnsupportedProblemError(
                "Robin conditions support only constant boundary data")
    if not _is_zero_expr(w):
        pw = pw.map(lambda b: sub(b, w))
    res = eigensystem(left.condition, right.condition, Ls, var)
    assert isinstance(res, RobinEigensystem)
    from scipy.integrate import quad
    eigs = res.eigenvalues(terms)
    t = Var(tvar)
    x = Var(var)
    parts: List[Expr] = []
    kf = ks.to_float()
    for j, lam in enumerate(eigs, start=1):
        phi = res.eigenfunction_callable(j, count_hint=terms)
        num = 0.0
        for b in pw.branches:
            lo, hi = b.lo.to_float(), b.hi.to_float()
            num += quad(lambda xx: pw.eval_at(xx) * phi(xx), lo, hi,
                        epsabs=1e-12, epsrel=1e-12, limit=200)[0]
        den = quad(lambda xx: phi(xx) ** 2, 0.0, Ls.to_float(),
                   epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        cj = num / den
        if abs(cj) < 1e-15:
            continue
        if lam > 1e-30:
            k = math.sqrt(lam)
            phi_e = sub(mul(FloatConst(left.beta.to_float() * k),
                            Cos(mul(FloatConst(k), x))),
                        mul(FloatConst(left.alpha.to_float()),
                            Sin(mul(FloatConst(k), x))))
        elif lam < -1e-30:
            raise UnsupportedProblemError(
                "negative Robin eigenvalues are not supported here")
        else:
            phi_e = sub(FloatConst(left.beta.to_float()),
                        mul(FloatConst(left.alpha.to_float()), x))
        parts.append(mul(FloatConst(cj),
                         Exp(mul(FloatConst(-kf * lam), t)), phi_e))
    if not _is_zero_expr(w):
        parts.insert(0, w)
    closed = add(*parts) if parts else _ZERO
    return SeriesSolution(summand=_ZERO, closed=closed, special=(),
                          start=1, truncation=terms)


def _free(e: Expr):
    from .expr import free_vars
    return free_vars(e)


# ---------------------------------------------------------------------------
# general constant-coefficient parabolic u_t = kappa u_xx + v u_x + c u + Q

def reduce_parabolic(F, left, right, L, kappa=1, v=0, c=0, Q=0,
                     var: str = "x", tvar: str = "t"):
    """Substitute u = w e^rho to remove drift and reaction terms.

    Returns (rho, heat_kwargs): w solves the plain heat problem described
    by heat_kwargs, and u = e^rho w solves the original one."""
    left = BoundaryRecord.make(left)
    right = BoundaryRecord.make(right)
    Ls = expr_to_scalar(L)
    ks = expr_to_scalar(kappa)
    vs = expr_to_scalar(v)
    cs = expr_to_scalar(c)
    if ks.sign() <= 0:
        raise DomainError("diffusivity must be positive")
    Q = _as_input(Q)
    pw = as_piecewise(_as_input(F) if not isinstance(F, PiecewiseExpr) else F,
                      var, 0, Ls)

    gamma = cs - vs * vs / (scalar(4) * ks)     # time rate in rho
    slope = -(vs / (scalar(2) * ks))            # rho_x
    x, t = Var(var), Var(tvar)
    rho = canonicalize(add(mul(Const(gamma), t), mul(Const(slope), x)))

    # w(x,0) = e^{-rho(x,0)} F
    e_mx = Exp(mul(Const(-slope), x))
    new_pw = pw.map(lambda b: canonicalize(mul(e_mx, b)))
    new_Q = canonicalize(mul(Exp(neg(rho)), Q)) if not _is_zero_expr(Q) \
        else _ZERO

    def xform(rec: BoundaryRecord, at: Scalar) -> BoundaryRecord:
        alpha2 = rec.alpha + rec.beta * slope
        damp = mul(Exp(mul(Const(-gamma), t)),
                   Exp(Const(-(slope * at))))
        h2 = canonicalize(mul(damp, rec.h)) if not _is_zero_expr(rec.h) \
            else _ZERO
        return BoundaryRecord(alpha2, rec.beta, h2)

    heat_kwargs = dict(F=new_pw, left=xform(left, ZERO),
                       right=xform(right, Ls), L=Ls, kappa=ks, Q=new_Q,
                       var=var, tvar=tvar)
    return rho, heat_kwargs


def solve_parabolic(F, left, right, L, kappa=1, v=0, c=0, Q=0,
                    var: str = "x", tvar: str = "t",
                    terms: Optional[int] = None) -> SeriesSolution:
    rho, kw = reduce_parabolic(F, left, right, L, kappa, v, c, Q, var, tvar)
    sol = solve_heat(terms=terms, **kw)
    if _is_zero_expr(rho):
        return sol
    grow = Exp(rho)
    return sol.map(lambda e: canonicalize(mul(grow, e))
                   if not _is_zero_expr(e) else e)


# ---------------------------------------------------------------------------
# wave equation u_tt = c^2 u_xx + Q, Dirichlet ends

def solve_wave(f, g, left, right, L, c=1, Q=0, var: str = "x",
               tvar: str = "t", terms: Optional[int] = None,
               resonance: Optional[Tuple[str, int]] = None
               ) -> SeriesSolution:
    """Forced vibration with Dirichlet endpoint data.

    `resonance=(symbol, m)` asserts that the named frequency symbol in Q
    equals the m-th natural frequency; mode m is then computed directly,
    producing the secular term."""
    left = BoundaryRecord.make(left)
    right = BoundaryRecord.make(right)
    if left.kind != "dirichlet" or right.kind != "dirichlet":
        raise UnsupportedProblemError(
            "wave solver requires Dirichlet conditions at both ends")
    Ls = expr_to_scalar(L)
    cs = expr_to_scalar(c)
    if cs.sign() <= 0:
        raise DomainError("wave speed must be positive")
    Q = _as_input(Q)
    pw_f = as_piecewise(_as_input(f) if not isinstance(f, PiecewiseExpr)
                        else f, var, 0, Ls)
    pw_g = as_piecewise(_as_input(g) if not isinstance(g, PiecewiseExpr)
                        else g, var, 0, Ls)

    es = eigensystem(left.condition, right.condition, Ls, var)
    w = boundary_lift(left, right, Ls, var)
    if not _is_zero_expr(w):
        w0 = substitute(w, tvar, const(0))
        wt0 = substitute(differentiate(w, tvar), tvar, const(0))
        pw_f = pw_f.map(lambda b: sub(b, w0))
        pw_g = pw_g.map(lambda b: sub(b, wt0))
        Q = canonicalize(sub(Q, sub(differentiate(differentiate(w, tvar),
                                                  tvar),
                                    mul(Const(cs * cs),
                                        differentiate(differentiate(w, var),
                                                      var)))))

    extra = list(resonant_indices(pw_g, var, Ls, es.p, es.q))
    if resonance:
        extra.append(resonance[1])
    mf = _project(es, pw_f, Q, var, extra_singular=extra)
    mg = _project(es, pw_g, _ZERO, var, extra_singular=mf.singular)

    t = Var(tvar)
    s = _dummy_var(var, tvar)

    def mode(fc: Expr, gc: Expr, qc: Expr, omega: Expr) -> Expr:
        parts: List[Expr] = []
        if not _is_zero_expr(fc):
            parts.append(mul(fc, Cos(mul(omega, t))))
        if not _is_zero_expr(gc):
            parts.append(div(mul(gc, Sin(mul(omega, t))), omega))
        if not _is_zero_expr(qc):
            kern = Sin(mul(omega, sub(t, Var(s))))
            duh = integrate_or_defer(mul(kern, substitute(qc, tvar,
                                                          Var(s))),
                                     s, const(0), t)
            parts.append(div(duh, omega))
        if not parts:
            return _ZERO
        return add(*parts)

    omega_n = canonicalize(mul(Const(cs), es.frequency()))
    summand = canonicalize(mul(mode(mf.Fn, mg.Fn, mf.Qn, omega_n),
                               es.eigenfunction()))
    closed = w if not _is_zero_expr(w) else _ZERO

    special = []
    for j in sorted(set(mf.singular) | set(mg.singular)):
        omega_j = canonicalize(mul(Const(cs), es.frequency(j)))
        qj = mf.Qj.get(j, _ZERO)
        if resonance and j == resonance[1]:
            qj = canonicalize(substitute(qj, resonance[0], omega_j))
        term = canonicalize(mul(mode(mf.Fj.get(j, _ZERO),
                                     mg.Fj.get(j, _ZERO), qj, omega_j),
                                es.eigenfunction(j)))
        special.append((j, term))

    return SeriesSolution(summand=summand, closed=closed,
                          special=tuple(special), start=1,
                          truncation=terms)
