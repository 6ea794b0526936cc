"""Laplace solvers: rectangle, disk, wedge, and annulus.

Each solver separates variables and returns a SeriesSolution whose
general term is harmonic by construction.  Rectangle problems are split
into four one-sided subproblems; the normal profile of every mode is the
exponential pair C e^{mu y} + D e^{-mu y} solved exactly per mode.
Polar problems expand the boundary data in a full or half-range trig
series and attach the matching power of r.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Set, Tuple

from .calculus import differentiate, eval_numeric, substitute
from .eigen import eigensystem
from .errors import DomainError, FragmentError, UnsupportedProblemError
from .expr import (INDEX_VAR, Const, Cos, Exp, Expr, Func, Integral, Pow,
                   Sin, Var, add, const, contains_float, div, mul, neg, sub)
from .fourier import fourier_coeff, resonant_indices
from .nf import canonicalize, expr_equal
from .pde import _as_input, _is_zero_expr, _project
from .piecewise import PiecewiseExpr, as_piecewise, expr_to_scalar
from .scalars import ONE, PI, Scalar, ZERO, scalar
from .series import SeriesSolution

_ZERO = const(0)
_TWO_PI = PI * scalar(2)


# ---------------------------------------------------------------------------
# rectangle [0,a] x [0,b]

def solve_laplace_rectangle(a, b, flags, f0=0, fb=0, g0=0, ga=0,
                            xvar: str = "x", yvar: str = "y",
                            terms: Optional[int] = None) -> SeriesSolution:
    """Harmonic u on [0,a] x [0,b] with one condition per side.

    `flags` is (alpha, beta, gamma, delta) for the sides y=0, y=b, x=0,
    x=a in that order; flag 0 imposes the value and flag 1 the normal
    derivative, with data f0(x), fb(x), g0(y), ga(y) respectively."""
    try:
        fa, fbb, fg, fd = (int(v) for v in flags)
    except (TypeError, ValueError):
        raise DomainError(f"bad rectangle flags {flags!r}")
    if any(v not in (0, 1) for v in (fa, fbb, fg, fd)):
        raise DomainError("rectangle flags must be 0 (value) or 1 (slope)")
    a_s = expr_to_scalar(a)
    b_s = expr_to_scalar(b)
    if a_s.sign() <= 0 or b_s.sign() <= 0:
        raise DomainError("rectangle sides must be positive")

    sides = (
        # data, tangential (var, length, end flags), normal (var, length),
        # where the data lives and which end stays homogeneous
        (f0, xvar, a_s, fg, fd, yvar, ZERO, fa, b_s, fbb),
        (fb, xvar, a_s, fg, fd, yvar, b_s, fbb, ZERO, fa),
        (g0, yvar, b_s, fa, fbb, xvar, ZERO, fg, a_s, fd),
        (ga, yvar, b_s, fa, fbb, xvar, a_s, fd, ZERO, fg),
    )
    pieces = []
    for (data, tvar, tlen, lflag, rflag, nvar, d_at, d_flag, h_at,
         h_flag) in sides:
        data = _as_input(data) if not isinstance(data, PiecewiseExpr) \
            else data
        if not isinstance(data, PiecewiseExpr) and _is_zero_expr(data):
            continue
        pieces.append(_strip(data, tvar, tlen, lflag, rflag, nvar,
                             d_at, d_flag, h_at, h_flag))
    return _merge(pieces, terms)


def _strip(data, tvar: str, tlen: Scalar, lflag: int, rflag: int,
           nvar: str, d_at: Scalar, d_flag: int, h_at: Scalar,
           h_flag: int):
    """One-sided rectangle subproblem: data on the side `nvar = d_at`,
    homogeneous same-type condition at `nvar = h_at`, homogeneous flag
    conditions on the two tangential sides."""
    es = eigensystem("neumann" if lflag else "dirichlet",
                     "neumann" if rflag else "dirichlet", tlen, tvar)
    pw = as_piecewise(data, tvar, 0, tlen)
    m = _project(es, pw, _ZERO, tvar)

    summand = _ZERO
    if not _is_zero_expr(m.Fn):
        prof = _exp_profile(m.Fn, es.frequency(), nvar, d_at, d_flag,
                            h_at, h_flag)
        summand = canonicalize(mul(prof, es.eigenfunction()))
    specials: Dict[int, Expr] = {}
    for j in m.singular:
        prof = _exp_profile(m.Fj[j], es.frequency(j), nvar, d_at, d_flag,
                            h_at, h_flag)
        specials[j] = canonicalize(mul(prof, es.eigenfunction(j)))
    closed = _ZERO
    if es.has_zero_mode and m.F0 is not None and not _is_zero_expr(m.F0):
        closed = _linear_profile(m.F0, nvar, d_at, d_flag, h_at, h_flag)
    return summand, specials, set(m.singular), closed


def _exp_profile(coef: Expr, mu: Expr, nvar: str, d_at: Scalar,
                 d_flag: int, h_at: Scalar, h_flag: int) -> Expr:
    """C e^{mu y} + D e^{-mu y} with value/slope `coef` at y = d_at and
    the homogeneous condition at y = h_at."""
    def value_row(at: Scalar):
        return (Exp(mul(mu, Const(at))), Exp(mul(neg(mu), Const(at))))

    def slope_row(at: Scalar):
        return (mul(mu, Exp(mul(mu, Const(at)))),
                neg(mul(mu, Exp(mul(neg(mu), Const(at))))))

    r = slope_row(d_at) if d_flag else value_row(d_at)
    s = slope_row(h_at) if h_flag else value_row(h_at)
    det = sub(mul(r[0], s[1]), mul(r[1], s[0]))
    C = div(mul(coef, s[1]), det)
    D = neg(div(mul(coef, s[0]), det))
    y = Var(nvar)
    return canonicalize(add(mul(C, Exp(mul(mu, y))),
                            mul(D, Exp(mul(neg(mu), y)))))


def _linear_profile(coef: Expr, nvar: str, d_at: Scalar, d_flag: int,
                    h_at: Scalar, h_flag: int) -> Expr:
    """Zero-mode profile C + D y; the all-slope case is solvable only
    for zero-mean data."""
    r = (ZERO, ONE) if d_flag else (ONE, d_at)
    s = (ZERO, ONE) if h_flag else (ONE, h_at)
    det = r[0] * s[1] - r[1] * s[0]
    if det.is_zero:
        if _is_zero_expr(canonicalize(coef)):
            return _ZERO
        raise DomainError(
            "incompatible data: slope conditions on opposite sides "
            "require a zero-mean boundary function")
    C = div(mul(coef, Const(s[1])), Const(det))
    D = neg(div(mul(coef, Const(s[0])), Const(det)))
    return canonicalize(add(C, mul(D, Var(nvar))))


def _merge(pieces, terms: Optional[int]) -> SeriesSolution:
    if not pieces:
        return SeriesSolution(summand=_ZERO, closed=_ZERO, special=(),
                              start=1, truncation=terms)
    singular: Set[int] = set()
    for _, _, sing, _ in pieces:
        singular |= sing
    summand = canonicalize(add(*[p[0] for p in pieces]))
    closed = canonicalize(add(*[p[3] for p in pieces]))
    special: List[Tuple[int, Expr]] = []
    for j in sorted(singular):
        parts = []
        for psum, pspec, psing, _ in pieces:
            if j in psing:
                parts.append(pspec[j])
            elif not _is_zero_expr(psum):
                parts.append(substitute(psum, INDEX_VAR, const(j)))
        term = canonicalize(add(*parts)) if parts else _ZERO
        special.append((j, term))
    return SeriesSolution(summand=summand, closed=closed,
                          special=tuple(special), start=1,
                          truncation=terms)


# ---------------------------------------------------------------------------
# full-circle trig projection shared by disk and annulus

def _circle_coeffs(f, avar: str):
    """Mean and full-range trig projections of 2*pi-periodic data."""
    pw = as_piecewise(f if isinstance(f, PiecewiseExpr) else _as_input(f),
                      avar, 0, _TWO_PI)
    n = Var(INDEX_VAR)
    theta = Var(avar)
    inv_pi = Const(PI.inverse())
    mean = canonicalize(mul(Const((_TWO_PI).inverse()), pw.integrate(None)))
    an = canonicalize(mul(inv_pi, pw.integrate(Cos(mul(n, theta)))))
    bn = canonicalize(mul(inv_pi, pw.integrate(Sin(mul(n, theta)))))
    sing = sorted(resonant_indices(pw, avar, PI))
    direct: Dict[int, Tuple[Expr, Expr]] = {}
    for j in sing:
        aj = canonicalize(mul(inv_pi,
                              pw.integrate(Cos(mul(const(j), theta)))))
        bj = canonicalize(mul(inv_pi,
                              pw.integrate(Sin(mul(const(j), theta)))))
        direct[j] = (aj, bj)
    return mean, an, bn, sing, direct


def _require_zero_mean(mean: Expr, what: str) -> None:
    """Compatibility gate for pure-slope data; opaque means are trusted."""
    e = canonicalize(mean)
    if _is_zero_expr(e):
        return
    if _has_opaque(e):
        return
    if contains_float(e):
        if abs(eval_numeric(e, {})) <= 1e-10:
            return
    raise DomainError(f"incompatible {what} data: the boundary slope "
                      "must have zero mean")


def _has_opaque(e: Expr) -> bool:
    if isinstance(e, (Func, Integral)):
        return True
    for name in ("args", "terms", "factors"):
        sub_nodes = getattr(e, name, None)
        if sub_nodes is not None:
            return any(_has_opaque(t) for t in sub_nodes)
    for name in ("arg", "base", "exponent", "integrand", "lo", "hi"):
        t = getattr(e, name, None)
        if t is not None and _has_opaque(t):
            return True
    return False


# ---------------------------------------------------------------------------
# disk of radius R

def solve_laplace_disk(R, f, bc: str = "dirichlet", rvar: str = "r",
                       avar: str = "theta",
                       terms: Optional[int] = None) -> SeriesSolution:
    """Harmonic u on the disk r <= R with u = f (Dirichlet) or u_r = f
    (Neumann, zero-mean gauge) on the rim."""
    Rs = expr_to_scalar(R)
    if Rs.sign() <= 0:
        raise DomainError("disk radius must be positive")
    kind = bc.lower()
    if kind not in ("dirichlet", "neumann"):
        raise UnsupportedProblemError(f"unsupported disk condition {bc!r}")
    mean, an, bn, sing, direct = _circle_coeffs(f, avar)

    n = Var(INDEX_VAR)
    theta = Var(avar)
    radial = Pow(div(Var(rvar), Const(Rs)), n)

    if kind == "neumann":
        _require_zero_mean(mean, "disk slope")
        closed = _ZERO
        scale = div(Const(Rs), n)          # c_n r^n = a_n (R/n)(r/R)^n
    else:
        closed = canonicalize(mean)
        scale = const(1)

    def angular(ac: Expr, bc_: Expr, idx) -> Expr:
        parts = []
        if not _is_zero_expr(ac):
            parts.append(mul(ac, Cos(mul(idx, theta))))
        if not _is_zero_expr(bc_):
            parts.append(mul(bc_, Sin(mul(idx, theta))))
        return add(*parts) if parts else _ZERO

    ang = angular(an, bn, n)
    summand = _ZERO if _is_zero_expr(ang) else \
        canonicalize(mul(scale, radial, ang))
    special = []
    for j in sing:
        aj, bj = direct[j]
        ang_j = angular(aj, bj, const(j))
        if _is_zero_expr(ang_j):
            special.append((j, _ZERO))
            continue
        scale_j = div(Const(Rs), const(j)) if kind == "neumann" else const(1)
        rad_j = Pow(div(Var(rvar), Const(Rs)), const(j))
        special.append((j, canonicalize(mul(scale_j, rad_j, ang_j))))
    return SeriesSolution(summand=summand, closed=closed,
                          special=tuple(special), start=1,
                          truncation=terms)


# ---------------------------------------------------------------------------
# wedge 0 <= theta <= opening, radius R

def solve_laplace_wedge(R, opening, f, bc: str = "dirichlet",
                        rvar: str = "r", avar: str = "theta",
                        terms: Optional[int] = None) -> SeriesSolution:
    """Harmonic u on the wedge with u = 0 on both straight sides and
    u = f (Dirichlet) or u_r = f (Neumann) on the arc r = R."""
    Rs = expr_to_scalar(R)
    alpha = expr_to_scalar(opening)
    if Rs.sign() <= 0:
        raise DomainError("wedge radius must be positive")
    if alpha.sign() <= 0 or (alpha - _TWO_PI).sign() > 0:
        raise DomainError("wedge opening must lie in (0, 2*pi]")
    kind = bc.lower()
    if kind not in ("dirichlet", "neumann"):
        raise UnsupportedProblemError(f"unsupported wedge condition {bc!r}")

    coeffs = fourier_coeff(f, var=avar, L=alpha, kind="sine")
    nu = PI / alpha                         # angular frequency unit
    n = Var(INDEX_VAR)

    def term(bc_coef: Expr, idx) -> Expr:
        if _is_zero_expr(bc_coef):
            return _ZERO
        power = Pow(div(Var(rvar), Const(Rs)), mul(Const(nu), idx))
        ang = Sin(mul(Const(nu), idx, Var(avar)))
        if kind == "neumann":
            # c_n nu n R^{nu n - 1} = b_n
            scale = div(Const(Rs * nu.inverse()), idx)
            return canonicalize(mul(scale, power, ang, bc_coef))
        return canonicalize(mul(power, ang, bc_coef))

    summand = term(coeffs.general["bn"], n)
    special = []
    for j, vals in coeffs.singular:
        special.append((j, term(vals["b"], const(j))))
    return SeriesSolution(summand=summand, closed=_ZERO,
                          special=tuple(special), start=1,
                          truncation=terms)


# ---------------------------------------------------------------------------
# annulus R1 <= r <= R2, Dirichlet data on both circles

def solve_laplace_annulus(R1, R2, f, g, bc: str = "dirichlet",
                          rvar: str = "r", avar: str = "theta",
                          terms: Optional[int] = None) -> SeriesSolution:
    """Harmonic u between the circles r = R1 and r = R2 with u = f on
    the inner rim and u = g on the outer rim."""
    if bc.lower() != "dirichlet":
        raise UnsupportedProblemError(
            "annulus problems support Dirichlet data only")
    r1 = expr_to_scalar(R1)
    r2 = expr_to_scalar(R2)
    if r1.sign() <= 0 or (r2 - r1).sign() <= 0:
        raise DomainError("annulus radii must satisfy 0 < R1 < R2")
    mean_f, an_f, bn_f, sing_f, dir_f = _circle_coeffs(f, avar)
    mean_g, an_g, bn_g, sing_g, dir_g = _circle_coeffs(g, avar)

    n = Var(INDEX_VAR)
    theta = Var(avar)
    log_r1 = Func("log", (Const(r1),))
    log_r2 = Func("log", (Const(r2),))

    # zero mode A + B log r through both means
    B0 = div(sub(mean_g, mean_f), sub(log_r2, log_r1))
    A0 = sub(mean_f, mul(B0, log_r1))
    closed = canonicalize(add(A0, mul(B0, Func("log", (Var(rvar),)))))

    def pair(fc: Expr, gc: Expr, idx) -> Expr:
        """A r^idx + B r^-idx matching fc at R1 and gc at R2."""
        if _is_zero_expr(fc) and _is_zero_expr(gc):
            return _ZERO
        p11, p12 = Pow(Const(r1), idx), Pow(Const(r1), neg(idx))
        p21, p22 = Pow(Const(r2), idx), Pow(Const(r2), neg(idx))
        det = sub(mul(p11, p22), mul(p12, p21))
        A = div(sub(mul(fc, p22), mul(p12, gc)), det)
        B = div(sub(mul(p11, gc), mul(fc, p21)), det)
        return add(mul(A, Pow(Var(rvar), idx)),
                   mul(B, Pow(Var(rvar), neg(idx))))

    parts = []
    rad_cos = pair(an_f, an_g, n)
    if not _is_zero_expr(rad_cos):
        parts.append(mul(rad_cos, Cos(mul(n, theta))))
    rad_sin = pair(bn_f, bn_g, n)
    if not _is_zero_expr(rad_sin):
        parts.append(mul(rad_sin, Sin(mul(n, theta))))
    summand = canonicalize(add(*parts)) if parts else _ZERO

    special = []
    for j in sorted(set(sing_f) | set(sing_g)):
        aj_f, bj_f = dir_f[j] if j in dir_f else (
            substitute(an_f, INDEX_VAR, const(j)),
            substitute(bn_f, INDEX_VAR, const(j)))
        aj_g, bj_g = dir_g[j] if j in dir_g else (
            substitute(an_g, INDEX_VAR, const(j)),
            substitute(bn_g, INDEX_VAR, const(j)))
        parts_j = []
        rc = pair(aj_f, aj_g, const(j))
        if not _is_zero_expr(rc):
            parts_j.append(mul(rc, Cos(mul(const(j), theta))))
        rs = pair(bj_f, bj_g, const(j))
        if not _is_zero_expr(rs):
            parts_j.append(mul(rs, Sin(mul(const(j), theta))))
        tj = canonicalize(add(*parts_j)) if parts_j else _ZERO
        special.append((j, tj))
    return SeriesSolution(summand=summand, closed=closed,
                          special=tuple(special), start=1,
                          truncation=terms)


# ---------------------------------------------------------------------------
# harmonicity check used by the property tests

def polar_laplacian(u: Expr, rvar: str = "r", avar: str = "theta") -> Expr:
    """u_rr + u_r / r + u_theta_theta / r^2, canonicalized."""
    ur = differentiate(u, rvar)
    urr = differentiate(ur, rvar)
    utt = differentiate(differentiate(u, avar), avar)
    r = Var(rvar)
    return canonicalize(add(urr, div(ur, r), div(utt, mul(r, r))))


def cartesian_laplacian(u: Expr, xvar: str = "x", yvar: str = "y") -> Expr:
    """u_xx + u_yy, canonicalized."""
    return canonicalize(add(
        differentiate(differentiate(u, xvar), xvar),
        differentiate(differentiate(u, yvar), yvar)))
