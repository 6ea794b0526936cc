"""Fourier coefficients and series with exact singular-index handling.

Coefficient formulas are computed once with a symbolic integer index.
When the input already contains basis frequencies, the general formula
has a vanishing denominator at those indices; the affected indices are
detected up front, their coefficients integrated directly, and the
general term excludes them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple, Union

from .calculus import as_expr, substitute
from .errors import DomainError
from .expr import (Const, Cos, Exp, Expr, INDEX_VAR, Sin, Var, add, const,
                   mul, neg)
from .nf import (ATrig, NF, nf_free_vars, nf_is_const, nf_linear_in_var,
                 to_nf)
from .errors import FragmentError
from .parse import parse
from .piecewise import PiecewiseExpr, as_piecewise, expr_to_scalar
from .render import render
from .scalars import IMAG, ONE, PI, Scalar, ZERO, scalar
from .series import SeriesSolution


KINDS = ("trig", "cosine", "sine", "complex")

_KIND_KEYS = {
    "trig": ("a0", "an", "bn"),
    "cosine": ("a0", "an"),
    "sine": ("bn",),
    "complex": ("c0", "cn"),
}


# ---------------------------------------------------------------------------
# term classification

@dataclass(frozen=True)
class TermPattern:
    """Shape of one product term relative to a variable."""
    shape: str                      # polynomial | trig | exp | mixed |
                                    # opaque | rational | sum
    degree: Optional[int] = None    # power of the variable
    trig_kind: Optional[str] = None
    freq: Optional[Scalar] = None   # var coefficient inside the trig factor
    exp_rate: Optional[Scalar] = None


def classify_term(term: Union[Expr, str], var: str) -> TermPattern:
    if isinstance(term, str):
        term = parse(term)
    nf = to_nf(term)
    if var in nf_free_vars_of_den(nf):
        return TermPattern("rational")
    if len(nf.num.items) != 1:
        return TermPattern("sum")
    mono, _ = nf.num.items[0]
    degree = 0
    trig_kind = None
    freq = None
    exp_rate = None
    opaque = False
    seen_trig = 0
    for a, p in mono.atoms:
        fv = _afree(a)
        if var not in fv:
            continue
        from .nf import AVar
        if isinstance(a, AVar):
            degree = p
        elif isinstance(a, ATrig) and p == 1:
            seen_trig += 1
            trig_kind = a.kind
            freq = _const_slope(a.arg, var)
        else:
            opaque = True
    if mono.exparg is not None and var in nf_free_vars(mono.exparg):
        exp_rate = _const_slope(mono.exparg, var)
        if exp_rate is None:
            opaque = True
    if opaque or seen_trig > 1:
        return TermPattern("opaque", degree=degree)
    if trig_kind and exp_rate is not None:
        shape = "mixed"
    elif trig_kind:
        shape = "trig"
    elif exp_rate is not None:
        shape = "exp"
    else:
        shape = "polynomial"
    return TermPattern(shape, degree=degree, trig_kind=trig_kind,
                       freq=freq, exp_rate=exp_rate)


def nf_free_vars_of_den(nf: NF) -> frozenset:
    from .nf import nf_free_vars_mp
    return nf_free_vars_mp(nf.den)


def _afree(a) -> frozenset:
    from .nf import _atom_free_vars
    return _atom_free_vars(a)


def _const_slope(arg_nf: NF, var: str) -> Optional[Scalar]:
    try:
        slope, _ = nf_linear_in_var(arg_nf, var)
    except FragmentError:
        return None
    return nf_is_const(slope)


# ---------------------------------------------------------------------------
# resonance detection against the eigenvalue family (p*m + q)*pi / (2L)

def _family_index(a: Scalar, L: Scalar, p: int, q: int) -> Optional[int]:
    if a.sign() < 0:
        a = -a
    m = (a * scalar(2) * L / PI - scalar(q)) / scalar(p)
    if m.is_integer:
        return m.as_integer()
    return None


def _scan_nf(nf: NF, var: str, L: Scalar, p: int, q: int,
             start: int, out: Set[int]) -> None:
    for mono, _ in nf.num.items:
        for a, _pw in mono.atoms:
            if isinstance(a, ATrig) and var in nf_free_vars(a.arg):
                s = _const_slope(a.arg, var)
                if s is not None and s.is_real:
                    m = _family_index(s, L, p, q)
                    if m is not None and m >= start:
                        out.add(m)
        if mono.exparg is not None and var in nf_free_vars(mono.exparg):
            s = _const_slope(mono.exparg, var)
            if s is not None and not s.is_zero:
                t = s * (-IMAG)
                if t.is_real and not t.is_zero:
                    m = _family_index(t, L, p, q)
                    if m is not None and m >= start:
                        out.add(m)


def resonant_indices(f: Union[Expr, PiecewiseExpr], var: str, L: Scalar,
                     p: int = 2, q: int = 0, start: int = 1) -> List[int]:
    """Indices m >= start whose basis frequency (p*m+q)*pi/(2L) already
    appears in f as a trig or imaginary-exponential frequency."""
    out: Set[int] = set()
    if isinstance(f, PiecewiseExpr):
        for b in f.branches:
            _scan_nf(to_nf(b.body), var, L, p, q, start, out)
    else:
        _scan_nf(to_nf(as_expr(f)), var, L, p, q, start, out)
    return sorted(out)


# ---------------------------------------------------------------------------
# coefficients

@dataclass(frozen=True)
class FourierCoeffs:
    """Symbolic coefficient formulas plus direct values at bad indices."""
    kind: str
    L: Scalar
    var: str
    general: Dict[str, Expr]
    singular: Tuple[Tuple[int, Dict[str, Expr]], ...] = ()

    @property
    def excluded(self) -> Tuple[int, ...]:
        return tuple(sorted(j for j, _ in self.singular))

    @property
    def warning(self) -> Optional[str]:
        ex = self.excluded
        if not ex:
            return None
        inner = ", ".join(str(j) for j in ex)
        return f"excluding n in {{{inner}}}"

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "L": render(Const(self.L)),
            "general": {k: render(v) for k, v in self.general.items()},
            "singular": [
                dict({"n": j}, **{k: render(v) for k, v in vals.items()})
                for j, vals in self.singular
            ],
        }
        w = self.warning
        if w:
            out["warning"] = w
        return out


def _zero() -> Expr:
    return const(0)


def fourier_coeff(f: Union[Expr, PiecewiseExpr, str], var: str = "x",
                  L=None, kind: str = "trig") -> FourierCoeffs:
    kind = kind.lower()
    if kind not in KINDS:
        raise DomainError(f"unknown series kind {kind!r}")
    if isinstance(f, str):
        f = parse(f)
    symmetric = kind in ("trig", "complex")
    if L is None:
        if not isinstance(f, PiecewiseExpr):
            raise DomainError("half-width L is required for a plain "
                              "expression")
        Ls = f.hi
        if symmetric and scalar_eq(f.lo, -f.hi) or \
                (not symmetric and f.lo.is_zero):
            pass
        else:
            raise DomainError("piecewise domain does not match the "
                              "series kind")
    else:
        Ls = expr_to_scalar(L)
    if Ls.sign() <= 0:
        raise DomainError("half-width L must be positive")
    lo = -Ls if symmetric else ZERO
    pw = as_piecewise(f, var, lo, Ls)

    w = PI / Ls                    # fundamental frequency pi/L
    n = Var(INDEX_VAR)
    x = Var(var)
    half = ONE / scalar(2)

    sing = resonant_indices(pw, var, Ls)
    parity = pw.parity() if kind == "trig" else "none"

    def wint(weight: Optional[Expr], factor: Scalar) -> Expr:
        return _scale(pw.integrate(weight), factor)

    general: Dict[str, Expr] = {}
    if kind in ("trig", "cosine"):
        if kind == "trig" and parity == "odd":
            general["a0"] = _zero()
            general["an"] = _zero()
        else:
            fac = half / Ls if kind == "trig" else ONE / Ls
            general["a0"] = wint(None, fac)
            fac = ONE / Ls if kind == "trig" else scalar(2) / Ls
            general["an"] = wint(Cos(mul(Const(w), n, x)), fac)
    if kind in ("trig", "sine"):
        if kind == "trig" and parity == "even":
            general["bn"] = _zero()
        else:
            fac = ONE / Ls if kind == "trig" else scalar(2) / Ls
            general["bn"] = wint(Sin(mul(Const(w), n, x)), fac)
    if kind == "complex":
        general["c0"] = wint(None, half / Ls)
        general["cn"] = wint(Exp(mul(Const(-IMAG * w), n, x)),
                             half / Ls)

    singular: List[Tuple[int, Dict[str, Expr]]] = []
    for j in sing:
        vals: Dict[str, Expr] = {}
        cosj = Cos(mul(Const(w * scalar(j)), x))
        sinj = Sin(mul(Const(w * scalar(j)), x))
        if kind in ("trig", "cosine"):
            fac = ONE / Ls if kind == "trig" else scalar(2) / Ls
            vals["a"] = wint(cosj, fac)
        if kind in ("trig", "sine"):
            fac = ONE / Ls if kind == "trig" else scalar(2) / Ls
            vals["b"] = wint(sinj, fac)
        if kind == "complex":
            vals["c"] = wint(Exp(mul(Const(-IMAG * w * scalar(j)), x)),
                             half / Ls)
            vals["c_neg"] = wint(Exp(mul(Const(IMAG * w * scalar(j)), x)),
                                 half / Ls)
        singular.append((j, vals))

    return FourierCoeffs(kind, Ls, var, general, tuple(singular))


def scalar_eq(a: Scalar, b: Scalar) -> bool:
    return a == b


def _scale(e: Expr, s: Scalar) -> Expr:
    from .nf import canonicalize
    return canonicalize(mul(Const(s), e))


# ---------------------------------------------------------------------------
# series assembly

def expand_coeffs(coeffs: FourierCoeffs,
                  terms: Optional[int] = None) -> Union[Expr, SeriesSolution]:
    """Build the series from coefficient formulas.  With `terms` set the
    finite partial sum is returned as a plain expression; otherwise a
    SeriesSolution carrying the symbolic general term."""
    w = PI / coeffs.L
    n = Var(INDEX_VAR)
    x = Var(coeffs.var)
    g = coeffs.general
    kind = coeffs.kind

    cos_n = Cos(mul(Const(w), n, x))
    sin_n = Sin(mul(Const(w), n, x))

    closed = _zero()
    parts: List[Expr] = []
    if kind in ("trig", "cosine"):
        closed = g["a0"]
        parts.append(mul(g["an"], cos_n))
    if kind in ("trig", "sine"):
        parts.append(mul(g["bn"], sin_n))
    if kind == "complex":
        closed = g["c0"]
        e_pos = Exp(mul(Const(IMAG * w), n, x))
        e_neg = Exp(mul(Const(-IMAG * w), n, x))
        c_neg = substitute(g["cn"], INDEX_VAR, neg(n))
        parts = [mul(g["cn"], e_pos), mul(c_neg, e_neg)]
    summand = add(*parts) if parts else _zero()

    special: List[Tuple[int, Expr]] = []
    for j, vals in coeffs.singular:
        wj = w * scalar(j)
        pieces: List[Expr] = []
        if "a" in vals:
            pieces.append(mul(vals["a"], Cos(mul(Const(wj), x))))
        if "b" in vals:
            pieces.append(mul(vals["b"], Sin(mul(Const(wj), x))))
        if "c" in vals:
            pieces.append(mul(vals["c"], Exp(mul(Const(IMAG * wj), x))))
            pieces.append(mul(vals["c_neg"],
                              Exp(mul(Const(-IMAG * wj), x))))
        special.append((j, add(*pieces) if pieces else _zero()))

    sol = SeriesSolution(summand=summand, closed=closed,
                         special=tuple(special), index=INDEX_VAR,
                         start=1, truncation=terms)
    if terms is not None:
        return sol.instantiate(terms)
    return sol


def fourier_series(f: Union[Expr, PiecewiseExpr, str], var: str = "x",
                   L=None, kind: str = "trig",
                   terms: Optional[int] = None
                   ) -> Union[Expr, SeriesSolution]:
    return expand_coeffs(fourier_coeff(f, var, L, kind), terms)
