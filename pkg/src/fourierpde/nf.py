"""Rational normal form for the symbolic fragment.

An expression is flattened to a ratio of multivariate polynomials whose
indeterminates ("atoms") are plain variables, canonicalized sin/cos
applications, symbolic powers such as (-1)^n or r^(n*pi/alpha), opaque
function applications, and unevaluated integrals.  Exponential factors
live in a dedicated per-monomial slot so that exp(u)*exp(v) merges to
exp(u+v).

Canonicalization enforced here:
  * no product of two trig factors and no trig factor squared survives
    (product-to-sum and power-reduction run to a fixed point);
  * trig/exp arguments absorb integer multiples of pi (resp. i*pi) in
    the series index into (-1)^n style factors, fold quarter-turn
    rational phases, and are sign-normalized;
  * (-1)^p(n) exponents are reduced mod 2 using integrality of n;
  * denominators that are a single monomial are divided through, and a
    univariate gcd cancels common polynomial content.

Equality of normal forms is decided exactly by cross-multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import FragmentError
from .expr import (INDEX_VAR, Add, Const, Cos, Exp, Expr, FloatConst, Func,
                   Integral, Mul, Pow, Sin, Var, add, const, div, mul)
from .scalars import (HALF, IMAG, MINUS_ONE, ONE, PI, Scalar, ZERO, scalar)

# variables known to range over integers; drives (-1)^n folding
INT_VARS = frozenset({INDEX_VAR})


# ---------------------------------------------------------------------------
# atoms

class Atom:
    __slots__ = ()


@dataclass(frozen=True)
class AVar(Atom):
    name: str

    def key(self):
        return ("var", self.name)


@dataclass(frozen=True)
class ATrig(Atom):
    kind: str  # "sin" | "cos"
    arg: "NF"

    def key(self):
        k = getattr(self, "_k", None)
        if k is None:
            k = ("trig", self.kind, self.arg.key())
            object.__setattr__(self, "_k", k)
        return k


@dataclass(frozen=True)
class ASymPow(Atom):
    """base ** expo with symbolic exponent; base is a variable or scalar."""
    base_var: Optional[str]
    base_scalar: Optional[Scalar]
    expo: "NF"

    def key(self):
        k = getattr(self, "_k", None)
        if k is None:
            if self.base_var is not None:
                bk = ("v", self.base_var)
            else:
                bk = ("s", self.base_scalar.key())
            k = ("sympow", bk, self.expo.key())
            object.__setattr__(self, "_k", k)
        return k


@dataclass(frozen=True)
class AFunc(Atom):
    name: str
    primes: int
    args: Tuple["NF", ...]

    def key(self):
        k = getattr(self, "_k", None)
        if k is None:
            k = ("func", self.name, self.primes,
                 tuple(a.key() for a in self.args))
            object.__setattr__(self, "_k", k)
        return k


@dataclass(frozen=True)
class AIntegral(Atom):
    integrand: "NF"
    var: str
    lo: "NF"
    hi: "NF"

    def key(self):
        k = getattr(self, "_k", None)
        if k is None:
            k = ("integral", self.var, self.integrand.key(),
                 self.lo.key(), self.hi.key())
            object.__setattr__(self, "_k", k)
        return k


# ---------------------------------------------------------------------------
# monomials and polynomials

@dataclass(frozen=True)
class Monomial:
    """Product of atom powers times exp(exparg).  atoms sorted by key.
    exparg is None when there is no exponential factor."""
    atoms: Tuple[Tuple[Atom, int], ...]
    exparg: Optional["NF"]

    def key(self):
        k = getattr(self, "_k", None)
        if k is None:
            ek = () if self.exparg is None else self.exparg.key()
            k = (tuple((a.key(), p) for a, p in self.atoms), ek)
            object.__setattr__(self, "_k", k)
        return k

    def power_of(self, atom: Atom) -> int:
        for a, p in self.atoms:
            if a == atom:
                return p
        return 0

    def degree(self) -> int:
        """Total positive atom degree; used for display ordering."""
        return sum(p for _, p in self.atoms if p > 0)


def mono_sort_key(m: Monomial):
    return (-m.degree(), m.key())


@dataclass(frozen=True)
class MPoly:
    """Sum of coeff * monomial, stored sorted for determinism."""
    items: Tuple[Tuple[Monomial, Scalar], ...]

    def key(self):
        k = getattr(self, "_k", None)
        if k is None:
            k = tuple((m.key(), c.key()) for m, c in self.items)
            object.__setattr__(self, "_k", k)
        return k

    def as_dict(self) -> Dict[Monomial, Scalar]:
        return dict(self.items)

    @property
    def is_zero(self) -> bool:
        return not self.items


@dataclass(frozen=True)
class NF:
    """num / den, both MPoly; den never zero."""
    num: MPoly
    den: MPoly

    def key(self):
        k = getattr(self, "_k", None)
        if k is None:
            k = (self.num.key(), self.den.key())
            object.__setattr__(self, "_k", k)
        return k

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero


def _freeze(d: Dict[Monomial, Scalar]) -> MPoly:
    items = [(m, c) for m, c in d.items() if not c.is_zero]
    items.sort(key=lambda kv: mono_sort_key(kv[0]))
    return MPoly(tuple(items))


def _one_dict() -> Dict[Monomial, Scalar]:
    return {_CONST_MONO: ONE}


# ---------------------------------------------------------------------------
# symbolic power normalization

def _mod2_reduce(expo: "NF") -> "NF":
    """Reduce an exponent of (-1) mod 2 using integrality of index vars."""
    if not _mp_is_one(expo.den):
        return expo
    parity_n = Fraction(0)
    parity_c = Fraction(0)
    kept: Dict[Monomial, Scalar] = {}
    for m, c in expo.num.items:
        if not m.atoms and m.exparg is None and c.is_integer:
            parity_c += c.as_fraction()
            continue
        k = _pure_int_var_power(m)
        if k is not None and c.is_integer:
            # n^k = n (mod 2) for k >= 1
            parity_n += c.as_fraction()
            continue
        kept[m] = kept.get(m, ZERO) + c
    if parity_n % 2:
        nm = Monomial(((AVar(INDEX_VAR), 1),), None)
        kept[nm] = kept.get(nm, ZERO) + ONE
    if parity_c % 2:
        kept[_CONST_MONO] = kept.get(_CONST_MONO, ZERO) + ONE
    return nf_make(kept, _one_dict())


def _normalize_sympow(base_var: Optional[str], base_scalar: Optional[Scalar],
                      expo: "NF") -> Tuple[Scalar, Tuple[Tuple[Atom, int], ...]]:
    if expo.is_zero:
        return ONE, ()
    if base_scalar is not None:
        if base_scalar.is_one:
            return ONE, ()
        if base_scalar.is_zero:
            return ZERO, ()
        if base_scalar == MINUS_ONE:
            expo = _mod2_reduce(expo)
            if expo.is_zero:
                return ONE, ()
        c = nf_is_const(expo)
        if c is not None and c.is_integer:
            return base_scalar ** c.as_integer(), ()
        # pull an integer constant term out of the exponent:
        # b^(n+c) = b^c * b^n
        sc = ONE
        if _mp_is_one(expo.den):
            work = expo.num.as_dict()
            c0 = work.get(_CONST_MONO, ZERO)
            if not c0.is_zero and c0.is_integer:
                sc = base_scalar ** c0.as_integer()
                del work[_CONST_MONO]
                expo = nf_make(work, _one_dict())
        return sc, ((ASymPow(None, base_scalar, expo), 1),)
    c = nf_is_const(expo)
    if c is not None and c.is_integer:
        k = c.as_integer()
        if k == 0:
            return ONE, ()
        return ONE, ((AVar(base_var), k),)
    return ONE, ((ASymPow(base_var, None, expo), 1),)


# ---------------------------------------------------------------------------
# trig and exp constructors with folding

def _i_power(k: int) -> Scalar:
    return (ONE, IMAG, MINUS_ONE, MINUS_ONE * IMAG)[k % 4]


def _pure_int_var_power(m: Monomial) -> Optional[int]:
    """If m is n^k (k>=1) for an integer variable, return k."""
    if m.exparg is None and len(m.atoms) == 1:
        a, p = m.atoms[0]
        if isinstance(a, AVar) and a.name in INT_VARS and p >= 1:
            return p
    return None


def _split_imag(c: Scalar) -> Tuple[Scalar, Scalar]:
    """c = re + i*im with re, im real scalars."""
    conj = c.conjugate()
    re = (c + conj) * HALF
    im = (c - conj) * HALF / IMAG
    return re, im


def _rotate(kind: str, k: int) -> Tuple[str, Scalar]:
    """trig(A + k*pi/2) rewritten as +/-trig'(A)."""
    k %= 4
    if kind == "sin":
        return (("sin", ONE), ("cos", ONE), ("sin", MINUS_ONE),
                ("cos", MINUS_ONE))[k]
    return (("cos", ONE), ("sin", MINUS_ONE), ("cos", MINUS_ONE),
            ("sin", ONE))[k]


def _coeff_sign(c: Scalar) -> int:
    re, im = _split_imag(c)
    if not re.is_zero:
        return re.sign()
    if not im.is_zero:
        return im.sign()
    return 0


def _make_trig(kind: str, arg: "NF") -> Tuple[Scalar, Tuple[Tuple[Atom, int], ...]]:
    """Canonical sin/cos factor.  Returns (scalar, atom-power pairs)."""
    sign = ONE
    extra: List[Tuple[Atom, int]] = []
    if _mp_is_one(arg.den):
        work = arg.num.as_dict()
        # integer multiples of pi in integer variables fold to (-1)^p(n)
        expo_terms: Dict[Monomial, Scalar] = {}
        for m in list(work):
            if _pure_int_var_power(m) is None:
                continue
            q = work[m] / PI
            if q.is_integer:
                expo_terms[m] = q
                del work[m]
        if expo_terms:
            s2, pairs2 = _normalize_sympow(None, MINUS_ONE,
                                           nf_make(expo_terms, _one_dict()))
            sign = sign * s2
            extra.extend(pairs2)
        # rational quarter-turn constant phases rotate the trig kind
        c0 = work.get(_CONST_MONO, ZERO)
        if not c0.is_zero and c0.is_real:
            t = (c0 + c0) / PI
            if t.is_rational:
                k = math.floor(t.as_fraction())
                if k:
                    kind, s2 = _rotate(kind, k)
                    sign = sign * s2
                    c0 = c0 - scalar(Fraction(k)) * PI * HALF
                    if c0.is_zero:
                        work.pop(_CONST_MONO, None)
                    else:
                        work[_CONST_MONO] = c0
        arg = nf_make(work, _one_dict())
    if arg.is_zero:
        if kind == "sin":
            return ZERO, ()
        return sign, tuple(extra)
    # sign-normalize on the leading non-constant monomial (or the constant)
    lead = None
    for m, c in arg.num.items:
        if m.atoms or m.exparg is not None:
            lead = c
            break
    if lead is None:
        lead = arg.num.items[0][1]
    if _coeff_sign(lead) < 0:
        arg = nf_neg(arg)
        if kind == "sin":
            sign = -sign
    return sign, tuple(extra) + ((ATrig(kind, arg), 1),)


def _fold_exp_arg(arg: "NF") -> Tuple[Scalar, Tuple[Tuple[Atom, int], ...], "NF"]:
    """Fold an exp argument: extract (-1)^p(n) and quarter-turn i^k."""
    if arg.is_zero:
        return ONE, (), arg
    sc = ONE
    extra: List[Tuple[Atom, int]] = []
    if _mp_is_one(arg.den):
        work = arg.num.as_dict()
        ipi = IMAG * PI
        expo_terms: Dict[Monomial, Scalar] = {}
        for m in list(work):
            if _pure_int_var_power(m) is None:
                continue
            q = work[m] / ipi
            if q.is_integer:
                expo_terms[m] = q
                del work[m]
        if expo_terms:
            s2, pairs2 = _normalize_sympow(None, MINUS_ONE,
                                           nf_make(expo_terms, _one_dict()))
            sc = sc * s2
            extra.extend(pairs2)
        c0 = work.get(_CONST_MONO, ZERO)
        if not c0.is_zero:
            re, im = _split_imag(c0)
            if not im.is_zero:
                t = (im + im) / PI
                if t.is_rational:
                    k = math.floor(t.as_fraction())
                    if k:
                        sc = sc * _i_power(k)
                        im = im - scalar(Fraction(k)) * PI * HALF
            c0 = re + im * IMAG
            if c0.is_zero:
                work.pop(_CONST_MONO, None)
            else:
                work[_CONST_MONO] = c0
        arg = nf_make(work, _one_dict())
    return sc, tuple(extra), arg


# ---------------------------------------------------------------------------
# monomial assembly

def mono_make(pairs: Iterable[Tuple[Atom, int]],
              exparg: Optional["NF"]) -> Tuple[Monomial, Scalar]:
    if exparg is None:
        exparg = NF_ZERO
    sc, extra, exparg = _fold_exp_arg(exparg)
    plain: Dict[Atom, int] = {}
    spows: Dict[tuple, list] = {}  # base key -> [base_var, base_scalar, expo]

    def feed(a: Atom, p: int):
        if p == 0:
            return
        if isinstance(a, ASymPow):
            if a.base_var is not None:
                bk = ("v", a.base_var)
            else:
                bk = ("s", a.base_scalar.key())
            contrib = a.expo if p == 1 else nf_mul(a.expo, nf_from_int(p))
            slot = spows.get(bk)
            if slot is None:
                spows[bk] = [a.base_var, a.base_scalar, contrib]
            else:
                slot[2] = nf_add(slot[2], contrib)
        else:
            plain[a] = plain.get(a, 0) + p

    for a, p in pairs:
        feed(a, p)
    for a, p in extra:
        feed(a, p)

    pos_groups: Dict[tuple, list] = {}  # expo key -> [expo, base product]
    todo: list = []
    for _, (bvar, bscal, expo) in sorted(spows.items()):
        if bvar is not None:
            av = AVar(bvar)
            if av in plain:
                expo = nf_add(expo, nf_from_int(plain.pop(av)))
            todo.append((bvar, bscal, expo))
            continue
        # positive real bases sharing an exponent combine: a^e b^e = (ab)^e
        mergeable = False
        if bscal.is_real:
            try:
                mergeable = bscal.sign() > 0
            except ArithmeticError:
                mergeable = False
        if mergeable:
            k = expo.key()
            slot = pos_groups.get(k)
            if slot is None:
                pos_groups[k] = [expo, bscal]
            else:
                slot[1] = slot[1] * bscal
        else:
            todo.append((None, bscal, expo))
    for k in sorted(pos_groups):
        expo, merged = pos_groups[k]
        todo.append((None, merged, expo))

    for bvar, bscal, expo in todo:
        s2, np = _normalize_sympow(bvar, bscal, expo)
        sc = sc * s2
        if sc.is_zero:
            return _CONST_MONO, ZERO
        for a, p in np:
            plain[a] = plain.get(a, 0) + p

    atoms = tuple(sorted(((a, p) for a, p in plain.items() if p != 0),
                         key=lambda ap: ap[0].key()))
    return Monomial(atoms, None if exparg.is_zero else exparg), sc


def mono_mul(m1: Monomial, m2: Monomial) -> Tuple[Monomial, Scalar]:
    if m1.exparg is None:
        e = m2.exparg
    elif m2.exparg is None:
        e = m1.exparg
    else:
        e = nf_add(m1.exparg, m2.exparg)
    return mono_make(m1.atoms + m2.atoms, e)


def mono_inv(m: Monomial) -> Tuple[Monomial, Scalar]:
    pairs = tuple((a, -p) for a, p in m.atoms)
    return mono_make(pairs, None if m.exparg is None else nf_neg(m.exparg))


# ---------------------------------------------------------------------------
# trig product reduction

def _trig_degree(m: Monomial) -> int:
    return sum(p for a, p in m.atoms if isinstance(a, ATrig) and p > 0)


def _rewrite_trig_once(m: Monomial) -> List[Tuple[Monomial, Scalar]]:
    """Rewrite one trig square or product pair; callers loop to fixpoint."""
    trigs = [(a, p) for a, p in m.atoms if isinstance(a, ATrig) and p > 0]
    # base: m with the chosen trig occurrences removed
    sq = next(((a, p) for a, p in trigs if p >= 2), None)
    pieces: List[Tuple[Scalar, Tuple[Tuple[Atom, int], ...]]] = []
    removed: List[Tuple[Atom, int]] = []
    if sq is not None:
        a, _ = sq
        removed = [(a, -2)]
        u2 = nf_add(a.arg, a.arg)
        s_c, p_c = _make_trig("cos", u2)
        if a.kind == "sin":
            # sin^2 u = 1/2 - cos(2u)/2
            pieces = [(HALF, ()), (MINUS_ONE * HALF * s_c, p_c)]
        else:
            pieces = [(HALF, ()), (HALF * s_c, p_c)]
    else:
        (a1, _), (a2, _) = trigs[0], trigs[1]
        removed = [(a1, -1), (a2, -1)]
        u, v = a1.arg, a2.arg
        su = nf_add(u, v)
        dv = nf_sub(u, v)
        ks = (a1.kind, a2.kind)
        if ks == ("cos", "cos"):
            forms = [("cos", dv, HALF), ("cos", su, HALF)]
        elif ks == ("cos", "sin"):
            forms = [("sin", su, HALF), ("sin", dv, MINUS_ONE * HALF)]
        elif ks == ("sin", "sin"):
            forms = [("cos", dv, HALF), ("cos", su, MINUS_ONE * HALF)]
        else:  # ("sin", "cos")
            forms = [("sin", su, HALF), ("sin", dv, HALF)]
        for kind, argnf, cf in forms:
            s_t, p_t = _make_trig(kind, argnf)
            pieces.append((cf * s_t, p_t))
    out = []
    for piece_sc, piece_pairs in pieces:
        if piece_sc.is_zero:
            continue
        m2, s2 = mono_make(m.atoms + tuple(removed) + piece_pairs, m.exparg)
        c2 = piece_sc * s2
        if not c2.is_zero:
            out.append((m2, c2))
    return out


def mp_normalize(d: Dict[Monomial, Scalar]) -> Dict[Monomial, Scalar]:
    out: Dict[Monomial, Scalar] = {}
    work = list(d.items())
    while work:
        m, c = work.pop()
        if c.is_zero:
            continue
        if _trig_degree(m) <= 1:
            acc = out.get(m, ZERO) + c
            if acc.is_zero:
                out.pop(m, None)
            else:
                out[m] = acc
            continue
        for m2, s2 in _rewrite_trig_once(m):
            work.append((m2, c * s2))
    return out


# ---------------------------------------------------------------------------
# polynomial dict arithmetic

def mp_add_dict(a: Dict[Monomial, Scalar],
                b: Dict[Monomial, Scalar]) -> Dict[Monomial, Scalar]:
    out = dict(a)
    for m, c in b.items():
        acc = out.get(m, ZERO) + c
        if acc.is_zero:
            out.pop(m, None)
        else:
            out[m] = acc
    return out


def mp_scale_dict(a: Dict[Monomial, Scalar], s: Scalar) -> Dict[Monomial, Scalar]:
    if s.is_zero:
        return {}
    return {m: c * s for m, c in a.items()}


def mp_mul_dict(a: Dict[Monomial, Scalar],
                b: Dict[Monomial, Scalar]) -> Dict[Monomial, Scalar]:
    out: Dict[Monomial, Scalar] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m, s = mono_mul(m1, m2)
            c = c1 * c2 * s
            if c.is_zero:
                continue
            acc = out.get(m, ZERO) + c
            if acc.is_zero:
                out.pop(m, None)
            else:
                out[m] = acc
    return mp_normalize(out)


def _mp_is_one(mp: MPoly) -> bool:
    return (len(mp.items) == 1 and mp.items[0][0] == _CONST_MONO
            and mp.items[0][1].is_one)


# ---------------------------------------------------------------------------
# univariate helpers (gcd cancellation)

def _factor_unipoly(d: Dict[Monomial, Scalar]):
    """Factor d as common_monomial * poly(X) where X is the single atom
    whose power varies between monomials.  All monomials must carry the
    same exponential argument.  Returns (common_powers, exparg, X, poly)
    or None when the shape does not fit."""
    monos = list(d.items())
    exparg = monos[0][0].exparg
    for m, _ in monos[1:]:
        ea = m.exparg
        if (ea is None) != (exparg is None):
            return None
        if ea is not None and ea.key() != exparg.key():
            return None
    atoms = set()
    for m, _ in monos:
        for a, _p in m.atoms:
            atoms.add(a)
    common: Dict[Atom, int] = {}
    varying = None
    for a in sorted(atoms, key=lambda a: a.key()):
        powers = [m.power_of(a) for m, _ in monos]
        if all(p == powers[0] for p in powers):
            common[a] = powers[0]
            continue
        if varying is not None:
            return None
        varying = a
        base = min(powers)
        if base:
            common[a] = base
    poly: Dict[int, Scalar] = {}
    xc = common.get(varying, 0) if varying is not None else 0
    for m, c in monos:
        k = 0 if varying is None else m.power_of(varying) - xc
        poly[k] = poly.get(k, ZERO) + c
    return common, exparg, varying, poly


def _expand_factored(common: Dict[Atom, int], exparg: Optional["NF"],
                     x: Optional[Atom],
                     poly: Dict[int, Scalar]) -> Dict[Monomial, Scalar]:
    base = tuple((a, p) for a, p in common.items() if p != 0 and a != x)
    xc = common.get(x, 0) if x is not None else 0
    out: Dict[Monomial, Scalar] = {}
    for k, c in poly.items():
        if c.is_zero:
            continue
        pairs = base
        if x is not None and k + xc != 0:
            pairs = pairs + ((x, k + xc),)
        m, s = mono_make(pairs, exparg)
        acc = out.get(m, ZERO) + c * s
        if acc.is_zero:
            out.pop(m, None)
        else:
            out[m] = acc
    return out


def _p_divmod(a: Dict[int, Scalar], b: Dict[int, Scalar]):
    rem = dict(a)
    db = max(b)
    lb = b[db]
    q: Dict[int, Scalar] = {}
    while rem:
        da = max(rem)
        if da < db:
            break
        f = rem[da] / lb
        q[da - db] = f
        for k, c in b.items():
            kk = da - db + k
            acc = rem.get(kk, ZERO) - f * c
            if acc.is_zero:
                rem.pop(kk, None)
            else:
                rem[kk] = acc
    return q, rem


def _p_gcd(a: Dict[int, Scalar], b: Dict[int, Scalar]) -> Dict[int, Scalar]:
    a, b = dict(a), dict(b)
    while b:
        _, r = _p_divmod(a, b)
        a, b = b, r
    lead = a[max(a)]
    return {k: c / lead for k, c in a.items()}


# ---------------------------------------------------------------------------
# NF construction and arithmetic

def nf_make(num: Dict[Monomial, Scalar], den: Dict[Monomial, Scalar]) -> NF:
    num = mp_normalize(num)
    den = mp_normalize(den)
    if not den:
        raise ZeroDivisionError("zero denominator in normal form")
    while True:
        if not num:
            return NF_ZERO
        if len(den) == 1:
            (dm, dc), = den.items()
            if dm == _CONST_MONO and dc.is_one:
                break
            inv_m, inv_s = mono_inv(dm)
            inv_c = inv_s / dc
            out: Dict[Monomial, Scalar] = {}
            for m, c in num.items():
                m2, s2 = mono_mul(m, inv_m)
                c2 = c * inv_c * s2
                acc = out.get(m2, ZERO) + c2
                if acc.is_zero:
                    out.pop(m2, None)
                else:
                    out[m2] = acc
            num = mp_normalize(out)
            den = _one_dict()
            continue
        fn = _factor_unipoly(num)
        fd = _factor_unipoly(den)
        if fn is not None and fd is not None:
            cn, en, xn, pn = fn
            cd, ed, xd, pd = fd
            cn, cd = dict(cn), dict(cd)
            changed = False
            if ed is not None:
                # exponentials are units: move them into the numerator
                en = nf_neg(ed) if en is None else nf_sub(en, ed)
                if en.is_zero:
                    en = None
                ed = None
                changed = True
            for a in set(cn) | set(cd):
                lo = min(cn.get(a, 0), cd.get(a, 0))
                if lo:
                    cn[a] = cn.get(a, 0) - lo
                    cd[a] = cd.get(a, 0) - lo
                    changed = True
            if xn is not None and xn == xd:
                g = _p_gcd(pn, pd)
                if max(g) >= 1:
                    pn, _ = _p_divmod(pn, g)
                    pd, _ = _p_divmod(pd, g)
                    changed = True
            if changed:
                num = mp_normalize(_expand_factored(cn, en, xn, pn))
                den = mp_normalize(_expand_factored(cd, ed, xd, pd))
                continue
        if num == den:
            return NF_ONE
        # normalize: leading denominator coefficient becomes 1
        lead_m = min(den, key=mono_sort_key)
        lc = den[lead_m]
        if not lc.is_one:
            inv = lc.inverse()
            num = {m: c * inv for m, c in num.items()}
            den = {m: c * inv for m, c in den.items()}
        break
    return NF(_freeze(num), _freeze(den))


def nf_add(a: NF, b: NF) -> NF:
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a.den == b.den:
        return nf_make(mp_add_dict(a.num.as_dict(), b.num.as_dict()),
                       a.den.as_dict())
    num = mp_add_dict(mp_mul_dict(a.num.as_dict(), b.den.as_dict()),
                      mp_mul_dict(b.num.as_dict(), a.den.as_dict()))
    den = mp_mul_dict(a.den.as_dict(), b.den.as_dict())
    return nf_make(num, den)


def nf_neg(a: NF) -> NF:
    if a.is_zero:
        return a
    return NF(_freeze({m: -c for m, c in a.num.items}), a.den)


def nf_sub(a: NF, b: NF) -> NF:
    return nf_add(a, nf_neg(b))


def nf_mul(a: NF, b: NF) -> NF:
    if a.is_zero or b.is_zero:
        return NF_ZERO
    return nf_make(mp_mul_dict(a.num.as_dict(), b.num.as_dict()),
                   mp_mul_dict(a.den.as_dict(), b.den.as_dict()))


def nf_inv(a: NF) -> NF:
    if a.is_zero:
        raise ZeroDivisionError("inverse of zero normal form")
    return nf_make(a.den.as_dict(), a.num.as_dict())


def nf_div(a: NF, b: NF) -> NF:
    return nf_mul(a, nf_inv(b))


def nf_pow_int(a: NF, k: int) -> NF:
    if k < 0:
        return nf_pow_int(nf_inv(a), -k)
    out = NF_ONE
    base = a
    while k:
        if k & 1:
            out = nf_mul(out, base)
        base = nf_mul(base, base)
        k >>= 1
    return out


def nf_equal(a: NF, b: NF) -> bool:
    if a.num == b.num and a.den == b.den:
        return True
    lhs = mp_mul_dict(a.num.as_dict(), b.den.as_dict())
    rhs = mp_mul_dict(b.num.as_dict(), a.den.as_dict())
    return lhs == rhs


def nf_is_const(a: NF) -> Optional[Scalar]:
    """Scalar value if `a` is a constant, else None."""
    if a.is_zero:
        return ZERO
    if not _mp_is_one(a.den):
        return None
    if len(a.num.items) != 1:
        return None
    m, c = a.num.items[0]
    if m == _CONST_MONO:
        return c
    return None


def nf_from_scalar(s: Scalar) -> NF:
    if s.is_zero:
        return NF_ZERO
    return NF(MPoly(((_CONST_MONO, s),)), _ONE_MP)


def nf_from_int(k: int) -> NF:
    return nf_from_scalar(scalar(k))


def nf_from_var(name: str) -> NF:
    m = Monomial(((AVar(name), 1),), None)
    return NF(MPoly(((m, ONE),)), _ONE_MP)


def nf_from_mono(m: Monomial, c: Scalar) -> NF:
    if c.is_zero:
        return NF_ZERO
    return nf_make({m: c}, _one_dict())


def nf_trig(kind: str, arg: NF) -> NF:
    """Canonical sin/cos of an argument already in normal form."""
    s, pairs = _make_trig(kind, arg)
    m, s2 = mono_make(pairs, None)
    return nf_from_mono(m, s * s2)


def nf_exp(arg: NF) -> NF:
    """Canonical exponential of an argument already in normal form."""
    m, s = mono_make((), arg)
    return nf_from_mono(m, s)


_CONST_MONO = Monomial((), None)
_ONE_MP = MPoly(((_CONST_MONO, ONE),))
NF_ZERO = NF(MPoly(()), _ONE_MP)
NF_ONE = NF(_ONE_MP, _ONE_MP)
NF_PI = nf_from_scalar(PI)


# ---------------------------------------------------------------------------
# free variables

def _atom_free_vars(a: Atom) -> frozenset:
    if isinstance(a, AVar):
        return frozenset((a.name,))
    if isinstance(a, ATrig):
        return nf_free_vars(a.arg)
    if isinstance(a, ASymPow):
        base = frozenset((a.base_var,)) if a.base_var is not None else frozenset()
        return base | nf_free_vars(a.expo)
    if isinstance(a, AFunc):
        out = frozenset()
        for x in a.args:
            out |= nf_free_vars(x)
        return out
    if isinstance(a, AIntegral):
        inner = nf_free_vars(a.integrand) - {a.var}
        return inner | nf_free_vars(a.lo) | nf_free_vars(a.hi)
    raise TypeError(f"unknown atom {type(a).__name__}")


def mono_free_vars(m: Monomial) -> frozenset:
    out = frozenset() if m.exparg is None else nf_free_vars(m.exparg)
    for a, _ in m.atoms:
        out |= _atom_free_vars(a)
    return out


def nf_free_vars(a: NF) -> frozenset:
    fv = getattr(a, "_fv", None)
    if fv is None:
        fv = frozenset()
        for mp in (a.num, a.den):
            for m, _ in mp.items:
                fv |= mono_free_vars(m)
        object.__setattr__(a, "_fv", fv)
    return fv


def nf_has_opaque(a: NF) -> bool:
    for mp in (a.num, a.den):
        for m, _ in mp.items:
            if _mono_has_opaque(m):
                return True
    return False


def _mono_has_opaque(m: Monomial) -> bool:
    if m.exparg is not None and nf_has_opaque(m.exparg):
        return True
    for a, _ in m.atoms:
        if isinstance(a, (AFunc, AIntegral)):
            return True
        if isinstance(a, ATrig) and nf_has_opaque(a.arg):
            return True
        if isinstance(a, ASymPow) and nf_has_opaque(a.expo):
            return True
    return False


# ---------------------------------------------------------------------------
# unevaluated integrals
#
# A deferred integral is canonicalized so that equal integrals collide as
# atoms: factors free of the integration variable move outside, the
# var-free summand of an exp argument moves outside, a sin/cos whose
# argument mixes the integration variable with other symbols is split by
# angle addition (its var-free half leaves the integral), and each atom
# holds a single monomial with unit coefficient.

_ANGLE_SPLIT = {
    "sin": (("sin", "cos", ONE), ("cos", "sin", ONE)),
    "cos": (("cos", "cos", ONE), ("sin", "sin", MINUS_ONE)),
}


def _split_by_var(a: NF, var: str) -> Optional[Tuple[NF, NF]]:
    """a = dep + rest with every var-carrying monomial in dep; None when
    the denominator itself carries var."""
    if var in nf_free_vars_mp(a.den):
        return None
    dep: Dict[Monomial, Scalar] = {}
    rest: Dict[Monomial, Scalar] = {}
    for m, c in a.num.items:
        (dep if var in mono_free_vars(m) else rest)[m] = c
    d = a.den.as_dict()
    return nf_make(dep, dict(d)), nf_make(rest, dict(d))


def _atom_term(im: Monomial, sc: Scalar, var: str, lo: NF, hi: NF) -> NF:
    if sc.is_zero:
        return NF_ZERO
    if not im.atoms and im.exparg is None:
        return nf_mul(nf_from_scalar(sc), nf_sub(hi, lo))
    atom = AIntegral(nf_from_mono(im, ONE), var, lo, hi)
    am, s2 = mono_make(((atom, 1),), None)
    return nf_from_mono(am, sc * s2)


def _defer_mono(m: Monomial, c: Scalar, var: str, lo: NF, hi: NF) -> NF:
    out_pairs = []
    dep_pairs = []
    trig: Optional[ATrig] = None
    for a, p in m.atoms:
        if var not in _atom_free_vars(a):
            out_pairs.append((a, p))
            continue
        dep_pairs.append((a, p))
        if isinstance(a, ATrig) and p == 1 and trig is None:
            trig = a
    in_exp: Optional[NF] = None
    out_exp: Optional[NF] = None
    if m.exparg is not None:
        if var in nf_free_vars(m.exparg):
            parts = _split_by_var(m.exparg, var)
            if parts is None:
                in_exp = m.exparg
            else:
                in_exp = parts[0]
                out_exp = None if parts[1].is_zero else parts[1]
        else:
            out_exp = m.exparg

    split = None
    if trig is not None:
        parts = _split_by_var(trig.arg, var)
        if parts is not None and not parts[0].is_zero \
                and not parts[1].is_zero:
            split = parts

    out_m, out_s = mono_make(tuple(out_pairs), out_exp)
    outside = nf_from_mono(out_m, c * out_s)
    if split is None:
        im, s = mono_make(tuple(dep_pairs), in_exp)
        return nf_mul(outside, _atom_term(im, s, var, lo, hi))

    base = tuple(ap for ap in dep_pairs if ap[0] is not trig)
    total = NF_ZERO
    for in_kind, out_kind, sgn in _ANGLE_SPLIT[trig.kind]:
        s_i, p_i = _make_trig(in_kind, split[0])
        if s_i.is_zero:
            continue
        s_o, p_o = _make_trig(out_kind, split[1])
        if s_o.is_zero:
            continue
        t_m, t_s = mono_make(p_o, None)
        im, s = mono_make(base + p_i, in_exp)
        term = nf_mul(nf_from_mono(t_m, sgn * s_o * t_s),
                      _atom_term(im, s_i * s, var, lo, hi))
        total = nf_add(total, term)
    return nf_mul(outside, total)


def nf_defer_integral(integrand: NF, var: str, lo: NF, hi: NF) -> NF:
    if var in nf_free_vars_mp(integrand.den):
        a = AIntegral(integrand, var, lo, hi)
        return nf_from_mono(Monomial(((a, 1),), None), ONE)
    total = NF_ZERO
    for m, c in integrand.num.items:
        total = nf_add(total, _defer_mono(m, c, var, lo, hi))
    if not _mp_is_one(integrand.den):
        total = nf_div(total, NF(integrand.den, _ONE_MP))
    return total


# ---------------------------------------------------------------------------
# Expr -> NF

def to_nf(e: Expr) -> NF:
    if isinstance(e, Const):
        return nf_from_scalar(e.value)
    if isinstance(e, FloatConst):
        raise FragmentError("floating-point constant in exact symbolic path")
    if isinstance(e, Var):
        return nf_from_var(e.name)
    if isinstance(e, Add):
        out = NF_ZERO
        for t in e.terms:
            out = nf_add(out, to_nf(t))
        return out
    if isinstance(e, Mul):
        out = NF_ONE
        for f in e.factors:
            out = nf_mul(out, to_nf(f))
        return out
    if isinstance(e, Pow):
        return _pow_to_nf(e)
    if isinstance(e, Sin):
        s, pairs = _make_trig("sin", to_nf(e.arg))
        m, s2 = mono_make(pairs, NF_ZERO)
        return nf_from_mono(m, s * s2)
    if isinstance(e, Cos):
        s, pairs = _make_trig("cos", to_nf(e.arg))
        m, s2 = mono_make(pairs, NF_ZERO)
        return nf_from_mono(m, s * s2)
    if isinstance(e, Exp):
        m, s = mono_make((), to_nf(e.arg))
        return nf_from_mono(m, s)
    if isinstance(e, Func):
        args = tuple(to_nf(a) for a in e.args)
        if e.name == "log" and e.primes == 0 and len(args) == 1:
            c = nf_is_const(args[0])
            if c is not None and c.is_one:
                return NF_ZERO
        m = Monomial(((AFunc(e.name, e.primes, args), 1),), None)
        return nf_from_mono(m, ONE)
    if isinstance(e, Integral):
        return nf_defer_integral(to_nf(e.integrand), e.var,
                                 to_nf(e.lo), to_nf(e.hi))
    raise TypeError(f"unknown node {type(e).__name__}")


def _pow_to_nf(e: Pow) -> NF:
    enf = to_nf(e.exponent)
    c = nf_is_const(enf)
    if c is not None and c.is_integer:
        return nf_pow_int(to_nf(e.base), c.as_integer())
    # symbolic (or non-integer) exponent: restricted base forms
    if isinstance(e.base, Exp):
        return to_nf(Exp(mul(e.base.arg, e.exponent)))
    bnf = to_nf(e.base)
    bc = nf_is_const(bnf)
    if bc is not None:
        s, pairs = _normalize_sympow(None, bc, enf)
        m, s2 = mono_make(pairs, NF_ZERO)
        return nf_from_mono(m, s * s2)
    if _mp_is_one(bnf.den) and len(bnf.num.items) == 1:
        # (c * prod a_i^p_i * e^u)^expo distributes over the factors
        m0, c0 = bnf.num.items[0]
        sc = ONE
        pairs: List[Tuple[Atom, int]] = []
        ok = True
        for a, p in m0.atoms:
            pe = enf if p == 1 else nf_mul(nf_from_int(p), enf)
            if isinstance(a, AVar):
                s, np = _normalize_sympow(a.name, None, pe)
            elif isinstance(a, ASymPow):
                s, np = _normalize_sympow(a.base_var, a.base_scalar,
                                          nf_mul(a.expo, pe))
            else:
                ok = False
                break
            sc = sc * s
            pairs.extend(np)
        if ok:
            if not c0.is_one:
                s, np = _normalize_sympow(None, c0, enf)
                sc = sc * s
                pairs.extend(np)
            earg = NF_ZERO if m0.exparg is None else nf_mul(m0.exparg, enf)
            m, s2 = mono_make(tuple(pairs), earg)
            return nf_from_mono(m, sc * s2)
    raise FragmentError(
        "unsupported symbolic power: base must be a variable, a constant, "
        "an exponential, or a product of these")


# ---------------------------------------------------------------------------
# NF -> Expr

def _atom_to_expr(a: Atom) -> Expr:
    if isinstance(a, AVar):
        return Var(a.name)
    if isinstance(a, ATrig):
        arg = from_nf(a.arg)
        return Sin(arg) if a.kind == "sin" else Cos(arg)
    if isinstance(a, ASymPow):
        base = Var(a.base_var) if a.base_var is not None else Const(a.base_scalar)
        return Pow(base, from_nf(a.expo))
    if isinstance(a, AFunc):
        return Func(a.name, tuple(from_nf(x) for x in a.args), a.primes)
    if isinstance(a, AIntegral):
        return Integral(from_nf(a.integrand), a.var, from_nf(a.lo),
                        from_nf(a.hi))
    raise TypeError(f"unknown atom {type(a).__name__}")


_ATOM_ORDER = {"var": 0, "sympow": 1, "trig": 3, "func": 4, "integral": 5}


def _mono_to_expr(m: Monomial, c: Scalar) -> Expr:
    pos: List[Tuple[int, tuple, Expr]] = []
    neg: List[Tuple[int, tuple, Expr]] = []
    for a, p in m.atoms:
        rank = _ATOM_ORDER[a.key()[0]]
        base = _atom_to_expr(a)
        tgt, k = (pos, p) if p > 0 else (neg, -p)
        tgt.append((rank, a.key(), base if k == 1 else Pow(base, const(k))))
    if m.exparg is not None:
        pos.append((2, ("exp",), Exp(from_nf(m.exparg))))
    pos.sort(key=lambda t: (t[0], t[1]))
    neg.sort(key=lambda t: (t[0], t[1]))
    factors = [f for _, _, f in pos]
    if not c.is_one or not factors:
        factors.insert(0, Const(c))
    numerator = mul(*factors)
    if neg:
        return div(numerator, mul(*[f for _, _, f in neg]))
    return numerator


def _mp_to_expr(mp: MPoly) -> Expr:
    terms = [_mono_to_expr(m, c) for m, c in mp.items]
    return add(*terms)


def from_nf(a: NF) -> Expr:
    if a.is_zero:
        return Const(ZERO)
    num = _mp_to_expr(a.num)
    if _mp_is_one(a.den):
        return num
    return div(num, _mp_to_expr(a.den))


# ---------------------------------------------------------------------------
# public helpers

def canonicalize(e: Expr) -> Expr:
    """Rewrite to the canonical form (fixed point of the rewriting system)."""
    return from_nf(to_nf(e))


def expr_equal(a: Expr, b: Expr) -> bool:
    """Exact semantic equality within the fragment."""
    return nf_equal(to_nf(a), to_nf(b))


def nf_subst_var(a: NF, name: str, value: Expr) -> NF:
    """Substitute and re-canonicalize (folds trig/exp args afresh)."""
    from .expr import subst_var
    return to_nf(subst_var(from_nf(a), name, value))


def nf_poly_in_var(a: NF, var: str) -> Dict[int, NF]:
    """Split `a` as a polynomial in the plain variable `var`.

    Requires the denominator free of `var` and every occurrence of `var`
    to be a plain power (not inside trig/exp/opaque arguments).  Returns
    {degree: coefficient NF}.
    """
    if var in nf_free_vars_mp(a.den):
        raise FragmentError(f"denominator depends on '{var}'")
    av = AVar(var)
    out: Dict[int, Dict[Monomial, Scalar]] = {}
    for m, c in a.num.items:
        k = 0
        rest: List[Tuple[Atom, int]] = []
        for atom, p in m.atoms:
            if atom == av:
                k = p
            else:
                if var in _atom_free_vars(atom):
                    raise FragmentError(
                        f"'{var}' occurs inside a non-polynomial factor")
                rest.append((atom, p))
        if m.exparg is not None and var in nf_free_vars(m.exparg):
            raise FragmentError(f"'{var}' occurs inside an exponential")
        if k < 0:
            raise FragmentError(f"negative power of '{var}'")
        m2 = Monomial(tuple(rest), m.exparg)
        slot = out.setdefault(k, {})
        slot[m2] = slot.get(m2, ZERO) + c
    den = a.den.as_dict()
    return {k: nf_make(d, dict(den)) for k, d in out.items()}


def nf_free_vars_mp(mp: MPoly) -> frozenset:
    out = frozenset()
    for m, _ in mp.items:
        out |= mono_free_vars(m)
    return out


def nf_linear_in_var(a: NF, var: str) -> Tuple[NF, NF]:
    """a = slope*var + intercept; error when not linear in `var`."""
    parts = nf_poly_in_var(a, var)
    if any(k > 1 for k in parts):
        raise FragmentError(f"argument not linear in '{var}'")
    return parts.get(1, NF_ZERO), parts.get(0, NF_ZERO)
