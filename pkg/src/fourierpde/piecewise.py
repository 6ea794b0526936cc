"""Piecewise expressions on a bounded interval.

Branches are half-open [lo, hi) except the last, which is closed.
Endpoints are exact scalars; branches must be sorted, non-overlapping,
and gap-free after normalization.  A single-branch piecewise behaves
exactly like its body.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .calculus import as_expr, eval_numeric, integrate_nf
from .errors import DomainError, UnboundSymbolError
from .expr import Const, Expr, mul, neg, subst_var
from .nf import NF_ZERO, expr_equal, from_nf, nf_add, nf_is_const, to_nf
from .parse import parse
from .render import render
from .scalars import Scalar, scalar


def expr_to_scalar(e: Union[Expr, Scalar, int, str]) -> Scalar:
    """Exact constant value of an endpoint expression."""
    if isinstance(e, Scalar):
        return e
    if isinstance(e, int):
        return scalar(e)
    if isinstance(e, str):
        e = parse(e)
    c = nf_is_const(to_nf(e))
    if c is None:
        raise DomainError(f"endpoint {render(e)!r} is not a constant")
    if not c.is_real:
        raise DomainError(f"endpoint {render(e)!r} is not real")
    return c


def scalar_cmp(a: Scalar, b: Scalar) -> int:
    if a == b:
        return 0
    return (a - b).sign()


@dataclass(frozen=True)
class Branch:
    lo: Scalar
    hi: Scalar
    body: Expr


class PiecewiseExpr:
    """Normalized piecewise function of one variable."""

    def __init__(self, branches: Sequence[Tuple], var: str = "x"):
        self.var = var
        bs: List[Branch] = []
        for item in branches:
            if isinstance(item, Branch):
                bs.append(item)
            else:
                lo, hi, body = item
                bs.append(Branch(expr_to_scalar(lo), expr_to_scalar(hi),
                                 as_expr(body)))
        if not bs:
            raise DomainError("piecewise needs at least one branch")
        for b in bs:
            if scalar_cmp(b.lo, b.hi) >= 0:
                raise DomainError("branch interval is empty or reversed")
        bs.sort(key=lambda b: b.lo.to_float())
        for prev, cur in zip(bs, bs[1:]):
            c = scalar_cmp(prev.hi, cur.lo)
            if c > 0:
                raise DomainError("overlapping piecewise branches")
            if c < 0:
                raise DomainError("gap between piecewise branches")
        self.branches: Tuple[Branch, ...] = tuple(bs)

    # -- basic structure -------------------------------------------------
    @property
    def lo(self) -> Scalar:
        return self.branches[0].lo

    @property
    def hi(self) -> Scalar:
        return self.branches[-1].hi

    @property
    def is_single(self) -> bool:
        return len(self.branches) == 1

    def as_expr(self) -> Expr:
        if not self.is_single:
            raise DomainError("multi-branch piecewise has no single body")
        return self.branches[0].body

    def map(self, fn: Callable[[Expr], Expr]) -> "PiecewiseExpr":
        return PiecewiseExpr(
            [Branch(b.lo, b.hi, fn(b.body)) for b in self.branches], self.var)

    # -- evaluation -------------------------------------------------------
    def eval_at(self, x: float, funcs=None) -> float:
        for i, b in enumerate(self.branches):
            last = i == len(self.branches) - 1
            inside = b.lo.to_float() <= x < b.hi.to_float() or \
                (last and x == b.hi.to_float())
            if inside:
                return eval_numeric(b.body, {self.var: x}, funcs)
        raise DomainError(f"{x} outside piecewise domain")

    # -- calculus ----------------------------------------------------------
    def integrate(self, weight: Optional[Expr] = None) -> Expr:
        """Exact integral of self * weight over the whole domain."""
        total = NF_ZERO
        for b in self.branches:
            integrand = b.body if weight is None else mul(b.body, weight)
            total = nf_add(total, integrate_nf(to_nf(integrand), self.var,
                                               Const(b.lo), Const(b.hi)))
        return from_nf(total)

    # -- parity -------------------------------------------------------------
    def parity(self, probes: int = 40, seed: int = 7) -> str:
        """'even', 'odd', or 'none'.  Structural check first, then a
        numeric probe; opaque content falls back to 'none'."""
        if scalar_cmp(self.lo, -self.hi) != 0:
            return "none"
        mirrored = PiecewiseExpr(
            [Branch(-b.hi, -b.lo, subst_var(b.body, self.var,
                                            _neg_var(self.var)))
             for b in self.branches], self.var)
        if self._branchwise_equal(mirrored, sign=1):
            return "even"
        if self._branchwise_equal(mirrored, sign=-1):
            return "odd"
        # numeric probing
        rng = random.Random(seed)
        half = min(abs(self.lo.to_float()), abs(self.hi.to_float()))
        even_ok = odd_ok = True
        scale = 1.0
        try:
            for _ in range(probes):
                x = rng.uniform(1e-3, half * 0.999)
                fx = self.eval_at(x)
                fmx = self.eval_at(-x)
                scale = max(scale, abs(fx), abs(fmx))
                if abs(fx - fmx) > 1e-11 * scale:
                    even_ok = False
                if abs(fx + fmx) > 1e-11 * scale:
                    odd_ok = False
                if not (even_ok or odd_ok):
                    return "none"
        except UnboundSymbolError:
            return "none"
        if even_ok:
            return "even"
        if odd_ok:
            return "odd"
        return "none"

    def _branchwise_equal(self, other: "PiecewiseExpr", sign: int) -> bool:
        if len(self.branches) != len(other.branches):
            return False
        for a, b in zip(self.branches, other.branches):
            if scalar_cmp(a.lo, b.lo) != 0 or scalar_cmp(a.hi, b.hi) != 0:
                return False
            rhs = b.body if sign > 0 else neg(b.body)
            try:
                if not expr_equal(a.body, rhs):
                    return False
            except Exception:
                return False
        return True

    # -- serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "var": self.var,
            "branches": [
                {"interval": [render(Const(b.lo)), render(Const(b.hi))],
                 "expr": render(b.body)}
                for b in self.branches
            ],
        }

    @staticmethod
    def from_json(obj: dict, default_var: str = "x") -> "PiecewiseExpr":
        if not isinstance(obj, dict) or "branches" not in obj:
            raise DomainError("piecewise JSON needs a 'branches' list")
        var = obj.get("var", default_var)
        branches = []
        for rec in obj["branches"]:
            try:
                lo, hi = rec["interval"]
                body = rec["expr"]
            except (KeyError, TypeError, ValueError):
                raise DomainError(
                    "each branch needs 'interval': [lo, hi] and 'expr'")
            branches.append((_endpoint(lo), _endpoint(hi),
                             parse(body) if isinstance(body, str)
                             else as_expr(body)))
        return PiecewiseExpr(branches, var)

    def __repr__(self):
        parts = ", ".join(
            f"[{render(Const(b.lo))}, {render(Const(b.hi))}] -> "
            f"{render(b.body)}" for b in self.branches)
        return f"PiecewiseExpr({parts})"


def _neg_var(var: str):
    from .expr import Var
    return neg(Var(var))


def _endpoint(v) -> Scalar:
    if isinstance(v, str):
        return expr_to_scalar(v)
    if isinstance(v, (int, float)):
        if isinstance(v, float) and not v.is_integer():
            from fractions import Fraction
            return scalar(Fraction(str(v)))
        return scalar(int(v))
    raise DomainError(f"bad endpoint {v!r}")


def as_piecewise(f, var: str, lo, hi) -> PiecewiseExpr:
    """Wrap a plain expression (or pass through a piecewise) on [lo, hi]."""
    if isinstance(f, PiecewiseExpr):
        if f.var != var:
            raise DomainError(
                f"piecewise variable '{f.var}' does not match '{var}'")
        if scalar_cmp(f.lo, expr_to_scalar(lo)) != 0 or \
                scalar_cmp(f.hi, expr_to_scalar(hi)) != 0:
            raise DomainError("piecewise domain does not match the problem")
        return f
    if isinstance(f, str):
        f = parse(f)
    return PiecewiseExpr([(lo, hi, f)], var)
