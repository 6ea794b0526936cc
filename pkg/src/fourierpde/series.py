"""Series solutions with a symbolic general term.

A SeriesSolution is `closed + (special terms) + sum over n of summand`,
where `summand` depends on the integer index variable.  Indices whose
coefficient formula is invalid (vanishing denominator) are carried as
explicit special terms and excluded from the sum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Tuple

from .calculus import eval_numeric, substitute
from .errors import DomainError
from .expr import Add, Expr, const, contains_float
from .nf import canonicalize
from .render import render


_ZERO_EXPR = const(0)


def _canon(e: Expr) -> Expr:
    """Canonicalize exact trees; float-valued trees pass through."""
    if contains_float(e):
        return e
    return canonicalize(e)


@dataclass(frozen=True)
class SeriesSolution:
    summand: Expr
    closed: Expr = _ZERO_EXPR
    special: Tuple[Tuple[int, Expr], ...] = ()
    index: str = "n"
    start: int = 1
    truncation: Optional[int] = None

    @property
    def excluded(self) -> Tuple[int, ...]:
        return tuple(sorted(j for j, _ in self.special))

    @property
    def warning(self) -> Optional[str]:
        ex = [j for j in self.excluded if j >= self.start]
        if not ex:
            return None
        inner = ", ".join(str(j) for j in ex)
        return f"excluding {self.index} in {{{inner}}}"

    def map(self, fn: Callable[[Expr], Expr]) -> "SeriesSolution":
        """Apply fn to every structural part (closed, specials, summand)."""
        return replace(
            self,
            summand=fn(self.summand),
            closed=fn(self.closed),
            special=tuple((j, fn(t)) for j, t in self.special),
        )

    def instantiate(self, terms: Optional[int] = None) -> Expr:
        """Finite partial sum through index `terms` as a plain expression."""
        n = terms if terms is not None else self.truncation
        if n is None:
            raise DomainError("a term count is required to expand the series")
        excluded = set(self.excluded)
        parts: List[Expr] = []
        closed = _canon(self.closed)
        if not _is_zero(closed):
            parts.append(closed)
        for j, t in sorted(self.special):
            if j <= n:
                t = _canon(t)
                if not _is_zero(t):
                    parts.append(t)
        for k in range(self.start, n + 1):
            if k in excluded:
                continue
            term = substitute(self.summand, self.index, const(k))
            if not _is_zero(term):
                parts.append(term)
        if not parts:
            return _ZERO_EXPR
        if len(parts) == 1:
            return parts[0]
        return Add(tuple(parts))

    def eval_at(self, bindings: Dict[str, float],
                terms: Optional[int] = None, funcs=None) -> float:
        return eval_numeric(self.instantiate(terms), bindings, funcs)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "closed": render(self.closed),
            "special": [{"n": j, "term": render(t)} for j, t in
                        sorted(self.special)],
            "summand": render(self.summand),
            "index": self.index,
            "start": self.start,
            "excluded": list(self.excluded),
            "truncation": self.truncation,
        }
        w = self.warning
        if w:
            out["warning"] = w
        return out

    def render_text(self) -> str:
        parts: List[str] = []
        closed = _canon(self.closed)
        if not _is_zero(closed):
            parts.append(render(closed))
        for j, t in sorted(self.special):
            t = _canon(t)
            if not _is_zero(t):
                parts.append(render(t))
        if not _is_zero(_canon(self.summand)):
            parts.append(f"sum({render(self.summand)}, {self.index}, "
                         f"{self.start}, inf)")
        text = " + ".join(parts) if parts else "0"
        w = self.warning
        if w:
            text += f"   [{w}]"
        return text

    def __repr__(self):
        return f"SeriesSolution({self.render_text()})"


def _is_zero(e: Expr) -> bool:
    from .expr import Const
    return isinstance(e, Const) and e.value.is_zero
