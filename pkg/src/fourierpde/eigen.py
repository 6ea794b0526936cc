"""Eigenvalue problems X'' + lambda X = 0 on [0, L].

Separated boundary conditions alpha*X + beta*X' = 0 at each end.
Dirichlet/Neumann combinations have closed-form families

    sqrt(lambda_n) = (p*n + q) * pi / (2L),

kept exact; general Robin conditions are solved numerically by scanning
the transcendental characteristic function and bisecting each bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .errors import DomainError, UnsupportedProblemError
from .expr import Add, Const, Cos, Expr, INDEX_VAR, Sin, Var, add, const, mul
from .piecewise import expr_to_scalar
from .scalars import ONE, PI, Scalar, ZERO, scalar


BCSpec = Union[str, Tuple, "BoundaryCondition"]


@dataclass(frozen=True)
class BoundaryCondition:
    """alpha*u + beta*u' = 0 (homogeneous part of an endpoint condition)."""
    alpha: Scalar
    beta: Scalar

    @property
    def is_dirichlet(self) -> bool:
        return self.beta.is_zero and not self.alpha.is_zero

    @property
    def is_neumann(self) -> bool:
        return self.alpha.is_zero and not self.beta.is_zero

    @staticmethod
    def make(spec: BCSpec) -> "BoundaryCondition":
        if isinstance(spec, BoundaryCondition):
            return spec
        if isinstance(spec, str):
            s = spec.lower()
            if s == "dirichlet":
                return BoundaryCondition(ONE, ZERO)
            if s == "neumann":
                return BoundaryCondition(ZERO, ONE)
            raise DomainError(f"unknown boundary kind {spec!r}")
        try:
            a, b = spec
        except (TypeError, ValueError):
            raise DomainError(f"bad boundary condition {spec!r}")
        a, b = expr_to_scalar(a), expr_to_scalar(b)
        if a.is_zero and b.is_zero:
            raise DomainError("boundary condition cannot be 0*u + 0*u' = 0")
        return BoundaryCondition(a, b)


_FAMILY = {
    # (left kind, right kind) -> (p, q, trig, zero mode present)
    ("dirichlet", "dirichlet"): (2, 0, "sin", False),
    ("neumann", "neumann"): (2, 0, "cos", True),
    ("dirichlet", "neumann"): (2, -1, "sin", False),
    ("neumann", "dirichlet"): (2, -1, "cos", False),
}


@dataclass(frozen=True)
class Eigensystem:
    """Closed-form eigenfamily for Dirichlet/Neumann endpoint pairs."""
    left: str
    right: str
    L: Scalar
    var: str
    p: int
    q: int
    trig: str
    has_zero_mode: bool

    @property
    def kind(self) -> str:
        return f"{self.left}-{self.right}"

    def _index_expr(self, n: Union[None, int, Expr]) -> Expr:
        if n is None:
            return Var(INDEX_VAR)
        if isinstance(n, int):
            return const(n)
        return n

    def frequency(self, n: Union[None, int, Expr] = None) -> Expr:
        """sqrt(lambda_n) = (p*n + q) pi / (2L)."""
        k = add(mul(const(self.p), self._index_expr(n)), const(self.q))
        return mul(Const(PI / (scalar(2) * self.L)), k)

    def eigenvalue(self, n: Union[None, int, Expr] = None) -> Expr:
        from .expr import powi
        return powi(self.frequency(n), 2)

    def eigenfunction(self, n: Union[None, int, Expr] = None) -> Expr:
        arg = mul(self.frequency(n), Var(self.var))
        return Sin(arg) if self.trig == "sin" else Cos(arg)

    def norm2(self, n: Union[None, int] = None) -> Scalar:
        """Integral of the squared eigenfunction over [0, L]."""
        if n == 0:
            if not self.has_zero_mode:
                raise DomainError(f"{self.kind} family has no n=0 mode")
            return self.L
        return self.L / scalar(2)

    @property
    def start(self) -> int:
        return 0 if self.has_zero_mode else 1

    def zero_mode(self) -> Expr:
        if not self.has_zero_mode:
            raise DomainError(f"{self.kind} family has no n=0 mode")
        return const(1)


# ---------------------------------------------------------------------------
# Robin: numeric root finding for the characteristic function

class RobinEigensystem:
    """General separated BCs, eigenvalues found numerically.

    For lambda = k^2 > 0 the left-normalized solution is
        phi(x) = beta1*k*cos(kx) - alpha1*sin(kx)
    and eigenvalues are roots of the right-end residual D(k).
    lambda = 0 and lambda = -kappa^2 < 0 branches are checked separately.
    """

    def __init__(self, left: BCSpec, right: BCSpec, L, var: str = "x"):
        self.left = BoundaryCondition.make(left)
        self.right = BoundaryCondition.make(right)
        self.Ls = expr_to_scalar(L)
        if self.Ls.sign() <= 0:
            raise DomainError("interval length must be positive")
        self.L = self.Ls.to_float()
        self.var = var
        for bc in (self.left, self.right):
            if not (bc.alpha.is_real and bc.beta.is_real):
                raise DomainError("Robin coefficients must be real")
        self.a1 = self.left.alpha.to_float()
        self.b1 = self.left.beta.to_float()
        self.a2 = self.right.alpha.to_float()
        self.b2 = self.right.beta.to_float()
        self._eigs: List[float] = []      # lambda values, ascending
        self._scanned_to = 0.0

    # characteristic functions ------------------------------------------
    def _d_pos(self, k: float) -> float:
        a1, b1, a2, b2, L = self.a1, self.b1, self.a2, self.b2, self.L
        c, s = math.cos(k * L), math.sin(k * L)
        return a2 * (b1 * k * c - a1 * s) + b2 * (-b1 * k * k * s - a1 * k * c)

    def _d_neg(self, kp: float) -> float:
        a1, b1, a2, b2, L = self.a1, self.b1, self.a2, self.b2, self.L
        ch, sh = math.cosh(kp * L), math.sinh(kp * L)
        return a2 * (b1 * kp * ch - a1 * sh) + \
            b2 * (b1 * kp * kp * sh - a1 * kp * ch)

    def _zero_det(self) -> float:
        return self.a1 * (self.a2 * self.L + self.b2) - self.b1 * self.a2

    # root finding --------------------------------------------------------
    @staticmethod
    def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
        flo = f(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if fm == 0.0 or (hi - lo) <= 1e-16 * max(1.0, abs(mid)):
                return mid
            if (flo < 0) != (fm < 0):
                hi = mid
            else:
                lo, flo = mid, fm
        return 0.5 * (lo + hi)

    def _scan(self, f, lo: float, hi: float, pts: int) -> List[float]:
        roots = []
        xs = [lo + (hi - lo) * j / pts for j in range(pts + 1)]
        vals = [f(x) for x in xs]
        for j in range(pts):
            v0, v1 = vals[j], vals[j + 1]
            if v0 == 0.0:
                roots.append(xs[j])
            elif (v0 < 0) != (v1 < 0):
                roots.append(self._bisect(f, xs[j], xs[j + 1]))
        if vals[-1] == 0.0:
            roots.append(xs[-1])
        return roots

    def _negative_eigs(self) -> List[float]:
        scale = 10.0 / self.L
        for a, b in ((self.a1, self.b1), (self.a2, self.b2)):
            if b:
                scale = max(scale, 3.0 * abs(a / b))
        roots = self._scan(self._d_neg, 1e-9 * scale, scale, 2048)
        return [-kp * kp for kp in roots]

    def eigenvalues(self, count: int) -> List[float]:
        """First `count` eigenvalues, ascending (may include <= 0)."""
        if count <= len(self._eigs):
            return self._eigs[:count]
        # the negative-lambda branch is only searched when the boundary
        # data has a negative entry; with all coefficients >= 0 the
        # reported spectrum is the non-negative family
        out: List[float] = []
        if min(self.a1, self.b1, self.a2, self.b2) < 0:
            out.extend(self._negative_eigs())
        if abs(self._zero_det()) <= 1e-12 * max(
                1.0, abs(self.a1), abs(self.b1), abs(self.a2), abs(self.b2)):
            out.append(0.0)
        step = math.pi / self.L
        need = count + 2
        # k = 0 is always a trivial root of D, so start just above it;
        # scan one continuous sweep so roots on pi/L gridpoints are caught
        ks: List[float] = []
        span_steps = need + 2
        for attempt in range(1, 6):
            raw = self._scan(self._d_pos, 1e-6 * step,
                             span_steps * step, 96 * span_steps * attempt)
            ks = []
            for r in sorted(raw):
                if not ks or r - ks[-1] > 1e-9 * step:
                    ks.append(r)
            if len(ks) >= need:
                break
            span_steps += need
        out.extend(k * k for k in ks)
        out.sort()
        if len(out) < count:
            raise UnsupportedProblemError(
                "failed to locate enough Robin eigenvalues")
        self._eigs = out
        return out[:count]

    def eigenfunction_callable(self, j: int,
                               count_hint: int = 0) -> Callable[[float], float]:
        """Callable for the j-th eigenfunction (j >= 1, ascending order)."""
        lam = self.eigenvalues(max(j, count_hint, 8))[j - 1]
        a1, b1 = self.a1, self.b1
        if lam > 1e-30:
            k = math.sqrt(lam)
            return lambda x: b1 * k * math.cos(k * x) - a1 * math.sin(k * x)
        if lam < -1e-30:
            kp = math.sqrt(-lam)
            return lambda x: b1 * kp * math.cosh(kp * x) - a1 * math.sinh(kp * x)
        return lambda x: b1 - a1 * x


def eigensystem(left: BCSpec, right: BCSpec, L,
                var: str = "x") -> Union[Eigensystem, RobinEigensystem]:
    """Build the eigenfamily for u'' + lambda u = 0 with the given ends."""
    lbc = BoundaryCondition.make(left)
    rbc = BoundaryCondition.make(right)
    def kind(bc):
        if bc.is_dirichlet:
            return "dirichlet"
        if bc.is_neumann:
            return "neumann"
        return "robin"
    lk, rk = kind(lbc), kind(rbc)
    if (lk, rk) in _FAMILY:
        p, q, trig, zero = _FAMILY[(lk, rk)]
        Ls = expr_to_scalar(L)
        if Ls.sign() <= 0:
            raise DomainError("interval length must be positive")
        return Eigensystem(lk, rk, Ls, var, p, q, trig, zero)
    return RobinEigensystem(lbc, rbc, L, var)
