"""Exact scalar arithmetic: the field Q(i)(pi).

A scalar is a ratio of two polynomials in pi whose coefficients are
Gaussian rationals a + b*i with a, b in Q.  All arithmetic is exact;
numeric conversion happens only at evaluation time.  Because pi is
transcendental over Q(i), a scalar is zero iff its numerator polynomial
has all-zero coefficients, so equality tests are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

_FracLike = Union[int, Fraction]


class GaussRat:
    """Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: _FracLike = 0, im: _FracLike = 0):
        if type(re) is not Fraction:
            re = Fraction(re)
        if type(im) is not Fraction:
            im = Fraction(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GaussRat(other)
        if not isinstance(other, GaussRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __add__(self, other: "GaussRat") -> "GaussRat":
        return GaussRat(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussRat") -> "GaussRat":
        return GaussRat(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other: "GaussRat") -> "GaussRat":
        if not self.im and not other.im:
            return GaussRat(self.re * other.re)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inverse(self) -> "GaussRat":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("division by zero GaussRat")
        return GaussRat(self.re / norm, -self.im / norm)

    def __truediv__(self, other: "GaussRat") -> "GaussRat":
        return self * other.inverse()

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def key(self):
        return (self.re.numerator, self.re.denominator,
                self.im.numerator, self.im.denominator)

    def __repr__(self) -> str:
        if not self.im:
            return f"GaussRat({self.re})"
        return f"GaussRat({self.re}, {self.im})"


_GR_ZERO = GaussRat(0)
_GR_ONE = GaussRat(1)


class PiPoly:
    """Dense univariate polynomial in pi over GaussRat, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("PiPoly is immutable")

    @staticmethod
    def const(c: GaussRat) -> "PiPoly":
        return PiPoly([c])

    @staticmethod
    def pi_power(k: int) -> "PiPoly":
        return PiPoly([_GR_ZERO] * k + [_GR_ONE])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        # degree of the zero polynomial reported as -1
        return len(self.coeffs) - 1

    def lead(self) -> GaussRat:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "PiPoly") -> "PiPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return PiPoly(out)

    def __neg__(self) -> "PiPoly":
        return PiPoly([-c for c in self.coeffs])

    def __sub__(self, other: "PiPoly") -> "PiPoly":
        return self + (-other)

    def __mul__(self, other: "PiPoly") -> "PiPoly":
        if self.is_zero or other.is_zero:
            return _PP_ZERO
        out = [_GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for j, a in enumerate(self.coeffs):
            if not a:
                continue
            for k, b in enumerate(other.coeffs):
                if b:
                    out[j + k] = out[j + k] + a * b
        return PiPoly(out)

    def scale(self, c: GaussRat) -> "PiPoly":
        return PiPoly([a * c for a in self.coeffs])

    def divmod(self, other: "PiPoly"):
        if other.is_zero:
            raise ZeroDivisionError("division by zero PiPoly")
        rem = list(self.coeffs)
        q = [_GR_ZERO] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.coeffs
        inv_lead = d[-1].inverse()
        while len(rem) >= len(d):
            c = rem[-1] * inv_lead
            shift = len(rem) - len(d)
            q[shift] = c
            for k, dc in enumerate(d):
                rem[shift + k] = rem[shift + k] - c * dc
            while rem and not rem[-1]:
                rem.pop()
        return PiPoly(q), PiPoly(rem)

    def to_complex(self) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * math.pi + c.to_complex()
        return acc

    def key(self):
        return tuple(c.key() for c in self.coeffs)

    def __repr__(self) -> str:
        return f"PiPoly({list(self.coeffs)!r})"


_PP_ZERO = PiPoly([])
_PP_ONE = PiPoly([_GR_ONE])


def _pp_gcd(a: PiPoly, b: PiPoly) -> PiPoly:
    while not b.is_zero:
        _, r = a.divmod(b)
        a, b = b, r
    if a.is_zero:
        return a
    return a.scale(a.lead().inverse())  # monic


class Scalar:
    """Element of Q(i)(pi), kept reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: PiPoly, den: PiPoly = _PP_ONE):
        if den is _PP_ONE:
            object.__setattr__(self, "num", num)
            object.__setattr__(self, "den", den)
            return
        if den.is_zero:
            raise ZeroDivisionError("zero denominator in Scalar")
        if num.is_zero:
            den = _PP_ONE
        elif den.degree == 0:
            # constant denominator: no gcd needed, just fold it in
            lead = den.lead()
            if lead != _GR_ONE:
                num = num.scale(lead.inverse())
            den = _PP_ONE
        else:
            g = _pp_gcd(num, den)
            if g.degree > 0:
                num, _ = num.divmod(g)
                den, _ = den.divmod(g)
            # normalize: denominator monic
            lead = den.lead()
            if lead != _GR_ONE:
                inv = lead.inverse()
                num = num.scale(inv)
                den = den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_int(k: int) -> "Scalar":
        return Scalar(PiPoly.const(GaussRat(k)))

    @staticmethod
    def from_fraction(q) -> "Scalar":
        return Scalar(PiPoly.const(GaussRat(Fraction(q))))

    @staticmethod
    def from_gauss(g: GaussRat) -> "Scalar":
        return Scalar(PiPoly.const(g))

    @staticmethod
    def pi(k: int = 1) -> "Scalar":
        if k >= 0:
            return Scalar(PiPoly.pi_power(k))
        return Scalar(_PP_ONE, PiPoly.pi_power(-k))

    # -- predicates ----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num == _PP_ONE and self.den == _PP_ONE

    @property
    def is_rational(self) -> bool:
        """True when the value lies in Q (no pi, no imaginary part)."""
        return (self.num.degree <= 0 and self.den.degree <= 0
                and (self.num.is_zero or self.num.coeffs[0].is_real))

    @property
    def is_real(self) -> bool:
        return all(c.is_real for c in self.num.coeffs) and \
            all(c.is_real for c in self.den.coeffs)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self!r} is not a plain rational")
        if self.num.is_zero:
            return Fraction(0)
        return self.num.coeffs[0].re / self.den.coeffs[0].re

    def as_integer(self) -> int:
        f = self.as_fraction()
        if f.denominator != 1:
            raise ValueError(f"{self!r} is not an integer")
        return f.numerator

    @property
    def is_integer(self) -> bool:
        return self.is_rational and (
            self.num.is_zero or
            (self.num.coeffs[0].re / self.den.coeffs[0].re).denominator == 1)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "Scalar") -> "Scalar":
        if self.den is _PP_ONE and other.den is _PP_ONE:
            return Scalar(self.num + other.num)
        return Scalar(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    def __sub__(self, other: "Scalar") -> "Scalar":
        if self.den is _PP_ONE and other.den is _PP_ONE:
            return Scalar(self.num - other.num)
        return Scalar(self.num * other.den - other.num * self.den,
                      self.den * other.den)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if self.den is _PP_ONE and other.den is _PP_ONE:
            return Scalar(self.num * other.num)
        return Scalar(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        if other.is_zero:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar(self.num * other.den, self.den * other.num)

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar(self.den, self.num)

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return Scalar(PiPoly([c.conjugate() for c in self.num.coeffs]),
                      PiPoly([c.conjugate() for c in self.den.coeffs]))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Scalar.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        # canonical representation makes structural equality exact equality
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- numerics -------------------------------------------------------
    def to_complex(self) -> complex:
        return self.num.to_complex() / self.den.to_complex()

    def to_float(self) -> float:
        z = self.to_complex()
        if z.imag != 0.0:
            raise ValueError(f"{self!r} is not real")
        return z.real

    def sign(self) -> int:
        """Sign of a real scalar: -1, 0, or +1 (numeric, exact zero test)."""
        if self.is_zero:
            return 0
        x = self.to_float()
        if x > 0:
            return 1
        if x < 0:
            return -1
        raise ArithmeticError(f"sign underflow for {self!r}")

    def key(self):
        return (self.num.key(), self.den.key())

    def __repr__(self) -> str:
        from .render import render_scalar
        return f"Scalar[{render_scalar(self)[0]}]"


ZERO = Scalar.from_int(0)
ONE = Scalar.from_int(1)
TWO = Scalar.from_int(2)
MINUS_ONE = Scalar.from_int(-1)
PI = Scalar.pi()
IMAG = Scalar.from_gauss(GaussRat(0, 1))
HALF = Scalar.from_fraction(Fraction(1, 2))


def scalar(value) -> Scalar:
    """Coerce an int, Fraction, GaussRat, or Scalar to a Scalar."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, GaussRat):
        return Scalar.from_gauss(value)
    if isinstance(value, (int, Fraction)):
        return Scalar.from_fraction(Fraction(value))
    raise TypeError(f"cannot coerce {type(value).__name__} to Scalar")
