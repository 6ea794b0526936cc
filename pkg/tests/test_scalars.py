"""Exact arithmetic over Gaussian rationals extended by the circle constant."""

import math
from fractions import Fraction

import pytest

from fourierpde.scalars import (
    IMAG,
    MINUS_ONE,
    ONE,
    PI,
    ZERO,
    GaussRat,
    PiPoly,
    Scalar,
    scalar,
)


def test_gauss_rat_basic_arithmetic():
    a = GaussRat(Fraction(1, 2), Fraction(3))
    b = GaussRat(2, Fraction(-1, 3))
    assert a + b == GaussRat(Fraction(5, 2), Fraction(8, 3))
    assert a - b == GaussRat(Fraction(-3, 2), Fraction(10, 3))
    assert -a == GaussRat(Fraction(-1, 2), -3)
    i = GaussRat(0, 1)
    assert i * i == GaussRat(-1)
    assert (a * b) / b == a
    assert a.conjugate() == GaussRat(Fraction(1, 2), -3)
    assert GaussRat(7).is_real and not a.is_real
    assert a.to_complex() == complex(0.5, 3.0)


def test_gauss_rat_equality_and_hash():
    assert GaussRat(3) == 3
    assert GaussRat(1, 2) != GaussRat(1, 3)
    assert hash(GaussRat(2, 5)) == hash(GaussRat(2, 5))
    with pytest.raises(AttributeError):
        GaussRat(1).re = Fraction(2)


def test_gauss_rat_inverse():
    g = GaussRat(3, 4)
    assert g * g.inverse() == GaussRat(1)
    with pytest.raises(ZeroDivisionError):
        GaussRat(0).inverse()


def test_pipoly_construction_trims_zeros():
    p = PiPoly([GaussRat(1), GaussRat(0), GaussRat(0)])
    assert p.degree == 0
    assert PiPoly([]).is_zero
    assert PiPoly([GaussRat(0)]).is_zero


def test_pipoly_arithmetic_and_divmod():
    # (pi + 1)(pi - 1) = pi^2 - 1
    p = PiPoly([GaussRat(1), GaussRat(1)])
    q = PiPoly([GaussRat(-1), GaussRat(1)])
    prod = p * q
    assert prod == PiPoly([GaussRat(-1), GaussRat(0), GaussRat(1)])
    quo, rem = prod.divmod(p)
    assert quo == q and rem.is_zero
    # remainder degree drops below the divisor degree
    a = PiPoly([GaussRat(2), GaussRat(0), GaussRat(0), GaussRat(1)])
    b = PiPoly([GaussRat(1), GaussRat(1)])
    quo, rem = a.divmod(b)
    assert b * quo + rem == a
    assert rem.is_zero or rem.degree < b.degree
    assert abs(PiPoly.pi_power(2).to_complex() - math.pi ** 2) < 1e-12


def test_scalar_reduces_common_factors():
    # (pi^2 - 1)/(pi - 1) == pi + 1
    num = PiPoly([GaussRat(-1), GaussRat(0), GaussRat(1)])
    den = PiPoly([GaussRat(-1), GaussRat(1)])
    s = Scalar(num, den)
    assert s == PI + ONE
    assert s.den == PiPoly([GaussRat(1)])


def test_scalar_field_operations():
    half = scalar(Fraction(1, 2))
    assert half + half == ONE
    assert IMAG * IMAG == MINUS_ONE
    assert (PI * PI - ONE) / (PI - ONE) == PI + ONE
    x = (PI + scalar(2)) / (PI * PI + scalar(1))
    assert x * x.inverse() == ONE
    assert x ** 3 == x * x * x
    assert x ** -2 == (x * x).inverse()
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_scalar_queries():
    assert scalar(6).as_integer() == 6
    s = scalar(Fraction(9, 3))
    assert s.is_integer
    assert s.as_fraction() == Fraction(3)
    assert not PI.is_rational
    assert PI.is_real
    assert not IMAG.is_real
    assert (PI - scalar(3)).sign() > 0
    assert (scalar(3) - PI).sign() < 0
    assert ZERO.sign() == 0
    assert abs(PI.to_float() - math.pi) < 1e-15
    with pytest.raises(ValueError):
        IMAG.to_float()


def test_scalar_conjugate_and_hash():
    z = scalar(2) + IMAG * scalar(3)
    assert z.conjugate() == scalar(2) - IMAG * scalar(3)
    assert z * z.conjugate() == scalar(13)
    assert hash(PI + ONE) == hash(ONE + PI)
    assert scalar(3) == 3


def test_scalar_coercion_rejects_junk():
    with pytest.raises(TypeError):
        scalar(1.5)
