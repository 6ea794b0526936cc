"""Grammar and printer behavior, including round trips."""

import pytest

from fourierpde import (
    ParseError,
    canonicalize,
    const,
    expr_equal,
    parse,
    render,
)
from fourierpde.expr import Const, FloatConst, Func, Integral
from fractions import Fraction


def test_precedence_and_associativity():
    assert expr_equal(parse("1+2*3^2"), const(19))
    assert expr_equal(parse("2^3^2"), const(512))        # right-assoc power
    assert expr_equal(parse("6/2/3"), const(1))          # left-assoc division
    assert expr_equal(parse("-x^2 + x^2"), const(0))     # minus below power
    assert expr_equal(parse("2*-3"), const(-6))
    assert expr_equal(parse("(1+2)*3"), const(9))


def test_constants_and_decimals():
    assert expr_equal(parse("pi*i*i"), parse("-pi"))
    # decimal literals are exact rationals, not floats
    assert expr_equal(parse("2.5"), const(Fraction(5, 2)))
    assert expr_equal(parse("0.125*8"), const(1))


def test_function_application():
    e = parse("f(x, y)")
    assert isinstance(e, Func) and e.name == "f" and len(e.args) == 2
    p = parse("f''(x)")
    assert isinstance(p, Func) and p.primes == 2
    i = parse("integrate(f(x)*sin(n*x), x, 0, pi)")
    assert isinstance(i, Integral) and i.var == "x"


def test_parse_errors_carry_position():
    for bad in ("3*", "sin(", "3 $ 4", "", "(x", "x + * y"):
        with pytest.raises(ParseError) as exc:
            parse(bad)
        assert isinstance(exc.value.position, int)
        assert exc.value.position >= 0
        assert "position" in str(exc.value)


def test_round_trip_through_text():
    corpus = [
        "x",
        "-x",
        "3/2",
        "pi^2/6",
        "(x + 1)^2",
        "sin(2*x)*cos(3*x)",
        "exp(-t)*f(x)",
        "integrate(f(x)*sin(n*x), x, 0, pi)",
        "integrate(g(s)*exp(-s), s, 0, t)",
        "x^n",
        "2^n*x^n",
        "(-1)^n/(n^2 - 9)",
        "f''(x) + 2*f'(x) + f(x)",
        "log(x + 1)",
        "bessel_j(2, 3*r)",
        "cos(pi*n*x)/(pi^3*n^3)",
        "1/(3*pi) + i/4",
    ]
    for text in corpus:
        e = parse(text)
        again = parse(render(e))
        assert expr_equal(e, again), text
        # canonical forms survive the printer too
        c = canonicalize(e)
        assert expr_equal(parse(render(c)), c), text


def test_float_constants_print_full_precision():
    v = 2.404825557695772
    text = render(FloatConst(v))
    # the printed decimal reproduces the double exactly on re-parse
    back = parse(text)
    assert isinstance(back, Const)
    assert back.value.to_float() == v


def test_render_is_stable():
    e = canonicalize(parse("3*x^2*cos(7*x) - x + 1/2"))
    assert render(e) == render(canonicalize(parse(render(e))))


def test_reserved_index_symbol_is_a_variable():
    e = parse("n^2 + 1")
    assert "n" in render(e)
    assert expr_equal(canonicalize(e), canonicalize(parse("1 + n*n")))
