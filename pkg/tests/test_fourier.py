"""Coefficient extraction across all four series conventions."""

import pytest

from fourierpde import (
    DomainError,
    PiecewiseExpr,
    SeriesSolution,
    expr_equal,
    fourier_coeff,
    fourier_series,
    parse,
)


def _eq(e, text):
    return expr_equal(e, parse(text))


STEP = PiecewiseExpr.from_json({"var": "x", "branches": [
    {"interval": ["-pi", "0"], "expr": "0"},
    {"interval": ["0", "pi"], "expr": "1"}]})


def test_trig_coefficients_of_identity():
    co = fourier_coeff("x", var="x", L="pi", kind="trig")
    assert _eq(co.general["a0"], "0")
    assert _eq(co.general["an"], "0")
    assert _eq(co.general["bn"], "2*(-1)^(n+1)/n")
    assert co.excluded == ()


def test_trig_coefficients_of_square():
    co = fourier_coeff("x^2", var="x", L="pi", kind="trig")
    assert _eq(co.general["a0"], "pi^2/3")
    assert _eq(co.general["an"], "4*(-1)^n/n^2")
    assert _eq(co.general["bn"], "0")


def test_trig_coefficients_of_step():
    co = fourier_coeff(STEP, kind="trig")
    assert _eq(co.general["a0"], "1/2")
    assert _eq(co.general["an"], "0")
    assert _eq(co.general["bn"], "(1 - (-1)^n)/(pi*n)")


def test_cosine_expansion_of_sine():
    co = fourier_coeff("sin(x)", var="x", L="pi", kind="cosine")
    assert _eq(co.general["a0"], "2/pi")
    assert _eq(co.general["an"], "2*((-1)^n + 1)/(pi*(1 - n^2))")
    assert co.excluded == (1,)
    assert _eq(dict(co.singular)[1]["a"], "0")


def test_resonance_detection_and_warning():
    co = fourier_coeff("x*cos(3*x)", var="x", L="pi", kind="sine")
    assert co.excluded == (3,)
    assert co.warning == "excluding n in {3}"
    # non-integer harmonics do not resonate
    co2 = fourier_coeff("sin(7*x/2)", var="x", L="pi", kind="sine")
    assert co2.excluded == ()
    assert co2.warning is None


def test_complex_kind_keeps_both_signs_of_a_singular_pair():
    f = PiecewiseExpr.from_json({"var": "x", "branches": [
        {"interval": ["-pi", "0"], "expr": "0"},
        {"interval": ["0", "pi"], "expr": "sin(3*x)"}]})
    co = fourier_coeff(f, kind="complex")
    sing = dict(co.singular)
    assert _eq(sing[3]["c"], "-i/4")
    assert _eq(sing[3]["c_neg"], "i/4")


def test_coefficient_json_shape():
    co = fourier_coeff("x*cos(3*x)", var="x", L="pi", kind="sine")
    out = co.to_json()
    assert out["kind"] == "sine"
    assert set(out["general"]) == {"bn"}
    assert out["singular"][0]["n"] == 3
    assert out["warning"] == "excluding n in {3}"


def test_truncated_series_expression():
    got = fourier_series("x", var="x", L="pi", kind="trig", terms=3)
    assert _eq(got, "2*sin(x) - sin(2*x) + 2*sin(3*x)/3")


def test_open_series_object():
    sol = fourier_series("x^4", var="x", L="pi", kind="trig")
    assert isinstance(sol, SeriesSolution)
    assert sol.index == "n"
    assert sol.start == 1
    assert _eq(sol.closed, "pi^4/5")


def test_exact_mode_passthrough():
    sol = fourier_series("sin(15*x)", var="x", L="pi", kind="sine")
    assert sol.excluded == (15,)
    assert _eq(sol.summand, "0")
    assert _eq(sol.instantiate(30), "sin(15*x)")


def test_input_validation():
    with pytest.raises(DomainError):
        fourier_coeff("x", var="x", L="pi", kind="chebyshev")
    with pytest.raises(DomainError):
        fourier_coeff("x", var="x", kind="trig")        # missing half-width
    with pytest.raises(DomainError):
        fourier_coeff("x", var="x", L="-1", kind="trig")
    with pytest.raises(DomainError):
        fourier_coeff(STEP, kind="sine")   # sine wants [0, L] data


def test_kind_is_case_insensitive():
    a = fourier_coeff("x", var="x", L="pi", kind="SINE")
    b = fourier_coeff("x", var="x", L="pi", kind="sine")
    assert expr_equal(a.general["bn"], b.general["bn"])
