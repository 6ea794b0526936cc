"""SeriesSolution: expansion, evaluation, serialization, display."""

import math

import pytest

from fourierpde import (
    DomainError,
    canonicalize,
    expr_equal,
    fourier_series,
    mul,
    parse,
    solve_heat,
)
from fourierpde.expr import const


def _eq(e, text):
    return expr_equal(e, parse(text))


def test_instantiate_needs_a_term_count():
    sol = fourier_series("x^4", var="x", L="pi", kind="trig")
    assert sol.truncation is None
    with pytest.raises(DomainError):
        sol.instantiate()
    got = sol.instantiate(2)
    assert _eq(got, "pi^4/5 + (8*pi^2 - 48)*(-1)*cos(x)"
                    " + (2*pi^2 - 3)*cos(2*x)")


def test_instantiate_skips_excluded_indices():
    sol = fourier_series("x*cos(3*x)", var="x", L="pi", kind="sine")
    got = sol.instantiate(3)
    # the n = 3 slot comes from the special value, not the formula
    assert _eq(got, "sin(x)/4 - 4*sin(2*x)/5 - sin(3*x)/6")


def test_stored_truncation_is_used():
    sol = solve_heat("x^2*(1-x)", "dirichlet", "dirichlet", 1)
    assert sol.truncation is None
    x, t = 0.3, 0.01
    v = sol.eval_at({"x": x, "t": t}, terms=200)
    ref = 0.0
    for n in range(1, 200 + 1):
        bn = -4.0 * (2.0 * (-1.0) ** n + 1.0) / (math.pi ** 3 * n ** 3)
        ref += bn * math.exp(-math.pi ** 2 * n ** 2 * t) \
            * math.sin(math.pi * n * x)
    assert abs(v - ref) < 1e-12


def test_map_applies_to_every_piece():
    sol = fourier_series("x*cos(3*x)", var="x", L="pi", kind="sine")
    scaled = sol.map(lambda e: canonicalize(mul(const(2), e)))
    assert _eq(scaled.summand, "4*n*(-1)^n/(n^2 - 9)*sin(n*x)")
    assert _eq(scaled.instantiate(1), "sin(x)/2")


def test_json_shape_and_round_trip_text():
    sol = fourier_series("x^4", var="x", L="pi", kind="trig")
    out = sol.to_json()
    assert set(out) == {"closed", "special", "summand", "index", "start",
                        "excluded", "truncation"}
    assert out["index"] == "n"
    assert out["start"] == 1
    assert out["truncation"] is None
    assert out["excluded"] == []
    # the rendered summand re-parses to the same expression
    assert _eq(sol.summand, out["summand"])
    assert _eq(sol.closed, out["closed"])


def test_render_text_formats():
    sol = fourier_series("x^4", var="x", L="pi", kind="trig")
    text = sol.render_text()
    assert text.startswith("1/5*pi^4 + sum(")
    assert text.endswith(", n, 1, inf)")

    s15 = fourier_series("sin(15*x)", var="x", L="pi", kind="sine")
    text15 = s15.render_text()
    assert "sin(15*x)" in text15
    assert "[excluding n in {15}]" in text15


def test_eval_at_with_explicit_terms():
    sol = fourier_series("x", var="x", L="pi", kind="trig")
    x = 1.1
    got = sol.eval_at({"x": x}, terms=5)
    ref = sum(2.0 * (-1.0) ** (n + 1) / n * math.sin(n * x)
              for n in range(1, 6))
    assert abs(got - ref) < 1e-12


def test_partial_sums_converge_toward_the_data():
    sol = fourier_series("x*(pi - x)", var="x", L="pi", kind="sine")
    x = 0.9
    target = x * (math.pi - x)
    errs = [abs(sol.eval_at({"x": x}, terms=N) - target)
            for N in (2, 8, 32)]
    assert errs[2] < errs[0]
    assert errs[2] < 1e-3
