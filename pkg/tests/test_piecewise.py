"""Branch-defined inputs: validation, parity, integration, JSON round trip."""

import math

import pytest
from scipy.integrate import quad

from fourierpde import (
    DomainError,
    PiecewiseExpr,
    canonicalize,
    const,
    eval_numeric,
    expr_equal,
    mul,
    parse,
    substitute,
)
from fourierpde.piecewise import as_piecewise


def _mk(*branches, var="x"):
    return PiecewiseExpr.from_json({"var": var, "branches": [
        {"interval": [lo, hi], "expr": ex} for lo, hi, ex in branches]})


STEP = _mk(("-1", "0", "-1"), ("0", "1", "1"))


def test_branches_must_tile_the_interval():
    with pytest.raises(DomainError):
        _mk(("0", "1", "1"), ("2", "3", "2"))       # gap
    with pytest.raises(DomainError):
        _mk(("0", "2", "1"), ("1", "3", "2"))       # overlap
    with pytest.raises(DomainError):
        _mk(("1", "0", "x"))                        # empty interval
    with pytest.raises(DomainError):
        PiecewiseExpr.from_json({"var": "x", "branches": []})


def test_from_json_requires_interval_and_expr():
    with pytest.raises(DomainError):
        PiecewiseExpr.from_json({"var": "x", "branches": [{"expr": "1"}]})


def test_eval_at_picks_branches():
    assert STEP.eval_at(-0.5) == -1.0
    assert STEP.eval_at(0.5) == 1.0
    assert STEP.eval_at(0.0) == 1.0     # breakpoints go to the right branch
    with pytest.raises(DomainError):
        STEP.eval_at(2.0)


def test_domain_endpoints():
    assert STEP.lo.to_float() == -1.0
    assert STEP.hi.to_float() == 1.0


def test_parity_detection():
    assert STEP.parity() == "odd"
    even = _mk(("-1", "0", "x^2"), ("0", "1", "x^2"))
    assert even.parity() == "even"
    skew = _mk(("-1", "0", "0"), ("0", "1", "x"))
    assert skew.parity() == "none"
    # parity needs a symmetric domain
    lop = _mk(("0", "1", "x"))
    assert lop.parity() == "none"


def test_integrate_piecewise_exactly():
    got = STEP.integrate()
    assert expr_equal(got, const(0))
    tri = _mk(("-pi", "0", "-x"), ("0", "pi", "x"))
    assert expr_equal(tri.integrate(), parse("pi^2"))


def test_integrate_with_symbolic_weight():
    w = STEP.integrate(weight=parse("sin(n*x)"))
    # odd * odd over a symmetric window: twice the right half
    for j in (1, 2, 3, 7):
        gv = eval_numeric(canonicalize(substitute(w, "n", const(j))), {})
        ref = quad(lambda x: math.sin(j * x), 0.0, 1.0)[0] * 2.0
        assert abs(gv - ref) < 1e-12


def test_map_rewrites_each_branch():
    doubled = STEP.map(lambda b: canonicalize(mul(const(2), b)))
    assert doubled.eval_at(0.5) == 2.0
    assert doubled.eval_at(-0.5) == -2.0


def test_json_round_trip():
    again = PiecewiseExpr.from_json(STEP.to_json())
    for x in (-0.75, -0.25, 0.25, 0.75):
        assert again.eval_at(x) == STEP.eval_at(x)
    assert again.lo == STEP.lo and again.hi == STEP.hi


def test_as_piecewise_wraps_plain_expressions():
    pw = as_piecewise(parse("x^2"), "x", 0, 1)
    assert pw.is_single
    assert pw.eval_at(0.5) == 0.25
    with pytest.raises(DomainError):
        as_piecewise(STEP, "x", 0, 2)   # wrong domain
    # matching domain passes straight through
    same = as_piecewise(STEP, "x", -1, 1)
    assert same.eval_at(0.5) == 1.0
