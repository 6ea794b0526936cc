"""End-to-end checks for the headline behaviors of the package.

Each test function is one gate; the pytest -v report gives one pass/fail
line per gate.  Tolerances are stated inline next to each assertion.
"""

import math
import random
import time

from scipy.integrate import quad

from fourierpde import (
    Add,
    Const,
    Cos,
    FloatConst,
    Mul,
    PiecewiseExpr,
    bessel_j,
    bessel_j_zeros,
    bessel_jprime_zeros,
    canonicalize,
    cartesian_laplacian,
    chop,
    const,
    differentiate,
    eigensystem,
    eval_numeric,
    expr_equal,
    fourier_coeff,
    fourier_series,
    mul,
    parse,
    polar_laplacian,
    reduce_parabolic,
    solve_heat,
    solve_laplace_annulus,
    solve_laplace_disk,
    solve_laplace_rectangle,
    solve_laplace_wedge,
    solve_parabolic,
    solve_wave,
    solve_wave_disk,
    sub,
    substitute,
)
from fourierpde.expr import Exp
from scipy.special import jv


def _eq(e, text):
    return expr_equal(e, parse(text))


def _value(e, j=None):
    """Numeric (complex) value of a coefficient formula at index j."""
    if j is not None:
        e = substitute(e, "n", const(j))
    e = canonicalize(e)
    if isinstance(e, Const):
        return e.value.to_complex()
    return complex(eval_numeric(e, {}))


def test_trig_coefficients_of_polynomial_cosine_product():
    t0 = time.perf_counter()
    co = fourier_coeff("3*x^2*cos(7*x)", var="x", L="pi", kind="trig")
    elapsed = time.perf_counter() - t0
    assert _eq(co.general["a0"], "-6/49")
    assert _eq(co.general["an"], "12*(n^2+49)*(-1)^(n+1)/(n^4-98*n^2+2401)")
    assert _eq(co.general["bn"], "0")
    assert co.excluded == (7,)
    sing = dict(co.singular)
    assert _eq(sing[7]["a"], "(98*pi^2+3)/98")
    assert _eq(sing[7]["b"], "0")
    assert elapsed < 1.0


def test_equivalent_cosine_inputs_give_identical_coefficients():
    for text in ("cos(x)^2", "(1+cos(2*x))/2"):
        co = fourier_coeff(text, var="x", L="pi", kind="cosine")
        assert _eq(co.general["a0"], "1/2")
        assert _eq(co.general["an"], "0")
        assert co.excluded == (2,)
        assert _eq(dict(co.singular)[2]["a"], "1/2")


def test_complex_coefficients_of_two_branch_function():
    f = PiecewiseExpr.from_json({"var": "x", "branches": [
        {"interval": ["-pi", "0"], "expr": "0"},
        {"interval": ["0", "pi"], "expr": "sin(3*x)"}]})
    co = fourier_coeff(f, kind="complex")
    assert _eq(co.general["c0"], "1/(3*pi)")
    assert _eq(co.general["cn"], "-3*((-1)^n+1)/(2*pi*(n^2-9))")
    assert co.excluded == (3,)
    assert _eq(dict(co.singular)[3]["c"], "-i/4")


def test_series_closed_forms_and_truncations():
    # even power: closed mean plus a pure cosine summand
    s4 = fourier_series("x^4", var="x", L="pi", kind="trig")
    assert _eq(s4.closed, "pi^4/5")
    assert _eq(s4.summand, "8*(pi^2*n^2-6)*(-1)^n*cos(n*x)/n^4")

    # sine expansion with one resonant index
    co = fourier_coeff("x*cos(3*x)", var="x", L="pi", kind="sine")
    assert _eq(co.general["bn"], "2*n*(-1)^n/(n^2-9)")
    assert _eq(dict(co.singular)[3]["b"], "-1/6")
    s5 = fourier_series("x*cos(3*x)", var="x", L="pi", kind="sine", terms=5)
    assert _eq(s5, "-5*sin(5*x)/8 + 8*sin(4*x)/7 - sin(3*x)/6"
                   " - 4*sin(2*x)/5 + sin(x)/4")

    # an exact eigenmode passes through unchanged
    s15 = fourier_series("sin(15*x)", var="x", L="pi", kind="sine")
    assert s15.excluded == (15,)
    assert _eq(s15.instantiate(20), "sin(15*x)")


def test_heat_problem_closed_form_and_residual():
    sol = solve_heat("x^2*(1-x)", "dirichlet", "dirichlet", 1, kappa=1)
    assert _eq(sol.summand,
               "-4*(2*(-1)^n+1)*exp(-pi^2*n^2*t)*sin(pi*n*x)/(pi^3*n^3)")
    assert sol.closed is None or _eq(sol.closed, "0")

    u = sol.instantiate(64)
    resid = sub(differentiate(u, "t"),
                differentiate(differentiate(u, "x"), "x"))
    worst = 0.0
    for i in range(21):
        for j in range(21):
            v = eval_numeric(resid, {"x": i / 20.0, "t": j / 20.0})
            worst = max(worst, abs(v))
    assert worst <= 1e-6


def test_parabolic_problem_exact_solution():
    t0 = time.perf_counter()
    sol = solve_parabolic(
        "exp(9*x/2)*(5*sin(pi*x)+9*sin(2*pi*x)+2*sin(3*pi*x))",
        "dirichlet", "dirichlet", 1, kappa=1, v=-9)
    got = sol.instantiate(3)
    elapsed = time.perf_counter() - t0
    want = ("exp(9*x/2 - 81*t/4)*(2*exp(-9*pi^2*t)*sin(3*pi*x)"
            " + 9*exp(-4*pi^2*t)*sin(2*pi*x) + 5*exp(-pi^2*t)*sin(pi*x))")
    assert _eq(got, want)
    assert elapsed < 10.0


def test_neumann_wedge_with_opaque_data():
    sol = solve_laplace_wedge(1, "pi/2", "f(theta)", bc="neumann")
    want = ("2*r^(2*n)*sin(2*n*theta)"
            "*integrate(f(theta)*sin(2*n*theta), theta, 0, pi/2)/(pi*n)")
    assert _eq(sol.summand, want)


def test_forced_wave_off_resonance():
    sol = solve_wave("f(x)", 0, "dirichlet", "dirichlet", 2, c=3,
                     Q="cos(omega*t)*r(x)")
    want = ("8*(cos(omega*t) - cos(3*pi*n*t/2))*sin(pi*n*x/2)"
            "*integrate(r(x)*sin(pi*n*x/2), x, 0, 2)"
            "/(18*pi^2*n^2 - 8*omega^2)"
            " + cos(3*pi*n*t/2)*sin(pi*n*x/2)"
            "*integrate(f(x)*sin(pi*n*x/2), x, 0, 2)")
    assert _eq(sol.summand, want)

    # independent numeric check of the same mode functions
    def fdata(x):
        return x * (2.0 - x)

    def rdata(x):
        return math.sin(x) + 0.25 * x

    rng = random.Random(91)
    checked = 0
    for n in (1, 2, 3):
        i_f = quad(lambda x: fdata(x) * math.sin(math.pi * n * x / 2),
                   0.0, 2.0)[0]
        i_r = quad(lambda x: rdata(x) * math.sin(math.pi * n * x / 2),
                   0.0, 2.0)[0]
        term = canonicalize(substitute(sol.summand, "n", const(n)))
        for _ in range(10):
            x = rng.uniform(0.0, 2.0)
            t = rng.uniform(0.0, 3.0)
            om = rng.uniform(0.3, 7.0)
            den = 18 * math.pi ** 2 * n ** 2 - 8 * om ** 2
            ref = (8 * (math.cos(om * t)
                        - math.cos(3 * math.pi * n * t / 2)) * i_r / den
                   + math.cos(3 * math.pi * n * t / 2) * i_f) \
                * math.sin(math.pi * n * x / 2)
            got = eval_numeric(term, {"x": x, "t": t, "omega": om},
                               funcs={"f": fdata, "r": rdata})
            assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))
            checked += 1
    assert checked == 30


def test_bessel_zero_tables_and_large_order():
    table = [
        [3.831705970207512, 1.84118378134066, 3.05423692822714,
         4.201188941210528, 5.317553126083997],
        [7.015586669815619, 5.331442773525031, 6.706133194158456,
         8.015236598375953, 9.28239628524161],
        [10.17346813506272, 8.536316366346284, 9.96946782308759,
         11.345924310743, 12.68190844263889],
        [13.32369193631421, 11.70600490259207, 13.17037085601612,
         14.58584828616704, 15.96410703773154],
        [16.47063005087759, 14.86358863390901, 16.34752231832178,
         17.78874786606648, 19.19602880004888],
    ]
    cols = [bessel_jprime_zeros(float(nu), 5) for nu in range(5)]
    for k in range(5):
        for nu in range(5):
            want = table[k][nu]
            assert abs(cols[nu][k] - want) <= 5e-12 * abs(want)

    half = bessel_j_zeros(0.5, 3)
    assert abs(half[2] - 3 * math.pi) <= 1e-12 * (3 * math.pi)

    zp0 = bessel_jprime_zeros(0.0, 6)
    zj1 = bessel_j_zeros(1.0, 6)
    for a, b in zip(zp0, zj1):
        assert abs(a - b) <= 1e-12 * abs(b)

    nu = 146225.0
    t0 = time.perf_counter()
    z = bessel_j_zeros(nu, 3)[2]
    elapsed = time.perf_counter() - t0
    jp = 0.5 * (jv(nu - 1.0, z) - jv(nu + 1.0, z))
    scale = max(1.0, abs(jp) * z)
    assert abs(bessel_j(nu, z)) <= 1e-10 * scale
    assert elapsed < 60.0


def test_disk_membrane_two_surviving_modes():
    u = chop(solve_wave_disk(1.0, 1.0, lambda r, th: 1.0 - r ** 4, 0.0,
                             k=2, l=2))
    assert isinstance(u, Add) and len(u.terms) == 2

    found = []
    for term in u.terms:
        assert isinstance(term, Mul)
        coef = [f.value for f in term.factors
                if isinstance(f, FloatConst)][0]
        osc = [f for f in term.factors if isinstance(f, Cos)][-1]
        freq = [f.value for f in osc.arg.factors
                if isinstance(f, FloatConst)][0]
        found.append((freq, coef))
    found.sort()
    want = [(2.404825557695772, 1.366663216985716),
            (5.520078110286311, -0.4858370155994775)]
    for (gf, gc), (wf, wc) in zip(found, want):
        assert abs(gf - wf) <= 1e-9
        assert abs(gc - wc) <= 1e-9


def test_property_suites():
    _check_quadrature_oracle()
    _check_robin_spectrum()
    _check_harmonicity()
    _check_drift_reduction_identity()


def _quadc(f, lo, hi):
    re = quad(lambda x: f(x).real, lo, hi, limit=200)[0]
    im = quad(lambda x: f(x).imag, lo, hi, limit=200)[0]
    return complex(re, im)


def _check_quadrature_oracle():
    """Every coefficient formula agrees with direct quadrature, n <= 12."""
    pi = math.pi
    cases = [
        ("trig", "3*x^2*cos(7*x)"),
        ("trig", "exp(x)"),
        ("cosine", "cos(x)^2"),
        ("cosine", "x^2 + x"),
        ("sine", "x*cos(3*x)"),
        ("sine", "exp(x)"),
    ]
    for kind, text in cases:
        fe = parse(text)
        co = fourier_coeff(fe, var="x", L="pi", kind=kind)
        sing = dict(co.singular)

        def fx(x, fe=fe):
            return eval_numeric(fe, {"x": x})

        for j in range(0, 13):
            if kind == "trig":
                if j == 0:
                    got = _value(co.general["a0"])
                    ref = _quadc(lambda x: complex(fx(x)), -pi, pi) / (2 * pi)
                    assert abs(got - ref) <= 1e-9
                    continue
                ga = sing[j]["a"] if j in sing else co.general["an"]
                gb = sing[j]["b"] if j in sing else co.general["bn"]
                got_a = _value(ga, None if j in sing else j)
                got_b = _value(gb, None if j in sing else j)
                ref_a = _quadc(lambda x: complex(fx(x) * math.cos(j * x)),
                               -pi, pi) / pi
                ref_b = _quadc(lambda x: complex(fx(x) * math.sin(j * x)),
                               -pi, pi) / pi
                assert abs(got_a - ref_a) <= 1e-9, (kind, text, j)
                assert abs(got_b - ref_b) <= 1e-9, (kind, text, j)
            elif kind == "cosine":
                if j == 0:
                    got = _value(co.general["a0"])
                    ref = _quadc(lambda x: complex(fx(x)), 0, pi) / pi
                else:
                    e = sing[j]["a"] if j in sing else co.general["an"]
                    got = _value(e, None if j in sing else j)
                    ref = 2 / pi * _quadc(
                        lambda x: complex(fx(x) * math.cos(j * x)), 0, pi)
                assert abs(got - ref) <= 1e-9, (kind, text, j)
            else:
                if j == 0:
                    continue
                e = sing[j]["b"] if j in sing else co.general["bn"]
                got = _value(e, None if j in sing else j)
                ref = 2 / pi * _quadc(
                    lambda x: complex(fx(x) * math.sin(j * x)), 0, pi)
                assert abs(got - ref) <= 1e-9, (kind, text, j)

    # complex kind on the two-branch fixture, both signs of the index
    f = PiecewiseExpr.from_json({"var": "x", "branches": [
        {"interval": ["-pi", "0"], "expr": "0"},
        {"interval": ["0", "pi"], "expr": "sin(3*x)"}]})
    co = fourier_coeff(f, kind="complex")
    sing = dict(co.singular)

    def fx(x):
        return math.sin(3 * x) if x >= 0 else 0.0

    for j in range(-12, 13):
        if j == 0:
            got = _value(co.general["c0"])
        elif abs(j) in sing:
            key = "c" if j > 0 else "c_neg"
            got = _value(sing[abs(j)][key])
        else:
            got = _value(co.general["cn"], j)
        ref = _quadc(lambda x: fx(x) * complex(math.cos(j * x),
                                               -math.sin(j * x)),
                     -pi, pi) / (2 * pi)
        assert abs(got - ref) <= 1e-9, ("complex", j)


def _check_robin_spectrum():
    for left, right in (((1, 1), (1, 1)), ((2, 3), (1, 4))):
        es = eigensystem(left, right, 1)
        lams = es.eigenvalues(8)
        for a, b in zip(lams, lams[1:]):
            assert b - a > 1e-10
        phis = [es.eigenfunction_callable(j, count_hint=8)
                for j in range(1, 7)]
        norms = [quad(lambda x: p(x) * p(x), 0.0, 1.0, limit=200)[0]
                 for p in phis]
        for i in range(6):
            for j in range(i + 1, 6):
                ip = quad(lambda x: phis[i](x) * phis[j](x), 0.0, 1.0,
                          limit=200)[0]
                assert abs(ip) <= 1e-10 * math.sqrt(norms[i] * norms[j])


def _check_harmonicity():
    zero = const(0)
    rect = solve_laplace_rectangle(1, 2, (0, 0, 0, 0), f0="x*(1-x)",
                                   fb="sin(pi*x)", g0="y*(2-y)", ga=0)
    assert expr_equal(cartesian_laplacian(rect.summand), zero)

    polar = [
        solve_laplace_disk(1, "f(theta)"),
        solve_laplace_disk(2, "f(theta)", bc="neumann"),
        solve_laplace_wedge(1, "pi/3", "f(theta)"),
        solve_laplace_wedge(1, "pi/2", "f(theta)", bc="neumann"),
        solve_laplace_annulus(1, 2, "f(theta)", "g(theta)"),
    ]
    for sol in polar:
        assert expr_equal(polar_laplacian(sol.summand), zero)
        if sol.closed is not None:
            assert expr_equal(polar_laplacian(sol.closed), zero)


def _fragment(rng):
    heads = ["1", "sin({a}*x + {b}*t)", "cos({a}*x + {b}*t)",
             "exp(-{c}*t)", "exp({c}*x)"]
    parts = []
    for _ in range(rng.randint(1, 3)):
        head = rng.choice(heads).format(a=rng.randint(1, 3),
                                        b=rng.randint(1, 3),
                                        c=rng.randint(1, 2))
        coef = rng.randint(1, 9)
        px = rng.randint(0, 2)
        pt = rng.randint(0, 2)
        parts.append(f"{coef}*x^{px}*t^{pt}*{head}")
    return parse(" + ".join(parts))


def _check_drift_reduction_identity():
    rng = random.Random(20260825)
    for _ in range(50):
        kappa = rng.randint(1, 4)
        v = rng.randint(-6, 6)
        c = rng.randint(-3, 3)
        rho, _kw = reduce_parabolic("x*(1-x)", "dirichlet", "dirichlet", 1,
                                    kappa=kappa, v=v, c=c)
        w = _fragment(rng)
        u = mul(Exp(rho), w)
        kap = const(kappa)
        lhs = sub(differentiate(u, "t"),
                  mul(kap, differentiate(differentiate(u, "x"), "x")))
        lhs = sub(lhs, mul(const(v), differentiate(u, "x")))
        lhs = sub(lhs, mul(const(c), u))
        rhs = mul(Exp(rho),
                  sub(differentiate(w, "t"),
                      mul(kap, differentiate(differentiate(w, "x"), "x"))))
        for _ in range(4):
            pt = {"x": rng.uniform(0.05, 0.95), "t": rng.uniform(0.0, 1.0)}
            a = eval_numeric(lhs, pt)
            b = eval_numeric(rhs, pt)
            assert abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))
