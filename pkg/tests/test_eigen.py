"""Eigenfamilies of u'' + lambda u = 0 on [0, L] for separated endpoint data."""

import math

import pytest
from scipy.integrate import quad

from fourierpde import (
    DomainError,
    Eigensystem,
    RobinEigensystem,
    eigensystem,
    expr_equal,
    parse,
)


def _eq(e, text):
    return expr_equal(e, parse(text))


def test_dirichlet_dirichlet_family():
    es = eigensystem("dirichlet", "dirichlet", 1)
    assert isinstance(es, Eigensystem)
    assert es.start == 1
    assert _eq(es.frequency(), "pi*n")
    assert _eq(es.eigenvalue(), "pi^2*n^2")
    assert _eq(es.eigenfunction(), "sin(pi*n*x)")
    assert _eq(es.eigenfunction(2), "sin(2*pi*x)")
    assert es.norm2().to_float() == 0.5


def test_neumann_neumann_family_has_zero_mode():
    es = eigensystem("neumann", "neumann", "pi")
    assert es.start == 0
    assert _eq(es.frequency(), "n")
    assert _eq(es.eigenfunction(), "cos(n*x)")
    assert _eq(es.zero_mode(), "1")
    assert es.norm2(0) == es.L
    assert es.norm2(3).to_float() == math.pi / 2


def test_mixed_families_use_half_odd_indices():
    dn = eigensystem("dirichlet", "neumann", 1)
    assert dn.start == 1
    assert _eq(dn.frequency(), "(2*n - 1)*pi/2")
    assert _eq(dn.eigenfunction(), "sin((2*n - 1)*pi*x/2)")
    nd = eigensystem("neumann", "dirichlet", 1)
    assert _eq(nd.eigenfunction(), "cos((2*n - 1)*pi*x/2)")
    # no constant mode for either mixed family
    with pytest.raises(DomainError):
        dn.zero_mode()


def test_eigenfunctions_satisfy_their_boundary_conditions():
    import fourierpde as fp
    for left, right in (("dirichlet", "dirichlet"), ("neumann", "neumann"),
                        ("dirichlet", "neumann"), ("neumann", "dirichlet")):
        es = eigensystem(left, right, 1)
        for n in (1, 2, 3):
            phi = es.eigenfunction(n)
            dphi = fp.canonicalize(fp.differentiate(phi, "x"))
            for end, kind in ((0.0, left), (1.0, right)):
                e = phi if kind == "dirichlet" else dphi
                v = fp.eval_numeric(e, {"x": end})
                assert abs(v) < 1e-12, (left, right, n, end)


def test_interval_length_must_be_positive():
    with pytest.raises(DomainError):
        eigensystem("dirichlet", "dirichlet", 0)
    with pytest.raises(DomainError):
        eigensystem("dirichlet", "dirichlet", "-2")


def test_robin_route_is_taken_for_general_data():
    es = eigensystem((1, 1), (1, 1), 1)
    assert isinstance(es, RobinEigensystem)


def _det_oracle(a1, b1, a2, b2, L):
    """Characteristic function for positive eigenvalues lambda = mu^2.

    With u = A cos(mu x) + B sin(mu x) the two endpoint rows give
    (a1 a2 + b1 b2 mu^2) sin(mu L) + mu (a1 b2 - a2 b1) cos(mu L) = 0."""
    def f(mu):
        return ((a1 * a2 + b1 * b2 * mu * mu) * math.sin(mu * L)
                + mu * (a1 * b2 - a2 * b1) * math.cos(mu * L))
    return f


def test_matched_impedance_case_degenerates_to_the_grid():
    # for u + u' = 0 at both ends the positive spectrum is exactly (k pi)^2
    es = eigensystem((1, 1), (1, 1), 1)
    got = [v for v in es.eigenvalues(4) if v > 1e-9]
    for k, lam in enumerate(got, start=1):
        assert abs(lam - (k * math.pi) ** 2) <= 1e-9 * (k * math.pi) ** 2


def test_robin_eigenvalues_match_a_bisection_oracle():
    a1, b1, a2, b2, L = 2.0, 3.0, 1.0, 4.0, 1.0
    es = eigensystem((2, 3), (1, 4), 1)
    got = es.eigenvalues(5)
    f = _det_oracle(a1, b1, a2, b2, L)
    # one sign change per interval ((k-1) pi, k pi)
    want = []
    for k in range(1, 6):
        lo, hi = (k - 1) * math.pi + 1e-9, k * math.pi - 1e-9
        assert (f(lo) < 0) != (f(hi) < 0)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if (f(lo) < 0) != (f(mid) < 0):
                hi = mid
            else:
                lo = mid
        want.append((0.5 * (lo + hi)) ** 2)
    pos = [v for v in got if v > 1e-9]
    for g, w in zip(pos, want):
        assert abs(g - w) <= 1e-9 * max(1.0, abs(w))


def test_robin_spectrum_is_increasing_and_orthogonal():
    es = eigensystem((2, 3), (1, 4), 1)
    lams = es.eigenvalues(7)
    assert all(b > a for a, b in zip(lams, lams[1:]))
    phis = [es.eigenfunction_callable(j, count_hint=7) for j in range(1, 6)]
    norms = [quad(lambda x: p(x) ** 2, 0, 1, limit=200)[0] for p in phis]
    for i in range(5):
        for j in range(i + 1, 5):
            ip = quad(lambda x: phis[i](x) * phis[j](x), 0, 1, limit=200)[0]
            assert abs(ip) <= 1e-10 * math.sqrt(norms[i] * norms[j])


def test_robin_eigenfunctions_satisfy_endpoint_data():
    a1, b1, a2, b2 = 2.0, 3.0, 1.0, 4.0
    es = eigensystem((2, 3), (1, 4), 1)
    h = 1e-5
    for j in (1, 2, 3):
        p = es.eigenfunction_callable(j)
        d0 = (p(h) - p(-h)) / (2 * h)
        d1 = (p(1.0 + h) - p(1.0 - h)) / (2 * h)
        scale = max(1.0, abs(p(0.0)), abs(p(1.0)))
        assert abs(a1 * p(0.0) + b1 * d0) <= 1e-5 * scale
        assert abs(a2 * p(1.0) + b2 * d1) <= 1e-5 * scale


def test_negative_coefficient_data_reaches_negative_eigenvalues():
    # u'' = lambda u with u(0) - u'(0) = 0, u(1) - u'(1)... use data that
    # produces a hyperbolic mode: alpha and beta of opposite sign
    es = eigensystem((1, -1), (1, -1), 1)
    lams = es.eigenvalues(4)
    assert lams[0] < 0.0
    p = es.eigenfunction_callable(1)
    # check the mode actually solves u'' = -lambda u in the hyperbolic sense
    lam = lams[0]
    h = 1e-4
    x = 0.37
    upp = (p(x + h) - 2 * p(x) + p(x - h)) / (h * h)
    assert abs(upp + lam * p(x)) <= 1e-4 * max(1.0, abs(p(x)))
