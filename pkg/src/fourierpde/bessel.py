"""Bessel functions of the first kind and their real zeros.

Evaluation delegates to scipy's well-tested routines.  Zeros are computed
from the three-term recurrence: if J_nu(x) = 0 the tail sequence
J_{nu+1}(x), J_{nu+2}(x), ... is an eigenvector of an infinite symmetric
tridiagonal matrix with eigenvalue 1/x, so truncating the matrix and
solving the eigenproblem yields the zeros.  A bisection on Sturm counts
keeps that step deterministic, and a Newton polish removes the
truncation error.  Zeros of J_nu' satisfy a rank-one perturbation of the
same matrix, quadratic in the eigenvalue, handled via its companion
linearization.
"""

import math
from typing import List, Sequence

from scipy.special import jv as _jv

from .errors import ConvergenceError, DomainError

__all__ = [
    "bessel_j",
    "bessel_j_zeros",
    "bessel_jprime_zeros",
    "tridiag_smallest_eigenvalues",
]

# single uniform truncation policy for both zero solvers
_M_CAP = 2000
_CHECK_STEP = 20
_CHECK_RTOL = 1e-13


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or nu <= -1.0:
        raise DomainError(f"order must be a finite real > -1, got {nu}")
    return nu


def bessel_j(nu: float, x: float) -> float:
    """J_nu(x) for real order nu > -1 and x >= 0."""
    nu = _check_order(nu)
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"argument must be finite and >= 0, got {x}")
    val = float(_jv(nu, x))
    if not math.isfinite(val):
        raise DomainError(f"J_{nu}({x}) is not representable as a float")
    return val


def _j(nu: float, x: float) -> float:
    return float(_jv(nu, x))


def _jprime(nu: float, x: float) -> float:
    # J_nu' = (J_{nu-1} - J_{nu+1}) / 2
    return 0.5 * (float(_jv(nu - 1.0, x)) - float(_jv(nu + 1.0, x)))


def _jsecond(nu: float, x: float) -> float:
    # from the defining ODE: J'' = (nu^2/x^2 - 1) J - J'/x
    return (nu * nu / (x * x) - 1.0) * _j(nu, x) - _jprime(nu, x) / x


def _sturm_count(diag: Sequence[float], off2: Sequence[float], x: float) -> int:
    """Number of eigenvalues strictly below x, by the shifted LDL^T pivot
    signs.  A vanishing pivot is nudged to keep the sweep total."""
    count = 0
    q = diag[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, len(diag)):
        q = diag[i] - x - off2[i - 1] / (q if q != 0.0 else 1e-300)
        if q < 0.0:
            count += 1
    return count


def tridiag_smallest_eigenvalues(
    diag: Sequence[float], offdiag: Sequence[float], count: int
) -> List[float]:
    """The `count` smallest eigenvalues of the symmetric tridiagonal
    matrix with the given diagonal and off-diagonal, in ascending order.

    Pure bisection on Sturm counts: deterministic, with every eigenvalue
    located to 1e-14 relative accuracy.
    """
    d = [float(v) for v in diag]
    e = [float(v) for v in offdiag]
    n = len(d)
    if n == 0:
        raise DomainError("matrix must have at least one row")
    if len(e) != n - 1:
        raise DomainError(
            f"off-diagonal length must be {n - 1}, got {len(e)}")
    if not 1 <= count <= n:
        raise DomainError(
            f"requested {count} eigenvalues of a {n}x{n} matrix")

    off2 = [v * v for v in e]
    lo = hi = d[0]
    for i in range(n):
        r = (abs(e[i - 1]) if i > 0 else 0.0) + (abs(e[i]) if i < n - 1 else 0.0)
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)

    out = []
    for k in range(1, count + 1):
        a, b = lo, hi
        for _ in range(200):
            if b - a <= 1e-14 * max(abs(a), abs(b)):
                break
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if _sturm_count(d, off2, mid) >= k:
                b = mid
            else:
                a = mid
        out.append(0.5 * (a + b))
    return out


def _recurrence_offdiag(nu: float, m: int) -> List[float]:
    # symmetrized coupling between J_{nu+k} and J_{nu+k+1}
    return [1.0 / (2.0 * math.sqrt((nu + k) * (nu + k + 1.0)))
            for k in range(1, m)]


def _zeros_from_matrix(nu: float, count: int, m: int) -> List[float]:
    eigs = tridiag_smallest_eigenvalues([0.0] * m,
                                        _recurrence_offdiag(nu, m), count)
    # spectrum is symmetric; the most negative eigenvalues are -1/x for
    # the smallest positive zeros x
    return [-1.0 / v for v in eigs]


def _jprime_zeros_from_matrix(nu: float, count: int, m: int) -> List[float]:
    import numpy as np

    e = _recurrence_offdiag(nu, m)
    z = np.zeros((2 * m, 2 * m))
    for k in range(m - 1):
        z[k, k + 1] = e[k]
        z[k + 1, k] = e[k]
    # rank-one term from eliminating J_nu with the derivative condition
    z[0, m] = 1.0 / (2.0 * nu * (nu + 1.0))
    z[m:, :m] = np.eye(m)
    lam = np.linalg.eigvals(z)
    lam = lam[np.abs(lam.imag) <= 1e-10 * np.abs(lam)].real
    lam = np.sort(lam[lam > 0.0])[::-1]
    if len(lam) < count:
        raise ConvergenceError(
            f"companion matrix of size {2 * m} exposed only {len(lam)} zeros")
    return [1.0 / v for v in lam[:count]]


def _adaptive_zeros(nu: float, count: int, compute) -> List[float]:
    """Grow the truncation until the requested zeros are stable.

    Starts at max(50, 2*count + 30) rows, accepts once adding 20 rows
    moves nothing by more than 1e-13 relative, doubling (capped at 2000)
    otherwise.
    """
    m = max(50, 2 * count + 30)
    vals = compute(nu, count, m)
    while True:
        check = compute(nu, count, m + _CHECK_STEP)
        drift = max(abs(a - b) / abs(b) for a, b in zip(vals, check))
        if drift <= _CHECK_RTOL:
            return check
        if m >= _M_CAP:
            raise ConvergenceError(
                f"zeros did not stabilize at truncation size {m}")
        m = min(2 * m, _M_CAP)
        vals = compute(nu, count, m)


def _newton(x: float, f, fprime, rtol: float = 4e-16) -> float:
    for _ in range(100):
        d = fprime(x)
        if d == 0.0:
            break
        step = f(x) / d
        x -= step
        if abs(step) <= rtol * abs(x):
            break
    return x


def bessel_j_zeros(nu: float, count: int) -> List[float]:
    """The first `count` positive zeros of J_nu, ascending.

    Each zero z satisfies |J_nu(z)| <= 1e-12 * max(1, |J_nu'(z)| * z).
    """
    nu = _check_order(nu)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    seeds = _adaptive_zeros(nu, count, _zeros_from_matrix)
    zeros = [_newton(z, lambda x: _j(nu, x), lambda x: _jprime(nu, x))
             for z in seeds]
    for z in zeros:
        if abs(_j(nu, z)) > 1e-12 * max(1.0, abs(_jprime(nu, z)) * z):
            raise ConvergenceError(
                f"zero near {z} failed the residual check for order {nu}")
    return zeros


def bessel_jprime_zeros(nu: float, count: int) -> List[float]:
    """The first `count` positive zeros of J_nu', ascending.

    x = 0 is never reported.  For nu = 0 the identity J_0' = -J_1 reduces
    the problem to the zeros of J_1.
    """
    nu = _check_order(nu)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if nu == 0.0:
        return bessel_j_zeros(1.0, count)
    seeds = _adaptive_zeros(nu, count, _jprime_zeros_from_matrix)
    zeros = [_newton(z, lambda x: _jprime(nu, x), lambda x: _jsecond(nu, x))
             for z in seeds]
    for z in zeros:
        if abs(_jprime(nu, z)) > 1e-12 * max(1.0, abs(_jsecond(nu, z)) * z):
            raise ConvergenceError(
                f"derivative zero near {z} failed the residual check "
                f"for order {nu}")
    return zeros
