"""Symbolic Fourier series and eigenfunction-expansion PDE solvers.

Exact rational/pi arithmetic, trig-product canonicalization, Fourier
coefficients with explicit handling of resonant (singular) indices,
closed-form solutions of heat/parabolic/wave/Laplace problems on
bounded domains, and Bessel-based numerics for the vibrating disk.
"""

from .errors import (ConvergenceError, DomainError, FourierPDEError,
                     FragmentError, ParseError, UnboundSymbolError,
                     UnsupportedProblemError)
from .expr import (Add, Const, Cos, Exp, Expr, FloatConst, Func, Integral,
                   Mul, Pow, Sin, Var, add, const, div, mul, neg, sub)
from .scalars import GaussRat, PiPoly, Scalar
from .parse import parse
from .render import render
from .nf import canonicalize, expr_equal
from .calculus import (differentiate, eval_numeric, integrate_definite,
                       substitute)
from .piecewise import PiecewiseExpr
from .fourier import FourierCoeffs, fourier_coeff, fourier_series
from .series import SeriesSolution
from .eigen import Eigensystem, RobinEigensystem, eigensystem
from .pde import (BoundaryRecord, boundary_lift, reduce_parabolic,
                  solve_heat, solve_parabolic, solve_wave)
from .laplace import (cartesian_laplacian, polar_laplacian,
                      solve_laplace_annulus, solve_laplace_disk,
                      solve_laplace_rectangle, solve_laplace_wedge)
from .bessel import (bessel_j, bessel_j_zeros, bessel_jprime_zeros,
                     tridiag_smallest_eigenvalues)
from .membrane import chop, solve_wave_disk

__version__ = "0.1.0"

__all__ = [
    "Add", "BoundaryRecord", "Const", "ConvergenceError", "Cos",
    "DomainError", "Eigensystem", "Exp", "Expr", "FloatConst",
    "FourierCoeffs", "FourierPDEError", "FragmentError", "Func", "GaussRat",
    "Integral", "Mul", "ParseError", "PiPoly", "PiecewiseExpr", "Pow",
    "RobinEigensystem", "Scalar", "SeriesSolution", "Sin",
    "UnboundSymbolError", "UnsupportedProblemError", "Var", "add",
    "bessel_j", "bessel_j_zeros", "bessel_jprime_zeros", "boundary_lift",
    "canonicalize", "cartesian_laplacian", "chop", "const", "differentiate",
    "div", "eigensystem", "eval_numeric", "expr_equal", "fourier_coeff",
    "fourier_series", "integrate_definite", "mul", "neg", "parse",
    "polar_laplacian", "reduce_parabolic", "render", "solve_heat",
    "solve_laplace_annulus", "solve_laplace_disk", "solve_laplace_rectangle",
    "solve_laplace_wedge", "solve_parabolic", "solve_wave",
    "solve_wave_disk", "sub", "substitute", "tridiag_smallest_eigenvalues",
]
