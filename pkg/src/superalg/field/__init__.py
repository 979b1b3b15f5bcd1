"""Exact arithmetic substrate: rationals, polynomials, rational functions,
linear solving and interpolation."""

from .interpolate import interpolate_closed_form
from .linear import LinearSystem, SolutionSpace, solve_linear
from .parse import parse_scalar
from .polynomial import Polynomial
from .rational import Q, format_rational, parse_rational, to_rational
from .scalar import ONE_S, ZERO_S, PoleError, Scalar, format_scalar, polynomial_gcd

__all__ = [
    "LinearSystem",
    "ONE_S",
    "PoleError",
    "Polynomial",
    "Q",
    "Scalar",
    "SolutionSpace",
    "ZERO_S",
    "format_rational",
    "format_scalar",
    "interpolate_closed_form",
    "parse_rational",
    "parse_scalar",
    "polynomial_gcd",
    "solve_linear",
    "to_rational",
]
