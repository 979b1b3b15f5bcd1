"""Closed-form recovery of index-dependent values by exact interpolation."""

from __future__ import annotations

from typing import Sequence

from .scalar import ONE_S, ZERO_S, Scalar


def interpolate_closed_form(points: Sequence, max_degree: int, var: str = "i"):
    """Fit a polynomial of degree <= ``max_degree`` in ``var`` through ``points``.

    ``points`` are ``(integer, value)`` pairs; values may be symbolic, in which
    case the coefficients live in the parameter field.  The first
    ``max_degree + 1`` points determine the fit and every remaining point is
    checked exactly.  Returns the fitted Scalar, or None when no polynomial of
    that degree fits.
    """
    pts = [(int(x), Scalar.of(y)) for x, y in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation abscissae must be distinct")
    need = max_degree + 1
    if len(pts) < need:
        raise ValueError(f"need at least {need} points for degree {max_degree}, got {len(pts)}")
    t = Scalar.var(var)
    basis_pts = pts[:need]
    fit = ZERO_S
    for k, (xk, yk) in enumerate(basis_pts):
        if not yk:
            continue
        term = ONE_S
        for m, (xm, _) in enumerate(basis_pts):
            if m != k:
                term = term * (t - xm) / (xk - xm)
        fit = fit + yk * term
    for x, y in pts[need:]:
        if fit.substitute({var: x}) != y:
            return None
    return fit
