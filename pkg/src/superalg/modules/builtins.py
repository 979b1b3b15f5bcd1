"""Shipped intermediate-series modules and their deformations."""

from __future__ import annotations

from typing import Mapping

from ..algebra.builtins import builtin_algebra
from ..algebra.core import ODD
from ..errors import SpecError
from ..field import Scalar
from .spec import (
    J_NONZERO,
    J_ZERO,
    SUM_NONZERO,
    SUM_ZERO,
    TRUE,
    ActionRule,
    ActionSummand,
    BasisFamily,
    ModuleSpec,
    specialize_module,
)

i, j, a, b = Scalar.vars("i j a b")
alpha, beta = Scalar.vars("alpha beta")
half = Scalar.of("1/2")

X = BasisFamily("x")
Y = BasisFamily("y", ODD)


def _act(gen, basis, *summands, guard=TRUE) -> ActionRule:
    """``summands`` are (coefficient, target) or (coefficient, target, "0")."""
    out = []
    for s in summands:
        coeff, target = s[0], s[1]
        out.append(ActionSummand(Scalar.of(coeff), target, len(s) > 2))
    return ActionRule(gen, basis, tuple(out), guard)


# -- Virasoro modules ----------------------------------------------------


def a_ab() -> ModuleSpec:
    return ModuleSpec("A_ab", builtin_algebra("virasoro"), ("a", "b"), (X,), (_act("L", "x", (a - j + i * b, "x")),))


def a_alpha() -> ModuleSpec:
    return ModuleSpec(
        "A_alpha",
        builtin_algebra("virasoro"),
        ("alpha",),
        (X,),
        (
            _act("L", "x", (-(i + j), "x"), guard=J_NONZERO),
            _act("L", "x", (-i * (1 + (i + 1) * alpha), "x"), guard=J_ZERO),
        ),
    )


def b_beta() -> ModuleSpec:
    return ModuleSpec(
        "B_beta",
        builtin_algebra("virasoro"),
        ("beta",),
        (X,),
        (
            _act("L", "x", (-j, "x"), guard=SUM_NONZERO),
            _act("L", "x", (i * (1 + (i + 1) * beta), "x", "0"), guard=SUM_ZERO),
        ),
    )


# -- Ramond N=2 modules with generic parameters ---------------------------


def _r_module(name, bshift, hx, hy, g_up, g_down, coeff_down) -> ModuleSpec:
    """x carries A_{a,b}, y carries A_{a,b+bshift}; ``g_up`` sends x to y
    with coefficient 1 and ``g_down`` sends y to x with ``coeff_down``."""
    ramond = builtin_algebra("ramond-n2")
    rules = [
        _act("L", "x", (a - j + i * b, "x")),
        _act("L", "y", (a - j + i * (b + bshift), "y")),
        _act("H", "x", (hx, "x")),
        _act("H", "y", (hy, "y")),
        _act(g_up, "x", (1, "y")),
        _act(g_down, "y", (coeff_down, "x")),
    ]
    return ModuleSpec(name, ramond, ("a", "b"), (X, Y), tuple(rules))


def _swap_roles(name, bshift, hx, hy, g_x, coeff_x, g_y) -> ModuleSpec:
    """Primed families: ``g_x`` sends x to y with ``coeff_x``; ``g_y`` sends y to x with 1."""
    ramond = builtin_algebra("ramond-n2")
    rules = [
        _act("L", "x", (a - j + i * b, "x")),
        _act("L", "y", (a - j + i * (b + bshift), "y")),
        _act("H", "x", (hx, "x")),
        _act("H", "y", (hy, "y")),
        _act(g_x, "x", (coeff_x, "y")),
        _act(g_y, "y", (1, "x")),
    ]
    return ModuleSpec(name, ramond, ("a", "b"), (X, Y), tuple(rules))


def ra_ab() -> ModuleSpec:
    return _r_module("RA_ab", half, -(2 * b + 2), -(2 * b + 1), "Gp", "Gm", 2 * (a + i - j + 2 * i * b))


def rb_ab() -> ModuleSpec:
    return _r_module("RB_ab", half, 2 * b + 2, 2 * b + 1, "Gm", "Gp", 2 * (a + i - j + 2 * i * b))


def rap_ab() -> ModuleSpec:
    return _swap_roles("RAp_ab", -half, -2 * b, -(2 * b + 1), "Gm", 2 * (a - j + 2 * i * b), "Gp")


def rbp_ab() -> ModuleSpec:
    return _swap_roles("RBp_ab", -half, 2 * b, 2 * b + 1, "Gp", 2 * (a - j + 2 * i * b), "Gm")


# -- deformations at the reducible points ---------------------------------


def _deformed_at_x0(name, sign, g_up, g_down) -> ModuleSpec:
    """Deformation of RA_{0,-1} (sign=+1, g_up=Gp) or RB_{0,-1} (sign=-1, g_up=Gm)
    at the basis vector x_0."""
    ramond = builtin_algebra("ramond-n2")
    rules = [
        _act("L", "x", (-(i + j), "x"), guard=J_NONZERO),
        _act("L", "x", (sign * (i * alpha + i**2 / 2), "x"), guard=J_ZERO),
        _act("L", "y", (-(i / 2 + j), "y")),
        _act("H", "x", (0, "x"), guard=J_NONZERO),
        _act("H", "x", (i, "x"), guard=J_ZERO),
        _act("H", "y", (sign, "y")),
        _act(g_up, "x", (1, "y"), guard=J_NONZERO),
        _act(g_up, "x", (-sign * (alpha + i), "y"), guard=J_ZERO),
        _act(g_down, "y", (-2 * (i + j), "x")),
    ]
    return ModuleSpec(name, ramond, ("alpha",), (X, Y), tuple(rules))


def _deformed_at_y0(name, sign, g_up, g_down) -> ModuleSpec:
    """Deformation of RA_{0,-1/2} (sign=+1) or RB_{0,-1/2} (sign=-1) at y_0."""
    ramond = builtin_algebra("ramond-n2")
    rules = [
        _act("L", "x", (-(i / 2 + j), "x")),
        _act("L", "y", (-j, "y"), guard=SUM_NONZERO),
        _act("L", "y", (sign * (i * beta + i**2 / 2), "y", "0"), guard=SUM_ZERO),
        _act("H", "x", (-sign, "x")),
        _act("H", "y", (0, "y"), guard=SUM_NONZERO),
        _act("H", "y", (i, "y", "0"), guard=SUM_ZERO),
        _act(g_up, "x", (1, "y"), guard=SUM_NONZERO),
        _act(g_up, "x", (sign * (beta + i), "y", "0"), guard=SUM_ZERO),
        _act(g_down, "y", (-2 * j, "x")),
    ]
    return ModuleSpec(name, ramond, ("beta",), (X, Y), tuple(rules))


def ra_alpha() -> ModuleSpec:
    return _deformed_at_x0("RA_alpha", 1, "Gp", "Gm")


def rb_alpha() -> ModuleSpec:
    return _deformed_at_x0("RB_alpha", -1, "Gm", "Gp")


def ra_beta() -> ModuleSpec:
    return _deformed_at_y0("RA_beta", 1, "Gp", "Gm")


def rb_beta() -> ModuleSpec:
    return _deformed_at_y0("RB_beta", -1, "Gm", "Gp")


BUILTIN_MODULES = {
    "A_ab": a_ab,
    "A_alpha": a_alpha,
    "B_beta": b_beta,
    "RA_ab": ra_ab,
    "RB_ab": rb_ab,
    "RAp_ab": rap_ab,
    "RBp_ab": rbp_ab,
    "RA_alpha": ra_alpha,
    "RA_beta": ra_beta,
    "RB_alpha": rb_alpha,
    "RB_beta": rb_beta,
}

_CACHE: dict = {}


def builtin_module(name: str, params: Mapping | None = None) -> ModuleSpec:
    if name not in BUILTIN_MODULES:
        known = ", ".join(sorted(BUILTIN_MODULES))
        raise SpecError(f"unknown module {name!r} (known: {known})")
    if name not in _CACHE:
        _CACHE[name] = BUILTIN_MODULES[name]()
    mod = _CACHE[name]
    return specialize_module(mod, params) if params else mod
