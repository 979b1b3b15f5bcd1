"""Programmatic definitions of the shipped algebras.

The same algebras ship as DSL text under ``superalg/data``; the test suite
checks that both sources agree structurally.
"""

from __future__ import annotations

from typing import Mapping

from ..errors import SpecError
from ..field import Scalar
from .core import ODD, AlgebraSpec, BracketRule, GeneratorFamily, Summand, specialize

i, j, b = Scalar.vars("i j b")

_L = GeneratorFamily("L")
_H = GeneratorFamily("H")
_GM = GeneratorFamily("Gm", ODD)
_GP = GeneratorFamily("Gp", ODD)


def _central(name: str) -> GeneratorFamily:
    return GeneratorFamily(name, central=True)


def _rule(left, right, *summands) -> BracketRule:
    return BracketRule(left, right, tuple(Summand(Scalar.of(c), t, d) for c, t, d in summands))


_WITT_LL = (i - j, "L", False)
_HV_LH = (-j, "H", False)


def ramond_n2() -> AlgebraSpec:
    return AlgebraSpec(
        "ramond-n2",
        (),
        (_L, _H, _GM, _GP, _central("c")),
        (
            _rule("L", "L", _WITT_LL, ((i**3 - i) / 12, "c", True)),
            _rule("L", "H", _HV_LH),
            _rule("L", "Gm", (i / 2 - j, "Gm", False)),
            _rule("L", "Gp", (i / 2 - j, "Gp", False)),
            _rule("H", "H", (i / 3, "c", True)),
            _rule("H", "Gm", (-1, "Gm", False)),
            _rule("H", "Gp", (1, "Gp", False)),
            _rule("Gm", "Gm"),
            _rule("Gm", "Gp", (2, "L", False), (j - i, "H", False), ((i**2 - Scalar.of("1/4")) / 3, "c", True)),
            _rule("Gp", "Gp"),
        ),
    )


def hv_tilde0() -> AlgebraSpec:
    return AlgebraSpec(
        "hv-tilde0",
        (),
        (_L, _H),
        (_rule("L", "L", _WITT_LL), _rule("L", "H", _HV_LH), _rule("H", "H")),
    )


def _tilde_rules() -> list:
    return [
        _rule("L", "L", _WITT_LL),
        _rule("L", "H", _HV_LH),
        _rule("L", "Gm", (-j + i * b, "Gm", False)),
        _rule("L", "Gp", (-j + i * (1 - b), "Gp", False)),
        _rule("H", "H"),
        _rule("H", "Gm", (-1, "Gm", False)),
        _rule("H", "Gp", (1, "Gp", False)),
        _rule("Gm", "Gm"),
        _rule("Gm", "Gp", (1, "L", False), (-i + (i + j) * b, "H", False)),
        _rule("Gp", "Gp"),
    ]


def tilde_l() -> AlgebraSpec:
    return AlgebraSpec("tilde-L", ("b",), (_L, _H, _GM, _GP), tuple(_tilde_rules()))


# central terms of the extension of tilde-L, as functions of (i, b)
HAT_CENTRAL_TERMS = {
    ("L", "L"): (i**3 - i) * (b - b**2),
    ("L", "H"): i * (i - 1) / 2 * (1 - 2 * b),
    ("H", "H"): i,
    ("Gm", "Gp"): (i * (i + 1 - 2 * b) + b**2 - b) / 2,
}


def hat_l() -> AlgebraSpec:
    rules = []
    for r in _tilde_rules():
        extra = HAT_CENTRAL_TERMS.get((r.left, r.right))
        if extra is not None:
            r = BracketRule(r.left, r.right, r.summands + (Summand(extra, "c_H", True),))
        rules.append(r)
    return AlgebraSpec("hat-L", ("b",), (_L, _H, _GM, _GP, _central("c_H")), tuple(rules))


def virasoro() -> AlgebraSpec:
    return AlgebraSpec(
        "virasoro",
        (),
        (_L, _central("c")),
        (_rule("L", "L", _WITT_LL, ((i**3 - i) / 12, "c", True)),),
    )


def witt() -> AlgebraSpec:
    return AlgebraSpec("witt", (), (_L,), (_rule("L", "L", _WITT_LL),))


def heisenberg() -> AlgebraSpec:
    return AlgebraSpec(
        "heisenberg", (), (_H, _central("c")), (_rule("H", "H", (i, "c", True)),)
    )


BUILTIN_ALGEBRAS = {
    "ramond-n2": ramond_n2,
    "hv-tilde0": hv_tilde0,
    "tilde-L": tilde_l,
    "hat-L": hat_l,
    "virasoro": virasoro,
    "witt": witt,
    "heisenberg": heisenberg,
}

_CACHE: dict = {}


def builtin_algebra(name: str, params: Mapping | None = None) -> AlgebraSpec:
    """Look up a shipped algebra, optionally specializing parameters."""
    if name not in BUILTIN_ALGEBRAS:
        known = ", ".join(sorted(BUILTIN_ALGEBRAS))
        raise SpecError(f"unknown algebra {name!r} (known: {known})")
    if name not in _CACHE:
        _CACHE[name] = BUILTIN_ALGEBRAS[name]()
    alg = _CACHE[name]
    return specialize(alg, params) if params else alg
