"""Deformations of the reducible RA/RB points at one exceptional basis vector.

At RA_{0,-1} (and RB_{0,-1}) every action *from* x_0 is replaced by unknowns
``L_i x_0 = l_i x_i``, ``H_i x_0 = h_i x_i``, ``G^±_i x_0 = g^±_i y_i``.  At
RA_{0,-1/2} (and RB_{0,-1/2}) every action landing *on* y_0 is replaced:
``L_i y_{-i} = l_i y_0``, ``H_i y_{-i} = h_i y_0``, ``G^±_i x_{-i} = g^±_i y_0``.
The module axioms on the window are linear in the unknowns once the few
triples that multiply two unknowns are set aside.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra.core import Generator
from ..errors import SpecError
from ..field import ZERO_S, LinearSystem, Scalar, interpolate_closed_form, solve_linear
from ..modules.builtins import builtin_module
from ..modules.spec import (
    J_NONZERO,
    J_ZERO,
    SUM_NONZERO,
    SUM_ZERO,
    ActionRule,
    ActionSummand,
    BasisVector,
    Guard,
    ModuleSpec,
    specialize_module,
)

SYMBOLS = {"L": "l", "H": "h", "Gp": "gp", "Gm": "gm"}


@dataclass(frozen=True)
class DeformationFamily:
    base: str
    bindings: tuple
    mode: str  # "from" or "into"
    exceptional: BasisVector
    builtin: str
    parameter: str


DEFORMATION_FAMILIES = {
    "RA-x0": DeformationFamily("RA_ab", (("a", "0"), ("b", "-1")), "from", BasisVector("x", 0), "RA_alpha", "alpha"),
    "RA-y0": DeformationFamily("RA_ab", (("a", "0"), ("b", "-1/2")), "into", BasisVector("y", 0), "RA_beta", "beta"),
    "RB-x0": DeformationFamily("RB_ab", (("a", "0"), ("b", "-1")), "from", BasisVector("x", 0), "RB_alpha", "alpha"),
    "RB-y0": DeformationFamily("RB_ab", (("a", "0"), ("b", "-1/2")), "into", BasisVector("y", 0), "RB_beta", "beta"),
}


class _OutOfRange(Exception):
    pass


def unknown_name(family: str, i: int) -> str:
    return f"{SYMBOLS[family]}[{i}]"


class _Deformed:
    """Action of the base module with the exceptional entries as unknowns."""

    def __init__(self, fam: DeformationFamily, window: int):
        self.fam = fam
        self.window = window
        self.base = specialize_module(builtin_module(fam.base), dict(fam.bindings))
        e = fam.exceptional
        self.other = next(f.name for f in self.base.basis if f.name != e.family)

    def partner_family(self, gen_family: str) -> str:
        """Family linked to the exceptional one by ``gen_family``."""
        odd = self.base.algebra.parity(Generator(gen_family, 0))
        return self.other if odd else self.fam.exceptional.family

    def unknown(self, g) -> Scalar:
        if abs(g.index) > self.window:
            raise _OutOfRange
        return Scalar.var(unknown_name(g.family, g.index))

    def act(self, g, v) -> dict:
        e = self.fam.exceptional
        if self.fam.mode == "from":
            if v == e:
                return {BasisVector(self.partner_family(g.family), e.index + g.index): self.unknown(g)}
            out = dict(self.base.act_basis(g, v))
            out.pop(e, None)
            return out
        out = dict(self.base.act_basis(g, v))
        out.pop(e, None)
        if v.family == self.partner_family(g.family) and v.index + g.index == e.index:
            out[e] = self.unknown(g)
        return out

    def act_combination(self, g, combo: dict) -> dict:
        out: dict = {}
        for v, c in combo.items():
            for t, k in self.act(g, v).items():
                out[t] = out.get(t, ZERO_S) + c * k
        return out

    def defect(self, g, h, v) -> dict:
        alg = self.base.algebra
        start = {v: Scalar.of(1)}
        out: dict = {}
        for t, c in alg.bracket_generators(g, h).items():
            if alg.family(t.family).central:
                continue
            for u, k in self.act(t, v).items():
                out[u] = out.get(u, ZERO_S) + c * k
        sign = -1 if alg.parity(g) * alg.parity(h) else 1
        for u, c in self.act_combination(g, self.act_combination(h, start)).items():
            out[u] = out.get(u, ZERO_S) - c
        for u, c in self.act_combination(h, self.act_combination(g, start)).items():
            out[u] = out.get(u, ZERO_S) + sign * c
        return {u: c for u, c in out.items() if c}


@dataclass
class DeformationSolution:
    family: str
    window: int
    unknowns: list
    dimension: int
    free: tuple  # (h1 name, g0 name)
    values: dict  # unknown name -> Scalar in the free coordinates
    closed_forms: dict  # symbol -> Scalar in i and the free coordinates
    skipped_triples: int = 0
    g_family: str = "Gp"
    h1_zero_trivial: bool | None = None
    normalization: dict = field(default_factory=dict)
    matches_builtin: bool | None = None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "window": self.window,
            "dimension": self.dimension,
            "free": list(self.free),
            "closed_forms": {k: str(v) for k, v in sorted(self.closed_forms.items())},
            "h1_zero_slice_trivial": self.h1_zero_trivial,
            "normalization": {k: str(v) for k, v in sorted(self.normalization.items())},
            "matches_builtin": self.matches_builtin,
            "skipped_triples": self.skipped_triples,
        }


def _build_system(model: _Deformed, window: int):
    alg = model.base.algebra
    gens = alg.window_generators(window, include_central=False)
    names = [unknown_name(f, i) for f in SYMBOLS for i in range(-window, window + 1)]
    system = LinearSystem(names)
    e = model.fam.exceptional
    if model.fam.mode == "from":
        vecs = [e]
    else:
        vecs = [BasisVector(f.name, k) for f in model.base.basis for k in range(-2 * window, 2 * window + 1)]
    skipped = 0
    for g in gens:
        for h in gens:
            for v in vecs:
                try:
                    d = model.defect(g, h, v)
                    rows = [c.linear_parts(names) for c in d.values()]
                except _OutOfRange:
                    continue
                except ValueError:
                    skipped += 1  # product of two unknowns
                    continue
                for parts, rest in rows:
                    parts = {u: c for u, c in parts.items() if c}
                    if parts or rest:
                        system.add_row(parts, -rest)
    return system, skipped


def _fit(values: dict, symbol: str, window: int):
    pts = [(i, values[f"{symbol}[{i}]"]) for i in range(-window, window + 1)]
    return interpolate_closed_form(pts, 3, "i")


def derive_deformation(family: str, window: int = 4) -> DeformationSolution:
    """Solve for the exceptional actions, fit closed forms in i, and compare
    the h_1 = 1 normalization with the shipped deformed module."""
    if family not in DEFORMATION_FAMILIES:
        raise SpecError(f"unknown deformation family {family!r} (known: {', '.join(DEFORMATION_FAMILIES)})")
    if window < 3:
        raise ValueError("window must be at least 3")
    fam = DEFORMATION_FAMILIES[family]
    model = _Deformed(fam, window)
    system, skipped = _build_system(model, window)
    space = solve_linear(system)
    if not space.consistent:
        raise SpecError(f"deformation system for {family} is inconsistent")
    g_family = "Gp" if not space.forced_zero(unknown_name("Gp", 0)) else "Gm"
    free = (unknown_name("H", 1), unknown_name(g_family, 0))
    names = ("h1", f"{SYMBOLS[g_family]}0")
    if space.dimension != 2:
        raise SpecError(f"expected a two-dimensional solution space for {family}, got {space.dimension}")
    values = space.parametrize(list(free), names)
    closed = {}
    for sym in SYMBOLS.values():
        fit = _fit(values, sym, window)
        if fit is None:
            raise SpecError(f"no closed form of degree <= 3 for {sym}_i")
        closed[sym] = fit
    sol = DeformationSolution(family, window, system.unknowns, space.dimension, names, values, closed, skipped, g_family)
    sol.h1_zero_trivial = _slice_is_trivial(model, sol)
    sol.normalization, sol.matches_builtin = _match_builtin(model, sol)
    return sol


def _base_value(model: _Deformed, g) -> Scalar:
    """Undeformed coefficient that the unknown for ``g`` replaces."""
    e = model.fam.exceptional
    if model.fam.mode == "from":
        target = BasisVector(model.partner_family(g.family), e.index + g.index)
        return model.base.act_basis(g, e).get(target, ZERO_S)
    src = BasisVector(model.partner_family(g.family), e.index - g.index)
    return model.base.act_basis(g, src).get(e, ZERO_S)


def _slice_is_trivial(model: _Deformed, sol: DeformationSolution) -> bool:
    """At h_1 = 0 the exceptional actions are g_0 times the undeformed ones."""
    h1, g0 = sol.free
    scale = Scalar.var(g0) / _base_value(model, Generator(sol.g_family, 0))
    for fam_name, sym in SYMBOLS.items():
        for i in range(-sol.window, sol.window + 1):
            v = sol.values[f"{sym}[{i}]"].substitute({h1: 0})
            if v != scale * _base_value(model, Generator(fam_name, i)):
                return False
    return True


def _builtin_value(mod: ModuleSpec, model: _Deformed, g) -> Scalar:
    e = model.fam.exceptional
    if model.fam.mode == "from":
        target = BasisVector(model.partner_family(g.family), e.index + g.index)
        return mod.act_basis(g, e).get(target, ZERO_S)
    src = BasisVector(model.partner_family(g.family), e.index - g.index)
    return mod.act_basis(g, src).get(e, ZERO_S)


def _match_builtin(model: _Deformed, sol: DeformationSolution):
    """Solve for (h_1, g_0) reproducing the shipped module, then compare every
    action on the window."""
    fam = model.fam
    target = builtin_module(fam.builtin)
    system = LinearSystem(list(sol.free))
    for fam_name, sym in SYMBOLS.items():
        for i in range(-sol.window, sol.window + 1):
            parts, rest = sol.values[f"{sym}[{i}]"].linear_parts(sol.free)
            system.add_row(parts, _builtin_value(target, model, Generator(fam_name, i)) - rest)
    space = solve_linear(system)
    if not space.consistent or space.dimension:
        return {}, False
    norm = dict(space.particular)
    gens = model.base.algebra.window_generators(sol.window, include_central=False)
    span = range(-2 * sol.window, 2 * sol.window + 1)
    vecs = [BasisVector(f.name, k) for f in model.base.basis for k in span]
    e = fam.exceptional
    for g in gens:
        for v in vecs:
            want = dict(target.act_basis(g, v))
            got = {}
            for t, c in model.act(g, v).items():
                if abs(g.index) <= sol.window:
                    got[t] = c.substitute({u: sol.values[u] for u in c.variables() if u in sol.values})
            got = {t: c.substitute(norm) for t, c in got.items()}
            if fam.mode == "from" and v != e:
                want.pop(e, None)
            want = {t: c for t, c in want.items() if c}
            got = {t: c for t, c in got.items() if c}
            if want != got:
                return norm, False
    return norm, True


def assemble_deformation(sol: DeformationSolution, name: str | None = None) -> ModuleSpec:
    """Module with the fitted exceptional actions and symbolic free coordinates."""
    fam = DEFORMATION_FAMILIES[sol.family]
    model = _Deformed(fam, sol.window)
    base = model.base
    e = fam.exceptional
    if fam.mode == "from":
        plain, special = J_NONZERO, J_ZERO
    else:
        plain, special = SUM_NONZERO, SUM_ZERO
    rules = []
    touched = set()
    for gen_family, sym in SYMBOLS.items():
        source = e.family if fam.mode == "from" else model.partner_family(gen_family)
        touched.add((gen_family, source))
        form = sol.closed_forms[sym]
        for r in base.rules_for(gen_family, source):
            if fam.mode == "into" and not any(s.target == e.family for s in r.summands):
                rules.append(r)
                continue
            rules.append(ActionRule(r.generator, r.basis, r.summands, _and(r.guard, plain)))
        if not base.rules_for(gen_family, source):
            rules.append(ActionRule(gen_family, source, (), plain))
        if form:
            tgt = model.partner_family(gen_family) if fam.mode == "from" else e.family
            rules.append(ActionRule(gen_family, source, (ActionSummand(form, tgt, fam.mode == "into"),), special))
        else:
            rules.append(ActionRule(gen_family, source, (), special))
    for r in base.rules:
        if (r.generator, r.basis) not in touched:
            rules.append(r)
    params = tuple(sorted(set(base.parameters) | set(sol.free)))
    return ModuleSpec(name or f"{sol.family}-deformed", base.algebra, params, base.basis, tuple(rules))


def _and(g: Guard, h: Guard) -> Guard:
    return h if g.is_true() else g.conjoin(h)


__all__ = [
    "DEFORMATION_FAMILIES",
    "DeformationFamily",
    "DeformationSolution",
    "assemble_deformation",
    "derive_deformation",
    "unknown_name",
]
