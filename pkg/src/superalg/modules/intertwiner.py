"""Diagonal module maps and restriction to the Virasoro subalgebra."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from ..algebra.builtins import builtin_algebra
from ..algebra.core import Generator
from ..errors import SpecError
from ..field import ZERO_S, LinearSystem, Scalar, solve_linear
from .spec import ActionRule, BasisVector, ModuleSpec, specialize_module


@dataclass
class Intertwiner:
    family_map: dict  # family of m1 -> family of m2
    scalars: dict  # BasisVector of m1 -> Scalar
    dimension: int

    def image(self, v) -> tuple:
        v = BasisVector(*v)
        return BasisVector(self.family_map[v.family], v.index), self.scalars[v]


def _bindings_pair(bindings):
    if isinstance(bindings, (tuple, list)):
        b1, b2 = bindings
        return dict(b1 or {}), dict(b2 or {})
    return dict(bindings or {}), dict(bindings or {})


def _restrict_bindings(mod: ModuleSpec, bindings: dict) -> dict:
    return {k: v for k, v in bindings.items() if k in mod.parameters}


def find_diagonal_intertwiner(
    m1: ModuleSpec, m2: ModuleSpec, bindings=None, window: int = 3
):
    """Search for a degree-0 map ``f_k -> lambda_k * sigma(f)_k`` commuting
    with every window generator, where ``sigma`` is a bijection of basis
    families.  ``bindings`` is one mapping for both modules or a pair.

    Returns an :class:`Intertwiner` with all scalars nonzero, or None.
    """
    if not m1.algebra.same_structure(m2.algebra):
        raise SpecError("modules are over different algebras")
    b1, b2 = _bindings_pair(bindings)
    m1 = specialize_module(m1, _restrict_bindings(m1, b1))
    m2 = specialize_module(m2, _restrict_bindings(m2, b2))
    names1 = [f.name for f in m1.basis]
    names2 = [f.name for f in m2.basis]
    if len(names1) != len(names2):
        return None
    for perm in permutations(names2):
        fmap = dict(zip(names1, perm))
        found = _solve_for_map(m1, m2, fmap, window)
        if found is not None:
            return found
    return None


def _solve_for_map(m1: ModuleSpec, m2: ModuleSpec, fmap: dict, window: int):
    vecs = m1.basis_vectors(window)
    for v in vecs:
        if not m2.family(fmap[v.family]).supports(v.index):
            return None
    index = set(vecs)
    unknowns = list(vecs)
    system = LinearSystem(unknowns)
    gens = m1.algebra.window_generators(window, include_central=False)
    for g in gens:
        for v in vecs:
            image1 = m1.act_basis(g, v)
            w = BasisVector(fmap[v.family], v.index)
            image2 = m2.act_basis(g, w)
            if any(t not in index for t in image1):
                continue
            # phi(g.v) - g.phi(v) = 0, coefficient by coefficient
            rows: dict = {}
            for t, c in image1.items():
                key = BasisVector(fmap[t.family], t.index)
                rows.setdefault(key, {})
                rows[key][t] = rows[key].get(t, ZERO_S) + c
            for t, c in image2.items():
                rows.setdefault(t, {})
                rows[t][v] = rows[t].get(v, ZERO_S) - c
            for coeffs in rows.values():
                coeffs = {u: c for u, c in coeffs.items() if c}
                if coeffs:
                    system.add_row(coeffs, 0)
    space = solve_linear(system)
    if space.dimension == 0:
        return None
    # a generic combination of the basis avoids accidental zeros
    combo: dict = {}
    for k, vec in enumerate(space.homogeneous_basis):
        for u, c in vec.items():
            combo[u] = combo.get(u, ZERO_S) + c * (k + 1) ** 2
    if any(not combo.get(u, ZERO_S) for u in unknowns):
        return None
    lead = combo[unknowns[0]]
    scalars = {u: combo[u] / lead for u in unknowns}
    return Intertwiner(fmap, scalars, space.dimension)


@dataclass
class VirasoroPart:
    module: ModuleSpec
    family: str
    pattern: str  # "A_ab" when L acts as (a - j + i b), else "deformed"
    a: Scalar | None = None
    b: Scalar | None = None
    notes: dict = field(default_factory=dict)


def _identify(mod: ModuleSpec, family: str) -> VirasoroPart:
    rules = [r for r in mod.rules if r.generator == "L" and r.basis == family]
    sub = ModuleSpec(
        f"{mod.name}|{family}",
        builtin_algebra("virasoro"),
        mod.parameters,
        (mod.family(family),),
        tuple(ActionRule("L", family, r.summands, r.guard) for r in rules),
    )
    part = VirasoroPart(sub, family, "deformed")
    if len(rules) == 1 and rules[0].guard.is_true() and len(rules[0].summands) == 1:
        s = rules[0].summands[0]
        if s.target == family and not s.to_zero:
            c = s.coefficient
            a = c.substitute({"i": 0, "j": 0})
            b = c.substitute({"i": 1, "j": 0}) - a
            i, j = Scalar.vars("i j")
            if c == a - j + i * b:
                part.pattern, part.a, part.b = "A_ab", a, b
    if part.pattern == "deformed":
        part.notes = {str(r.guard): [str(s.coefficient) for s in r.summands] for r in rules}
    return part


def restrict_to_virasoro(mod: ModuleSpec) -> tuple:
    """Even and odd parts as Virasoro modules (L rules only)."""
    if "L" not in {f.name for f in mod.algebra.families}:
        raise SpecError(f"{mod.algebra.name} has no L family")
    even = [f.name for f in mod.basis if f.parity == 0]
    odd = [f.name for f in mod.basis if f.parity == 1]
    if len(even) != 1 or len(odd) != 1:
        raise SpecError("expected exactly one even and one odd basis family")
    return _identify(mod, even[0]), _identify(mod, odd[0])


def check_intertwiner(m1: ModuleSpec, m2: ModuleSpec, phi: Intertwiner, window: int) -> bool:
    """Independent re-check: phi(g.v) == g.phi(v) on every window pair."""
    vecs = set(phi.scalars)
    for g in m1.algebra.window_generators(window, include_central=False):
        for v in vecs:
            lhs: dict = {}
            image = m1.act_basis(g, v)
            if any(t not in vecs for t in image):
                continue
            for t, c in image.items():
                w, lam = phi.image(t)
                lhs[w] = lhs.get(w, ZERO_S) + c * lam
            w, lam = phi.image(v)
            rhs = {t: c * lam for t, c in m2.act_basis(Generator(*g), w).items()}
            if {k: x for k, x in lhs.items() if x} != {k: x for k, x in rhs.items() if x}:
                return False
    return True
