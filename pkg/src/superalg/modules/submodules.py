"""Diagonal submodules and quotients.

When joint (L_0, H_0, parity) weights separate basis vectors, every
submodule is spanned by basis vectors, so closures of single basis vectors
under the generator actions find all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..algebra.core import Generator
from ..errors import SpecError, SuperalgError
from .spec import (
    BasisFamily,
    BasisVector,
    Guard,
    ModuleSpec,
    joint_weight,
    specialize_module,
)


class WeightCollision(SuperalgError):
    """Two basis vectors share a joint weight, so diagonal search is unsound."""


class NotInvariant(SpecError):
    """The span to be removed is not closed under the action."""

    def __init__(self, generator, vector, image):
        self.witness = (generator, vector, image)
        super().__init__(f"removed span is not invariant: {generator} sends {vector} to {image}")


@dataclass
class SubmoduleReport:
    module: str
    window: int
    band: int
    submodules: list = field(default_factory=list)  # sorted lists of BasisVector
    descriptions: list = field(default_factory=list)
    weights_checked: int = 0

    @property
    def irreducible(self) -> bool:
        return not self.submodules


def _bind(mod: ModuleSpec, bindings: Mapping | None) -> ModuleSpec:
    mod = specialize_module(mod, bindings or {})
    if mod.parameters:
        raise SpecError(f"bind all parameters of {mod.name}: missing {list(mod.parameters)}")
    return mod


def check_weight_separation(mod: ModuleSpec, band: int) -> int:
    seen: dict = {}
    for v in mod.basis_vectors(band):
        w = joint_weight(mod, v)
        key = (w.l0, w.h0, w.parity)
        if key in seen:
            raise WeightCollision(f"{seen[key]} and {v} share joint weight {w}")
        seen[key] = v
    return len(seen)


def closure(mod: ModuleSpec, seeds, window: int, limit: int) -> frozenset:
    """Smallest set containing ``seeds`` and closed under all generator
    actions with |i| <= window whose images have |index| <= limit."""
    gens = mod.algebra.window_generators(window, include_central=False)
    found = set(BasisVector(*s) for s in seeds)
    todo = list(found)
    while todo:
        v = todo.pop()
        for g in gens:
            for t in mod.act_basis(g, v):
                if abs(t.index) <= limit and t not in found:
                    found.add(t)
                    todo.append(t)
    return frozenset(found)


def find_diagonal_submodules(
    mod: ModuleSpec, bindings: Mapping | None = None, window: int = 4, band: int = 6
) -> SubmoduleReport:
    if window < 1 or band < 1:
        raise ValueError("window and band must be positive")
    mod = _bind(mod, bindings)
    report = SubmoduleReport(mod.name, window, band)
    report.weights_checked = check_weight_separation(mod, band)
    in_band = set(mod.basis_vectors(band))
    proper = set()
    for v in sorted(in_band, key=mod.vector_key):
        c = closure(mod, [v], window, band + window) & in_band
        if c != in_band:
            proper.add(frozenset(c))
    minimal = [s for s in proper if not any(o < s for o in proper)]
    minimal.sort(key=lambda s: (len(s), sorted(mod.vector_key(v) for v in s)))
    report.submodules = [sorted(s, key=mod.vector_key) for s in minimal]
    report.descriptions = [describe_subset(mod, s, band) for s in report.submodules]
    return report


def describe_subset(mod: ModuleSpec, subset, band: int) -> dict:
    """Per-family summary such as ``{"x": "all except [0]", "y": "all"}``."""
    out = {}
    subset = set(subset)
    for f in mod.basis:
        ks = [k for k in range(-band, band + 1) if f.supports(k)]
        inside = [k for k in ks if BasisVector(f.name, k) in subset]
        if len(inside) == len(ks):
            out[f.name] = "all"
        elif not inside:
            out[f.name] = "none"
        elif len(inside) <= len(ks) // 2:
            out[f.name] = f"only {inside}"
        else:
            out[f.name] = f"all except {[k for k in ks if k not in inside]}"
    return out


def _complement(g: Guard):
    if g.is_true():
        return None  # nothing remains
    if len(g.atoms) != 1:
        raise SpecError(f"removal guard {g} must be a single atom or true")
    return Guard.of(g.atoms[0].negate())


def quotient_module(
    mod: ModuleSpec,
    removed: Mapping,
    bindings: Mapping | None = None,
    window: int = 4,
    name: str | None = None,
) -> ModuleSpec:
    """Quotient by the span of ``{f_k : removed[f] holds at k}``.

    ``removed`` maps family names to guards in ``j`` (the basis index); the
    span must be invariant on the window, otherwise SpecError is raised.
    """
    mod = specialize_module(mod, bindings or {})
    if not removed:
        return mod
    for f in removed:
        mod.family(f)
    gone = {
        v
        for v in mod.basis_vectors(window)
        if v.family in removed and removed[v.family].holds(0, v.index)
    }
    gens = mod.algebra.window_generators(window, include_central=False)
    for v in sorted(gone, key=mod.vector_key):
        for g in gens:
            for t in mod.act_basis(g, v):
                if abs(t.index) <= window and t not in gone:
                    raise NotInvariant(Generator(*g), v, t)
    basis, dropped = [], set()
    for f in mod.basis:
        if f.name not in removed:
            basis.append(f)
            continue
        keep = _complement(removed[f.name])
        if keep is None:
            dropped.add(f.name)
            continue
        support = keep if f.support.is_true() else f.support.conjoin(keep)
        basis.append(BasisFamily(f.name, f.parity, support))
    rules = []
    for r in mod.rules:
        if r.basis in dropped:
            continue
        summands = tuple(s for s in r.summands if s.target not in dropped)
        rules.append(type(r)(r.generator, r.basis, summands, r.guard))
    qname = name or f"{mod.name}_quotient"
    return ModuleSpec(qname, mod.algebra, mod.parameters, tuple(basis), tuple(rules))


def submodule_spec(mod: ModuleSpec, kept: Mapping, name: str | None = None) -> ModuleSpec:
    """Restrict ``mod`` to the span ``{f_k : kept[f] holds at k}`` (caller
    guarantees invariance)."""
    basis = []
    for f in mod.basis:
        g = kept.get(f.name)
        if g is None:
            continue
        support = g if f.support.is_true() else f.support.conjoin(g)
        basis.append(BasisFamily(f.name, f.parity, support))
    names = {f.name for f in basis}
    rules = []
    for r in mod.rules:
        if r.basis not in names:
            continue
        rules.append(type(r)(r.generator, r.basis, tuple(s for s in r.summands if s.target in names), r.guard))
    return ModuleSpec(name or f"{mod.name}_sub", mod.algebra, mod.parameters, tuple(basis), tuple(rules))


__all__ = [
    "NotInvariant",
    "SubmoduleReport",
    "WeightCollision",
    "closure",
    "describe_subset",
    "find_diagonal_submodules",
    "quotient_module",
    "submodule_spec",
]
