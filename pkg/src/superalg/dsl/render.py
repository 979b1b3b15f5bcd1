"""Canonical text for algebra and module definitions."""

from __future__ import annotations

from ..algebra.builtins import BUILTIN_ALGEBRAS, builtin_algebra
from ..algebra.core import EVEN, AlgebraSpec
from ..field import format_scalar
from ..modules.spec import Guard, ModuleSpec


def _parity(p: int) -> str:
    return "even" if p == EVEN else "odd"


def _coefficient(c) -> str:
    text = format_scalar(c)
    body = text[1:] if text.startswith("-") else text
    if any(ch in body for ch in "+-/"):
        return f"({text})"
    return text


def _guard(g: Guard) -> str:
    return " and ".join(str(a) for a in g.atoms)


def _terms(summands, *, algebra: bool) -> str:
    if not summands:
        return "0"
    parts = []
    for s in summands:
        zero = s.delta if algebra else s.to_zero
        term = f"{_coefficient(s.coefficient)} * {s.target}({'0' if zero else 'i+j'})"
        if algebra and zero:
            term += " when i+j=0"
        parts.append(term)
    return " + ".join(parts)


def render_algebra(alg: AlgebraSpec) -> str:
    lines = [f"algebra {alg.name} {{", f"  params: {', '.join(alg.parameters)};"]
    for f in alg.families:
        extra = " central" if f.central else ""
        lines.append(f"  generator {f.name} {_parity(f.parity)}{extra};")
    for r in alg.rules:
        lines.append(f"  bracket {r.left}(i) {r.right}(j) -> {_terms(r.summands, algebra=True)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_module(mod: ModuleSpec) -> str:
    alg = mod.algebra
    lines = [f"module {mod.name} over {alg.name} {{", f"  params: {', '.join(mod.parameters)};"]
    for f in mod.basis:
        support = f" when {_guard(f.support)}" if f.support.atoms else ""
        lines.append(f"  basis {f.name} {_parity(f.parity)}{support};")
    for r in mod.rules:
        guard = f" when {_guard(r.guard)}" if r.guard.atoms else ""
        lines.append(f"  action {r.generator}(i) {r.basis}(j) -> {_terms(r.summands, algebra=False)}{guard};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _needs_algebra_block(alg: AlgebraSpec) -> bool:
    if alg.name not in BUILTIN_ALGEBRAS:
        return True
    return not builtin_algebra(alg.name).same_structure(alg)


def render(definitions) -> str:
    """Render definitions; a module over a non-built-in algebra is preceded
    by that algebra's block unless it is already among ``definitions``."""
    blocks, emitted = [], set()
    for d in definitions:
        if isinstance(d, AlgebraSpec):
            blocks.append(render_algebra(d))
            emitted.add(d.name)
        else:
            if d.algebra.name not in emitted and _needs_algebra_block(d.algebra):
                blocks.append(render_algebra(d.algebra))
                emitted.add(d.algebra.name)
            blocks.append(render_module(d))
    return "\n".join(blocks)


__all__ = ["render", "render_algebra", "render_module"]
