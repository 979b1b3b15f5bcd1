"""Central extensions of graded superalgebras on a finite index window.

Unknowns are the values psi(x, y) of a degree-0 super-antisymmetric bilinear
form on window generators.  Rows come from the graded cocycle identity on
generator triples, plus gauge rows that fix the coboundary freedom.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra.core import AlgebraSpec, BracketRule, Generator, GeneratorFamily, Summand
from .errors import SpecError
from .field import (
    ONE_S,
    ZERO_S,
    LinearSystem,
    SolutionSpace,
    interpolate_closed_form,
    solve_linear,
)

MAX_FIT_DEGREE = 3


@dataclass(frozen=True, order=True)
class CocycleUnknown:
    left: Generator
    right: Generator

    def __str__(self) -> str:
        return f"psi({self.left},{self.right})"


@dataclass
class CocycleSystem:
    algebra: AlgebraSpec
    window: int
    unknowns: list
    system: LinearSystem
    gauge_rows: list = field(default_factory=list)

    def lookup(self, x: Generator, y: Generator):
        return _orient(self.algebra, x, y, self._index)

    def __post_init__(self):
        self._index = set(self.unknowns)


@dataclass
class ExtensionBasis:
    dimension: int
    basis: list
    closed_forms: dict
    vanishing_pairs: list = field(default_factory=list)
    fit_failures: list = field(default_factory=list)
    space: SolutionSpace | None = field(default=None, repr=False)


def _orient(alg: AlgebraSpec, x: Generator, y: Generator, known):
    """Map psi(x, y) to ``(unknown, sign)``, or None when it is zero/outside."""
    if x.index + y.index != 0:
        return None
    px, py = alg.parity(x), alg.parity(y)
    if px != py:
        return None
    swap_sign = -1 if not (px and py) else 1  # psi(x,y) = -(-1)^{|x||y|} psi(y,x)
    ox, oy = alg.family_position(x.family), alg.family_position(y.family)
    if ox > oy or (ox == oy and x.index < 0):
        u, sign = CocycleUnknown(y, x), swap_sign
    else:
        u, sign = CocycleUnknown(x, y), 1
    if u not in known:
        return None
    return u, sign


def _unknowns(alg: AlgebraSpec, window: int) -> list:
    fams = [f for f in alg.families if not f.central]
    out = []
    for a, fa in enumerate(fams):
        for fb in fams[a:]:
            if fa.parity != fb.parity:
                continue
            for k in range(-window, window + 1):
                if fa.name == fb.name and k < 0:
                    continue
                if fa.name == fb.name and k == 0 and fa.parity == 0:
                    continue  # psi(x, x) = 0 for even x
                out.append(CocycleUnknown(Generator(fa.name, k), Generator(fb.name, -k)))
    return out


def _gauge_targets(alg: AlgebraSpec, window: int) -> list:
    names = {f.name for f in alg.families}
    pairs = []
    for f in alg.families:
        if not f.central:
            pairs.append((Generator("L", 0), Generator(f.name, 0)))
    pairs.append((Generator("L", 1), Generator("L", -1)))
    if "H" in names:
        pairs.append((Generator("L", 1), Generator("H", -1)))
        # psi(H_1, G_{-1}^{+-}) pairs mixed parities and is never an unknown
        for g in ("Gp", "Gm"):
            if g in names:
                pairs.append((Generator("H", 1), Generator(g, -1)))
    return pairs


def build_cocycle_system(alg: AlgebraSpec, window: int) -> CocycleSystem:
    if any(f.central for f in alg.families):
        raise SpecError(f"{alg.name} already has a central family; extend the centerless algebra")
    if "L" not in {f.name for f in alg.families}:
        raise SpecError(f"{alg.name} has no L family to grade by")
    if window < 1:
        raise ValueError("window must be at least 1")
    unknowns = _unknowns(alg, window)
    known = set(unknowns)
    system = LinearSystem(list(unknowns))
    seen = set()
    gens = alg.window_generators(window, include_central=False)
    br, par = alg.bracket_generators, alg.parity
    for x in gens:
        for y in gens:
            for z in gens:
                if x.index + y.index + z.index != 0:
                    continue
                row: dict = {}
                ok = True
                for p, q, r, s in (
                    (x, y, z, -1 if par(x) * par(z) else 1),
                    (y, z, x, -1 if par(y) * par(x) else 1),
                    (z, x, y, -1 if par(z) * par(y) else 1),
                ):
                    for t, c in br(p, q).items():
                        if abs(t.index) > window:
                            ok = False
                            break
                        hit = _orient(alg, t, r, known)
                        if hit is None:
                            continue
                        u, sign = hit
                        row[u] = row.get(u, ZERO_S) + c * (s * sign)
                    if not ok:
                        break
                if not ok:
                    continue
                row = {u: c for u, c in row.items() if c}
                if not row:
                    continue
                key = _row_key(row)
                if key in seen:
                    continue
                seen.add(key)
                system.add_row(row, 0, label=("cocycle", (x, y, z)))
    cs = CocycleSystem(alg, window, unknowns, system)
    for x, y in _gauge_targets(alg, window):
        hit = _orient(alg, x, y, known)
        if hit is None:
            continue
        cs.gauge_rows.append(len(system.rows))
        system.add_row({hit[0]: ONE_S}, 0, label=("gauge", (x, y)))
    return cs


def _row_key(row: dict) -> frozenset:
    lead = min(row)
    inv = row[lead].inverse()
    return frozenset((u, c * inv) for u, c in row.items())


_PREFERRED = (
    CocycleUnknown(Generator("H", 1), Generator("H", -1)),
    CocycleUnknown(Generator("L", 2), Generator("L", -2)),
)


def _normalized_basis(space: SolutionSpace) -> list:
    """Reduce the homogeneous basis so preferred coordinates become pivots."""
    order = [u for u in _PREFERRED if u in space.unknowns]
    rest = [u for u in space.unknowns if u not in order]
    order += sorted(rest, key=lambda u: (abs(u.left.index), -u.left.index))
    rows = [dict(v) for v in space.homogeneous_basis]
    out = []
    for u in order:
        piv = next((r for r in rows if r.get(u, ZERO_S)), None)
        if piv is None:
            continue
        rows.remove(piv)
        inv = piv[u].inverse()
        piv = {k: v * inv for k, v in piv.items() if v}
        for other in rows + out:
            f = other.get(u, ZERO_S)
            if f:
                for k, v in piv.items():
                    other[k] = other.get(k, ZERO_S) - f * v
        out.append(piv)
        if not rows:
            break
    return [{k: v for k, v in vec.items() if v} for vec in out]


def _family_pairs(alg: AlgebraSpec) -> list:
    fams = [f for f in alg.families if not f.central]
    return [
        (fa.name, fb.name)
        for a, fa in enumerate(fams)
        for fb in fams[a:]
        if fa.parity == fb.parity
    ]


def solve_central_extensions(alg: AlgebraSpec, window: int) -> ExtensionBasis:
    """Solve the cocycle system and fit closed forms per family pair.

    Each basis vector is normalized so that psi(H_1, H_-1) = 1 when H is
    present (psi(L_2, L_-2) = 1 otherwise).  For a one-dimensional space
    ``closed_forms`` maps ``"F,G"`` to psi(F_i, G_-i) as a polynomial in i;
    for larger spaces keys carry a ``#k`` basis suffix.
    """
    if window < 3:
        raise ValueError("window must be at least 3 to pin cubic closed forms")
    cs = build_cocycle_system(alg, window)
    space = solve_linear(cs.system)
    basis = _normalized_basis(space)
    closed, vanishing, failures = {}, [], []
    known = set(cs.unknowns)
    for k, vec in enumerate(basis):
        suffix = "" if len(basis) == 1 else f"#{k + 1}"
        for fa, fb in _family_pairs(alg):
            if not any(u.left.family == fa and u.right.family == fb for u in cs.unknowns):
                continue
            pts = []
            for n in range(-window, window + 1):
                hit = _orient(alg, Generator(fa, n), Generator(fb, -n), known)
                val = ZERO_S if hit is None else vec.get(hit[0], ZERO_S) * hit[1]
                pts.append((n, val))
            key = f"{fa},{fb}{suffix}"
            fit = interpolate_closed_form(pts, MAX_FIT_DEGREE, "i")
            if fit is None:
                failures.append(key)
            elif fit.is_zero():
                vanishing.append(key)
            else:
                closed[key] = fit
    return ExtensionBasis(len(basis), basis, closed, vanishing, failures, space)


def extend_with_cocycle(
    alg: AlgebraSpec, closed_forms: dict, central: str = "c_H", name: str | None = None
) -> AlgebraSpec:
    """Add ``closed_forms`` (one-dimensional case) as delta-guarded central terms."""
    rules = []
    for r in alg.rules:
        cf = closed_forms.get(f"{r.left},{r.right}")
        if cf is not None:
            r = BracketRule(r.left, r.right, r.summands + (Summand(cf, central, True),))
        rules.append(r)
    have = {(r.left, r.right) for r in alg.rules}
    for key, cf in closed_forms.items():
        left, right = key.split(",")
        if (left, right) not in have and (right, left) not in have:
            rules.append(BracketRule(left, right, (Summand(cf, central, True),)))
    families = alg.families + (GeneratorFamily(central, central=True),)
    return AlgebraSpec(name or alg.name, alg.parameters, families, tuple(rules))
