"""Odd extensions of the Heisenberg-Virasoro type algebra.

The odd part is spanned by one or two intermediate-series families whose
structure constants start out as unknowns.  Jacobi instances are evaluated
with a parametric bracket, then facts are extracted stage by stage: each
stage is linear once the previous facts are substituted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .algebra.core import (
    EVEN,
    ODD,
    AlgebraSpec,
    BracketRule,
    CheckReport,
    Generator,
    GeneratorFamily,
    Summand,
    Violation,
    jacobi_residual,
)
from .algebra.builtins import builtin_algebra
from .field import (
    ZERO_S,
    LinearSystem,
    Scalar,
    SolutionSpace,
    interpolate_closed_form,
    polynomial_gcd,
    solve_linear,
)

STRUCTURE_VARS = ("f_1", "f_2", "a_p", "a_m", "b_p", "b_m")


class _OutOfWindow(Exception):
    pass


def coeff_var(kind: str, i: int, j: int) -> str:
    return f"{kind}[{i},{j}]"


class ParametricBracket:
    """Brackets of L, H and odd families with symbolic structure constants.

    ``odd`` maps each odd family to ``(a, b, f)`` Scalars giving
    ``[L_m, G_i] = (a - i + m b) G_{m+i}`` and ``[H_n, G_i] = f G_{n+i}``.
    ``pair`` names the odd families whose bracket is
    ``a[i,j] L_{i+j} + b[i,j] H_{i+j}``; ``known`` may supply closed values
    for ``a[i,j]``/``b[i,j]`` as callables of ``(i, j)``.
    """

    def __init__(self, odd: dict, pair: tuple, window: int, symmetric=False):
        self.odd = {g: tuple(Scalar.of(v) for v in abf) for g, abf in odd.items()}
        self.pair = pair
        self.window = window
        self.symmetric = symmetric
        self.parities = {"L": EVEN, "H": EVEN, **{g: ODD for g in odd}}

    def parity(self, g) -> int:
        return self.parities[g[0]]

    def unknown(self, kind: str, i: int, j: int) -> Scalar:
        if abs(i) > self.window or abs(j) > self.window:
            raise _OutOfWindow
        if self.symmetric and i > j:
            i, j = j, i
        return Scalar.var(coeff_var(kind, i, j))

    def unknown_names(self) -> list:
        w = range(-self.window, self.window + 1)
        out = []
        for kind in ("a", "b"):
            for i in w:
                for j in w:
                    if self.symmetric and i > j:
                        continue
                    out.append(coeff_var(kind, i, j))
        return out

    def __call__(self, x, y) -> dict:
        fx, fy = x[0], y[0]
        m, n = x[1], y[1]
        if fx in ("L", "H") and fy in ("L", "H"):
            if fx == "L" and fy == "L":
                return _nz({Generator("L", m + n): Scalar.of(m - n)})
            if fx == "L" and fy == "H":
                return _nz({Generator("H", m + n): Scalar.of(-n)})
            if fx == "H" and fy == "L":
                return _nz({Generator("H", m + n): Scalar.of(m)})
            return {}
        if fx in ("L", "H"):
            a, b, f = self.odd[fy]
            c = a - n + m * b if fx == "L" else f
            return _nz({Generator(fy, m + n): c})
        if fy in ("L", "H"):
            # [G, X] = -[X, G] for X even
            return {g: -c for g, c in self(y, x).items()}
        if (fx, fy) == self.pair or (self.symmetric and fx == fy == self.pair[0]):
            i, j = m, n
        elif (fy, fx) == self.pair:
            i, j = n, m  # odd-odd brackets are symmetric
        else:
            return {}
        return _nz(
            {
                Generator("L", i + j): self.unknown("a", i, j),
                Generator("H", i + j): self.unknown("b", i, j),
            }
        )

    def residual(self, x, y, z):
        try:
            return jacobi_residual(self, self.parity, x, y, z)
        except _OutOfWindow:
            return None


def _nz(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


@dataclass
class Fact:
    name: str
    identity: Scalar  # vanishes when the fact holds
    provenance: str

    def to_json(self) -> dict:
        return {"fact": self.name, "identity": f"{self.identity} = 0", "from": self.provenance}


@dataclass
class DerivedConstraintSet:
    window: int
    facts: list = field(default_factory=list)
    space: SolutionSpace | None = None
    closed_forms: dict = field(default_factory=dict)
    structure: dict = field(default_factory=dict)

    def fact_names(self) -> list:
        return [f.name for f in self.facts]


class StageError(RuntimeError):
    """A derivation stage found no consistent condition."""


def _common_factor(residuals, unknowns: set) -> Scalar:
    """Gcd of the unknown-coefficients of all residual entries.

    Every entry is linear in the coefficient unknowns, so the gcd lives in
    the structure variables alone.
    """
    polys = []
    for r in residuals:
        for c in r.values():
            parts, rest = c.linear_parts(unknowns)
            polys.extend(p.num for p in parts.values())
            if rest:
                polys.append(rest.num)
    return Scalar.of(polynomial_gcd(polys))


def _window_gens(families, window: int) -> list:
    return [Generator(f, k) for f in families for k in range(-window, window + 1)]


def _linear_rows(residuals, unknowns: list) -> LinearSystem:
    system = LinearSystem(list(unknowns))
    names = set(unknowns)
    seen = set()
    for label, res in residuals:
        for c in res.values():
            parts, rest = c.linear_parts(names)
            if not parts:
                if rest:
                    system.add_row({}, -rest, label=label)
                continue
            key = _row_key(parts, rest)
            if key not in seen:
                seen.add(key)
                system.add_row(parts, -rest, label=label)
    return system


def _row_key(parts: dict, rest: Scalar) -> frozenset:
    lead = min(parts)
    inv = parts[lead].inverse()
    return frozenset([(u, c * inv) for u, c in parts.items()] + [("", rest * inv)])


def derive_two_odd_constraints(window: int, bminus=None) -> DerivedConstraintSet:
    """Staged derivation of the two-odd-family extension on ``|i|,|j| <= window``."""
    if window < 1:
        raise ValueError("window must be at least 1")
    out = DerivedConstraintSet(window)
    f1, f2, ap, am, bp, bm = Scalar.vars(" ".join(STRUCTURE_VARS))
    w = range(-window, window + 1)

    def brk(a_p, a_m, b_p, b_m, g1, g2):
        return ParametricBracket({"Gm": (a_m, b_m, g2), "Gp": (a_p, b_p, g1)}, ("Gm", "Gp"), window)

    # stage 1: H_0 acting on [G^-_i, G^+_j]
    br = brk(ap, am, bp, bm, f1, f2)
    unknowns = set(br.unknown_names())
    res = [br.residual(Generator("H", 0), Generator("Gm", i), Generator("Gp", j)) for i in w for j in w]
    g = _common_factor([r for r in res if r], unknowns)
    if g != f1 + f2:
        raise StageError(f"H_0 stage produced {g}")
    out.facts.append(Fact("f_1 + f_2 = 0", g, "Jacobi(H_0, G^-_i, G^+_j)"))
    out.facts.append(Fact("normalize f_1 = 1, f_2 = -1", f1 - 1, "rescale H"))

    # stage 2: L_0 acting on [G^-_i, G^+_j]
    br = brk(ap, am, bp, bm, 1, -1)
    res = [br.residual(Generator("L", 0), Generator("Gm", i), Generator("Gp", j)) for i in w for j in w]
    g = _common_factor([r for r in res if r], unknowns)
    if g != ap + am:
        raise StageError(f"L_0 stage produced {g}")
    out.facts.append(Fact("a^+ + a^- = 0", g, "Jacobi(L_0, G^-_i, G^+_j)"))
    out.facts.append(Fact("a^+ = a^- = 0", ap, "a^+ = a^- with the previous fact"))

    # stage 3: [G_k^-, [G_i^-, G_j^+]] + [G_i^-, [G_k^-, G_j^+]] = 0 at k = i,
    # and its mirror with G^+_j twice; each (i, j) gives a 2x2 block
    br = brk(0, 0, bp, bm, 1, -1)
    dets = []
    for i in w:
        for j in w:
            names = [coeff_var("a", i, j), coeff_var("b", i, j)]
            rows = []
            for trip in (
                (Generator("Gm", i), Generator("Gm", i), Generator("Gp", j)),
                (Generator("Gp", j), Generator("Gp", j), Generator("Gm", i)),
            ):
                r = br.residual(*trip)
                for c in (r or {}).values():
                    parts, _ = c.linear_parts(names)
                    rows.append([parts.get(n, ZERO_S) for n in names])
            rows = [r for r in rows if any(r)]
            if len(rows) >= 2:
                d = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
                if d:
                    dets.append(d.num)
    g = Scalar.of(polynomial_gcd(dets))
    if g != bm + bp - 1:
        raise StageError(f"determinant stage produced {g}")
    out.facts.append(Fact("b^+ + b^- = 1", g, "Jacobi(G^-_i, G^-_i, G^+_j) and Jacobi(G^+_j, G^+_j, G^-_i)"))

    # stage 4: everything linear in a[i,j], b[i,j]
    b = Scalar.var("b") if bminus is None else Scalar.of(bminus)
    out.structure = {"f_1": Scalar.of(1), "f_2": Scalar.of(-1), "a^+": ZERO_S, "a^-": ZERO_S,
                     "b^+": 1 - b, "b^-": b}
    br = brk(0, 0, 1 - b, b, 1, -1)
    unknown_list = br.unknown_names()
    gens = _window_gens(("L", "H", "Gm", "Gp"), window)
    residuals = []
    # the graded Jacobi sum is symmetric up to sign, so unordered triples suffice
    for trip in combinations_with_replacement(gens, 3):
        if sum(br.parity(g) for g in trip) < 2:
            continue
        r = br.residual(*trip)
        if r:
            residuals.append((trip, r))
    space = solve_linear(_linear_rows(residuals, unknown_list))
    out.space = space
    if not space.consistent or space.dimension != 1:
        raise StageError(f"expected a one-dimensional solution space, got {space.dimension}")
    values = space.parametrize([coeff_var("a", 0, 0)], ["d"])
    d = Scalar.var("d")
    a_form = _fit_ij(values, "a", window)
    b_form = _fit_ij(values, "b", window)
    if a_form != d:
        raise StageError(f"a[i,j] is not constant: {a_form}")
    out.facts.append(Fact("a_{ij} = d", Scalar.var("a_ij") - a_form, "Jacobi instances on the window"))
    out.facts.append(Fact("b_{ij} = d(-i+(i+j)b)", Scalar.var("b_ij") - b_form, "Jacobi instances on the window"))
    out.closed_forms = {"a_ij": a_form, "b_ij": b_form}
    return out


def _fit_ij(values: dict, kind: str, window: int):
    """Closed form in (i, j) of ``kind[i,j]`` from window values (degree <= 2 each)."""
    w = list(range(-window, window + 1))
    deg = min(2, len(w) - 1)
    per_i = []
    for i in w:
        pts = [(j, values[coeff_var(kind, i, j)]) for j in w]
        fit = interpolate_closed_form(pts, deg, "j")
        if fit is None:
            return None
        per_i.append((i, fit))
    return interpolate_closed_form(per_i, deg, "i")


def assemble_extension(dcs: DerivedConstraintSet, d=1, name: str = "tilde-L") -> AlgebraSpec:
    """Algebra built from derived facts with the overall scale ``d`` fixed."""
    s = dcs.structure
    i, j = Scalar.vars("i j")
    dd = {"d": Scalar.of(d)}
    a_form = dcs.closed_forms["a_ij"].substitute(dd)
    b_form = dcs.closed_forms["b_ij"].substitute(dd)
    rules = [
        BracketRule("L", "L", (Summand(i - j, "L"),)),
        BracketRule("L", "H", (Summand(-j, "H"),)),
        BracketRule("L", "Gm", (Summand(s["a^-"] - j + i * s["b^-"], "Gm"),)),
        BracketRule("L", "Gp", (Summand(s["a^+"] - j + i * s["b^+"], "Gp"),)),
        BracketRule("H", "Gm", (Summand(s["f_2"], "Gm"),)),
        BracketRule("H", "Gp", (Summand(s["f_1"], "Gp"),)),
        BracketRule("Gm", "Gp", tuple(Summand(c, t) for c, t in ((a_form, "L"), (b_form, "H")) if c)),
    ]
    used = set()
    for r in rules:
        for sm in r.summands:
            used |= sm.coefficient.variables()
    params = tuple(sorted(used - {"i", "j"}))
    fams = (
        GeneratorFamily("L"),
        GeneratorFamily("H"),
        GeneratorFamily("Gm", ODD),
        GeneratorFamily("Gp", ODD),
    )
    return AlgebraSpec(name, params, fams, tuple(rules))


def matches_tilde_l(dcs: DerivedConstraintSet) -> bool:
    return assemble_extension(dcs).same_structure(builtin_algebra("tilde-L"))


def check_single_odd_trivial(window: int, f="f") -> CheckReport:
    """One odd family with ``[H_n, G_i] = f G_{n+i}``: the H_0 instances force
    ``[G_i, G_j] = 0`` unless ``f = 0``."""
    if window < 1:
        raise ValueError("window must be at least 1")
    fs = Scalar.var(f) if isinstance(f, str) else Scalar.of(f)
    a, b = Scalar.vars("a b")
    br = ParametricBracket({"G": (a, b, fs)}, ("G", "G"), window, symmetric=True)
    unknowns = br.unknown_names()
    w = range(-window, window + 1)
    residuals = []
    for i in w:
        for j in w:
            if i > j:
                continue
            trip = (Generator("H", 0), Generator("G", i), Generator("G", j))
            r = br.residual(*trip)
            if r:
                residuals.append((trip, r))
    space = solve_linear(_linear_rows(residuals, unknowns))
    report = CheckReport("single-odd-trivial", window)
    report.details = {"dimension": space.dimension, "unknowns": len(unknowns)}
    for vec in space.homogeneous_basis:
        u = next(iter(vec))
        report.violations.append(Violation((u,), Scalar.of(1)))
    report.violations.sort(key=lambda v: str(v.witness))
    return report

