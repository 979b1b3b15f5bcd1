"""The b' branch equation, odd-action coefficient shapes and their pairing.

Both parts of the module are A_{a,b}-type:
``L_i x_j = (a-j+ib) x_{i+j}`` and ``L_i y_j = (a-j+ib') y_{i+j}``, with
``G^±_i x_j = a^±_{ij} y_{i+j}`` and ``G^±_i y_j = b^±_{ij} x_{i+j}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy

from ..algebra.builtins import builtin_algebra
from ..errors import SpecError
from ..field import ONE_S, ZERO_S, LinearSystem, Scalar, interpolate_closed_form, parse_scalar, solve_linear
from ..parallel import map_ordered
from ..modules.builtins import X, Y
from ..modules.spec import ActionRule, ActionSummand, ModuleSpec, specialize_module

i_, j_, a_ = Scalar.vars("i j a")
HALF = Scalar.of("1/2")


# -- branch equation ------------------------------------------------------


def branch_polynomial(b, bprime) -> Scalar:
    """``4 j^2 t (t + 2b' + 1)`` with ``t = b'^2 - (b+1/2)^2``."""
    b, bprime = Scalar.of(b), Scalar.of(bprime)
    t = bprime**2 - (b + HALF) ** 2
    return 4 * j_**2 * t * (t + 2 * bprime + 1)


@dataclass
class BranchSet:
    b: Scalar
    roots: list
    t_values: list
    multiplicities: list

    def to_json(self) -> dict:
        return {
            "b": str(self.b),
            "roots": [str(r) for r in self.roots],
            "t": [str(t) for t in self.t_values],
            "multiplicities": self.multiplicities,
        }


def _sympy_roots(b: Scalar) -> dict:
    bp = sympy.Symbol("bprime")
    bs = sympy.sympify(str(b), locals={v: sympy.Symbol(v) for v in b.variables()})
    t = bp**2 - (bs + sympy.Rational(1, 2)) ** 2
    poly = sympy.Poly(sympy.expand(t * (t + 2 * bp + 1)), bp)
    out = {}
    for r, m in sympy.roots(poly).items():
        out[parse_scalar(str(sympy.expand(r)).replace("**", "^"))] = m
    return out


def branch_bprime(b) -> BranchSet:
    """Values of b' allowed by the branch equation, with multiplicities.

    The roots are read off the factorization
    ``t(t+2b'+1) = (b'-b-1/2)(b'+b+1/2)(b'-b+1/2)(b'+b+3/2)`` and
    cross-checked against sympy's root finder on the expanded quartic.
    """
    b = Scalar.of(b)
    listed = [b + HALF, -(b + HALF), b - HALF, -b - 3 * HALF]
    roots, mult = [], []
    for r in listed:
        if r in roots:
            mult[roots.index(r)] += 1
        else:
            roots.append(r)
            mult.append(1)
    found = _sympy_roots(b)
    if found != dict(zip(roots, mult)):
        raise ArithmeticError(f"root cross-check failed for b={b}: {found}")
    for r in roots:
        if branch_polynomial(b, r):
            raise ArithmeticError(f"b'={r} does not annihilate the branch polynomial")
    t_values = [r**2 - (b + HALF) ** 2 for r in roots]
    return BranchSet(b, roots, t_values, mult)


# -- coefficient shapes ---------------------------------------------------


def _recurrence_rows(b: Scalar, bprime: Scalar, window: int, a=a_) -> list:
    """Rows ``(i/2-j) u_{i+j,k} - (a-(k+j)+ib') u_{j,k} + (a-k+ib) u_{j,i+k}``
    for all (i, j, k) whose unknowns stay inside the window."""
    rows = []
    for i in range(-2 * window, 2 * window + 1):
        for j in range(-window, window + 1):
            for k in range(-window, window + 1):
                if abs(i + j) > window or abs(i + k) > window:
                    continue
                row: dict = {}
                for u, c in (
                    ((i + j, k), Scalar.of(i) / 2 - j),
                    ((j, k), -(a - (k + j) + i * bprime)),
                    ((j, i + k), a - k + i * b),
                ):
                    row[u] = row.get(u, ZERO_S) + c
                row = {u: c for u, c in row.items() if c}
                if row:
                    rows.append(((i, j, k), row))
    return rows


def recurrence_residual(shape: Scalar, b, bprime, window: int, a=a_) -> list:
    """Window triples where the closed form ``shape(i, j)`` violates the recurrence."""
    b, bprime = Scalar.of(b), Scalar.of(bprime)
    bad = []
    for triple, row in _recurrence_rows(b, bprime, window, a):
        total = ZERO_S
        for (p, q), c in row.items():
            total = total + c * shape.substitute({"i": p, "j": q})
        if total:
            bad.append(triple)
    return bad


DENOMINATORS = (
    ("constant", ONE_S),
    ("(a-j)^-1", a_ - j_),
    ("(a-i-j)^-1", a_ - i_ - j_),
)


@dataclass
class ShapeSolution:
    b: Scalar
    bprime: Scalar
    side: str  # "a" for G.x coefficients, "b" for G.y coefficients
    kind: str  # "constant", "(a-j)^-1", "(a-i-j)^-1" or "polynomial"
    shape: Scalar  # closed form in i, j, a with the scale set to 1
    scale: str  # name of the free scale constant
    condition: str  # "none" or "a not in Z"
    dimension: int

    def to_json(self) -> dict:
        return {
            "b": str(self.b),
            "bprime": str(self.bprime),
            "side": self.side,
            "kind": self.kind,
            "shape": str(self.shape),
            "scale": self.scale,
            "condition": self.condition,
            "dimension": self.dimension,
        }


def _fit_bivariate(values: dict, window: int):
    w = list(range(-window, window + 1))
    deg = min(2, len(w) - 1)
    per_i = []
    for i in w:
        fit = interpolate_closed_form([(j, values[(i, j)]) for j in w], deg, "j")
        if fit is None:
            return None
        per_i.append((i, fit))
    return interpolate_closed_form(per_i, deg, "i")


def _normalize(p: Scalar) -> Scalar:
    """Scale so the coefficient of j is -1, or the constant term is 1."""
    at0 = p.substitute({"i": 0, "j": 0})
    cj = p.substitute({"i": 0, "j": 1}) - at0
    return p / (-cj if cj else at0)


_SCALE_NAMES = {"constant": "d_1", "(a-j)^-1": "d_2", "(a-i-j)^-1": "d_3", "polynomial": "d'"}


def solve_coefficient_shapes(b, bprime, window: int = 3, side: str = "a") -> list:
    """Solve the odd-action recurrence on ``|i|, |k| <= window`` over the
    field of rational functions in ``a`` and fit the closed form.

    Side ``"a"`` solves for ``G.x`` coefficients; side ``"b"`` for ``G.y``,
    which obeys the same recurrence with b and b' exchanged.  Returns an
    empty list when every solution vanishes at the designated coordinate
    ``(1, 0)``.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    if side not in ("a", "b"):
        raise ValueError("side must be 'a' or 'b'")
    b, bprime = Scalar.of(b), Scalar.of(bprime)
    lo, hi = (b, bprime) if side == "a" else (bprime, b)
    unknowns = [(p, q) for p in range(-window, window + 1) for q in range(-window, window + 1)]
    system = LinearSystem(unknowns)
    for _, row in _recurrence_rows(lo, hi, window):
        system.add_row(row, 0)
    space = solve_linear(system)
    if space.forced_zero((1, 0)):
        return []
    vec = next(v for v in space.homogeneous_basis if v.get((1, 0), ZERO_S))
    values = {u: vec.get(u, ZERO_S) for u in unknowns}
    for kind, den in DENOMINATORS:
        scaled = {(p, q): v * den.substitute({"i": p, "j": q}) for (p, q), v in values.items()}
        fit = _fit_bivariate(scaled, window)
        if fit is None:
            continue
        fit_vars = fit.variables() & {"i", "j"}
        if kind == "constant" and fit_vars:
            kind = "polynomial"
        elif kind != "constant" and fit_vars:
            continue
        shape = _normalize(fit) / den
        cond = "none" if den == ONE_S else "a not in Z"
        sol = ShapeSolution(b, bprime, side, kind, shape, _SCALE_NAMES[kind], cond, space.dimension)
        if recurrence_residual(shape, lo, hi, window):
            raise ArithmeticError(f"fitted shape {shape} fails the recurrence")
        return [sol]
    raise ArithmeticError(f"no closed form fits the {side}-side solution at b={b}, b'={bprime}")


_BRANCH_RELS = {
    "minus": (lambda b: -(b + HALF), "(a-j)^-1"),
    "shift": (lambda b: -b - 3 * HALF, "(a-i-j)^-1"),
}


def _has_nonzero_solution(rel: str, window: int, a, b) -> bool:
    bprime = _BRANCH_RELS[rel][0](b)
    unknowns = [(p, q) for p in range(-window, window + 1) for q in range(-window, window + 1)]
    system = LinearSystem(unknowns)
    for _, row in _recurrence_rows(b, bprime, window, a):
        system.add_row(row, 0)
    return not solve_linear(system).forced_zero((1, 0))


@dataclass
class SideConditionReport:
    """Which sampled b admit a nonvanishing solution on a branch.

    ``forced`` lists the b whose solution has the branch's own inverse shape
    or the constant shape of the b' = b+1/2 branch it may coincide with;
    ``other`` lists remaining hits together with their shape kind.
    """

    rel: str
    window: int
    candidates: list
    hits: list  # ShapeSolution per hit

    @property
    def forced(self) -> list:
        own = _BRANCH_RELS[self.rel][1]
        return [s.b for s in self.hits if s.kind in (own, "constant")]

    @property
    def other(self) -> list:
        own = _BRANCH_RELS[self.rel][1]
        return [(s.b, s.kind) for s in self.hits if s.kind not in (own, "constant")]

    def to_json(self) -> dict:
        return {
            "branch": self.rel,
            "window": self.window,
            "candidates": [str(c) for c in self.candidates],
            "forced": [str(b) for b in self.forced],
            "other": [{"b": str(b), "kind": k} for b, k in self.other],
            "shapes": [s.to_json() for s in self.hits],
        }


def scan_side_conditions(rel: str, candidates, window: int = 3, a="1/7") -> SideConditionReport:
    """Probe candidate b on the branch ``b' = -(b+1/2)`` (``rel="minus"``)
    or ``b' = -b-3/2`` (``rel="shift"``).

    Existence is probed at a fixed non-integer sample ``a`` so each solve is
    over Q; every hit is then re-solved with symbolic ``a`` to fit its shape.
    """
    if rel not in _BRANCH_RELS:
        raise ValueError(f"rel must be one of {sorted(_BRANCH_RELS)}")
    a = Scalar.of(a)
    cands = [Scalar.of(c) for c in candidates]
    hits = map_ordered(lambda b: _has_nonzero_solution(rel, window, a, b), cands)
    shapes = []
    for b, ok in zip(cands, hits):
        if ok:
            found = solve_coefficient_shapes(b, _BRANCH_RELS[rel][0](b), window)
            if found:
                shapes.append(found[0])
    return SideConditionReport(rel, window, cands, shapes)


# -- pairing --------------------------------------------------------------


@dataclass
class PairedFamily:
    """One normalized family of odd actions.

    ``coefficients`` maps ``"a+"``, ``"a-"``, ``"b+"``, ``"b-"`` to closed
    forms in (i, j, a, b); ``offset`` is ``b' - b``.
    """

    label: str
    offset: Scalar
    coefficients: dict
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "bprime-b": str(self.offset),
            "coefficients": {k: str(v) for k, v in sorted(self.coefficients.items())},
        }


def _partner(shape: Scalar, rhs_shift: int) -> Scalar:
    """Solve the diagonal pairing ``u_{i,k} w_{i,k+i} = 2(a-k+2ib)`` for the
    partner in terms of its own indices (i, j)."""
    b = Scalar.var("b")
    if rhs_shift == 0:
        # partner is w_{i,j} with j = k+i, so k = j-i and u is read at (i, j-i)
        u = shape.substitute({"j": j_ - i_})
        return 2 * (a_ - (j_ - i_) + 2 * i_ * b) / u
    # partner is u_{i,k} where w_{i,k+i} = shape at (i, k+i)
    w = shape.substitute({"j": j_ + i_})
    return 2 * (a_ - j_ + 2 * i_ * b) / w


def _proportional(x: Scalar, y: Scalar) -> bool:
    """True when ``x / y`` is free of the index variables i and j."""
    if not x or not y:
        return False
    return not ((x / y).variables() & {"i", "j"})


def pair_and_normalize(a_shape: ShapeSolution, b_shape: ShapeSolution, window: int = 3) -> list:
    """Impose the diagonal pairing and sign exclusivity, then rescale.

    Exactly one sign of ``a^±`` is nonzero.  When the a-side is the constant
    shape the partner ``b^∓`` is forced by the pairing; when the b-side is
    constant the roles swap.  The partner keeps b symbolic and is checked,
    at the shapes' own b, against both its recurrence and the independently
    solved shape of that side.
    """
    if not a_shape or not b_shape:
        raise SpecError("both sides need a nonvanishing shape")
    if (a_shape.b, a_shape.bprime) != (b_shape.b, b_shape.bprime):
        raise SpecError("shapes come from different branches")
    b0, bp0 = a_shape.b, a_shape.bprime
    offset = bp0 - b0
    if offset.variables():
        raise SpecError("pairing expects rational b and b'")
    if a_shape.kind == "constant":
        partner = _partner(a_shape.shape, 0)
        at_b0 = partner.substitute({"b": b0})
        bad = recurrence_residual(at_b0, bp0, b0, window)
        other, signs = b_shape, (("+", "-", "RA"), ("-", "+", "RB"))
        lead, follow = "a", "b"
    elif b_shape.kind == "constant":
        partner = _partner(b_shape.shape, 1)
        at_b0 = partner.substitute({"b": b0})
        bad = recurrence_residual(at_b0, b0, bp0, window)
        other, signs = a_shape, (("+", "-", "RAp"), ("-", "+", "RBp"))
        lead, follow = "b", "a"
    else:
        raise SpecError("pairing needs a constant shape on one side")
    if bad:
        raise SpecError(f"pairing inconsistent: partner fails the recurrence at {bad[0]}")
    if not _proportional(at_b0, other.shape):
        raise SpecError(f"pairing inconsistent: partner {at_b0} is not a multiple of {other.shape}")
    out = []
    for s, o, label in signs:
        coeffs = {f"{lead}{s}": ONE_S, f"{follow}{o}": partner, f"{lead}{o}": ZERO_S, f"{follow}{s}": ZERO_S}
        out.append(PairedFamily(label, offset, coeffs, {"b": str(b0), "window": window}))
    return out


GENERIC_SAMPLES = ("1/4", "2/7", "-3/5")


def generic_families(window: int = 3, samples=GENERIC_SAMPLES) -> list:
    """The four families for symbolic b from the b' = b+1/2 and b' = b-1/2
    branches; every sample b must produce the same families."""
    result = None
    for b in samples:
        b = Scalar.of(b)
        fams = []
        for bprime in (b + HALF, b - HALF):
            a_side = solve_coefficient_shapes(b, bprime, window, "a")
            b_side = solve_coefficient_shapes(b, bprime, window, "b")
            if not a_side or not b_side:
                raise ArithmeticError(f"branch b'={bprime} has a vanishing side at b={b}")
            fams.extend(pair_and_normalize(a_side[0], b_side[0], window))
        if result is None:
            result = fams
        elif [f.to_json() for f in fams] != [f.to_json() for f in result]:
            raise ArithmeticError(f"families at b={b} differ from those at b={samples[0]}")
    for f in result:
        f.checks = {"samples": [str(x) for x in samples], "window": window}
    return result


def assemble_family(fam: PairedFamily, window: int = 3, name: str | None = None) -> ModuleSpec:
    """Module from a paired family with constant H-eigenvalues f, f' fixed
    by the module axioms on the window."""
    b = Scalar.var("b")
    bprime = b + fam.offset
    f, fp = Scalar.vars("f fprime")
    ramond = builtin_algebra("ramond-n2")
    rules = [
        ActionRule("L", "x", (ActionSummand(a_ - j_ + i_ * b, "x"),)),
        ActionRule("L", "y", (ActionSummand(a_ - j_ + i_ * bprime, "y"),)),
        ActionRule("H", "x", (ActionSummand(f, "x"),)),
        ActionRule("H", "y", (ActionSummand(fp, "y"),)),
    ]
    gen_of = {"+": "Gp", "-": "Gm"}
    for key, coeff in sorted(fam.coefficients.items()):
        if not coeff:
            continue
        src, tgt = ("x", "y") if key[0] == "a" else ("y", "x")
        rules.append(ActionRule(gen_of[key[1]], src, (ActionSummand(coeff, tgt),)))
    trial = ModuleSpec(name or fam.label, ramond, ("a", "b", "f", "fprime"), (X, Y), tuple(rules))
    f_val, fp_val = _solve_eigenvalues(trial, window)
    fixed = specialize_module(trial, {"f": f_val, "fprime": fp_val})
    return ModuleSpec(
        name or f"{fam.label}_ab", ramond, ("a", "b"), fixed.basis, fixed.rules
    )


def _solve_eigenvalues(mod: ModuleSpec, window: int) -> tuple:
    from ..modules.spec import axiom_defect

    unknowns = ["f", "fprime"]
    system = LinearSystem(unknowns)
    gens = mod.algebra.window_generators(window, include_central=False)
    vecs = mod.basis_vectors(min(window, 2))
    for g in gens:
        if g.family not in ("H", "Gp", "Gm"):
            continue
        for h in gens:
            for v in vecs:
                for c in axiom_defect(mod, g, h, v).values():
                    parts, rest = c.linear_parts(unknowns)
                    system.add_row(parts, -rest)
    space = solve_linear(system)
    if not space.consistent or space.dimension:
        raise SpecError(f"H eigenvalues of {mod.name} are not determined (dimension {space.dimension})")
    return space.particular["f"], space.particular["fprime"]


__all__ = [
    "BranchSet",
    "SideConditionReport",
    "PairedFamily",
    "ShapeSolution",
    "assemble_family",
    "branch_bprime",
    "branch_polynomial",
    "generic_families",
    "pair_and_normalize",
    "recurrence_residual",
    "scan_side_conditions",
    "solve_coefficient_shapes",
]
