"""Weight modules over graded superalgebras, given by guarded action rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Mapping, NamedTuple

from ..algebra.core import EVEN, AlgebraSpec, CheckReport, Generator, Violation, format_combination
from ..errors import SpecError
from ..field import ONE_S, ZERO_S, Q, Scalar, to_rational
from ..parallel import map_ordered

I_VAR, J_VAR = Scalar.vars("i j")
COVERAGE_GRID = range(-6, 7)


@dataclass(frozen=True)
class GuardAtom:
    """``expr op value`` with ``expr`` affine in the index variables."""

    expr: Scalar
    op: str  # "=" or "!="
    value: int

    def __post_init__(self):
        if self.op not in ("=", "!="):
            raise SpecError(f"guard operator must be = or !=, got {self.op!r}")
        if not self.expr.is_polynomial() or self.expr.variables() - {"i", "j"}:
            raise SpecError(f"guard expression {self.expr} must be a polynomial in i, j")
        if self.expr.num.degree() > 1:
            raise SpecError(f"guard expression {self.expr} must be affine")

    def holds(self, i: int, j: int) -> bool:
        v = self.expr.substitute({"i": i, "j": j}).to_rational()
        return (v == self.value) == (self.op == "=")

    def negate(self) -> "GuardAtom":
        return GuardAtom(self.expr, "!=" if self.op == "=" else "=", self.value)

    def __str__(self) -> str:
        return f"{self.expr}{self.op}{self.value}"


@dataclass(frozen=True)
class Guard:
    """Conjunction of atoms; the empty conjunction is always true."""

    atoms: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "Guard":
        from ..dsl.parser import parse_guard

        return parse_guard(text)

    @classmethod
    def of(cls, *atoms) -> "Guard":
        return cls(tuple(sorted(atoms, key=str)))

    def holds(self, i: int, j: int) -> bool:
        return all(a.holds(i, j) for a in self.atoms)

    def is_true(self) -> bool:
        return not self.atoms

    def conjoin(self, other: "Guard") -> "Guard":
        return Guard.of(*set(self.atoms) | set(other.atoms))

    def __str__(self) -> str:
        return " and ".join(str(a) for a in self.atoms) if self.atoms else "true"


TRUE = Guard()


def atom(expr, op: str, value: int = 0) -> GuardAtom:
    return GuardAtom(Scalar.of(expr), op, value)


J_ZERO = Guard.of(atom(J_VAR, "="))
J_NONZERO = Guard.of(atom(J_VAR, "!="))
SUM_ZERO = Guard.of(atom(I_VAR + J_VAR, "="))
SUM_NONZERO = Guard.of(atom(I_VAR + J_VAR, "!="))


@dataclass(frozen=True)
class BasisFamily:
    name: str
    parity: int = EVEN
    support: Guard = TRUE  # predicate on the basis index, written in j

    def supports(self, k: int) -> bool:
        return self.support.holds(0, k)


@dataclass(frozen=True)
class ActionSummand:
    coefficient: Scalar
    target: str
    to_zero: bool = False  # target index 0 instead of i+j

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Scalar.of(self.coefficient))


@dataclass(frozen=True)
class ActionRule:
    generator: str
    basis: str
    summands: tuple = ()
    guard: Guard = TRUE


class BasisVector(NamedTuple):
    family: str
    index: int

    def __str__(self) -> str:
        return f"{self.family}({self.index})"


class ModuleVector:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {BasisVector(*v): Scalar.of(c) for v, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, family: str, index: int, coeff=1) -> "ModuleVector":
        return cls({BasisVector(family, index): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, ModuleVector) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        out = dict(self.terms)
        for v, c in other.terms.items():
            out[v] = out.get(v, ZERO_S) + c
        return ModuleVector(out)

    def __rmul__(self, s) -> "ModuleVector":
        s = Scalar.of(s)
        return ModuleVector({v: s * c for v, c in self.terms.items()})

    def __str__(self) -> str:
        return format_combination(self.terms)

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class ModuleSpec:
    name: str
    algebra: AlgebraSpec
    parameters: tuple
    basis: tuple
    rules: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for attr in ("parameters", "basis", "rules"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        fams = {}
        for bf in self.basis:
            if bf.name in fams:
                raise SpecError(f"duplicate basis family {bf.name}")
            fams[bf.name] = bf
        allowed = set(self.parameters) | {"i", "j"}
        by_pair: dict = {}
        for r in self.rules:
            gf = self.algebra.family(r.generator)
            if r.basis not in fams:
                raise SpecError(f"action on undeclared basis family {r.basis}")
            if gf.central and r.summands:
                raise SpecError(f"central {r.generator} must act as zero")
            for s in r.summands:
                if s.target not in fams:
                    raise SpecError(f"action targets undeclared basis family {s.target}")
                extra = s.coefficient.variables() - allowed
                if extra:
                    raise SpecError(f"undeclared variables {sorted(extra)} in action of {r.generator} on {r.basis}")
                if (fams[r.basis].parity + gf.parity) % 2 != fams[s.target].parity:
                    raise SpecError(f"action of {r.generator} on {r.basis} breaks parity")
            by_pair.setdefault((r.generator, r.basis), []).append(r)
        for (g, bname), rules in by_pair.items():
            for i in COVERAGE_GRID:
                for j in COVERAGE_GRID:
                    hits = sum(r.guard.holds(i, j) for r in rules)
                    if hits != 1:
                        what = "uncovered" if hits == 0 else "overlapping"
                        raise SpecError(f"guards for {g} on {bname} are {what} at i={i}, j={j}")
        object.__setattr__(self, "_families", fams)
        object.__setattr__(self, "_by_pair", by_pair)

    def __getstate__(self):
        return {k: getattr(self, k) for k in ("name", "algebra", "parameters", "basis", "rules")}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)
        object.__setattr__(self, "_cache", {})
        self.__post_init__()

    def family(self, name: str) -> BasisFamily:
        try:
            return self._families[name]
        except KeyError:
            raise SpecError(f"{self.name} has no basis family {name}") from None

    def family_position(self, name: str) -> int:
        return next(k for k, f in enumerate(self.basis) if f.name == name)

    def vector_key(self, v) -> tuple:
        return (self.family_position(v[0]), v[1])

    def basis_vectors(self, window: int) -> list:
        return [
            BasisVector(f.name, k)
            for f in self.basis
            for k in range(-window, window + 1)
            if f.supports(k)
        ]

    def rules_for(self, generator: str, basis: str) -> list:
        return self._by_pair.get((generator, basis), [])

    def act_basis(self, g, v) -> dict:
        """Raw ``{BasisVector: Scalar}`` for a generator acting on a basis vector."""
        key = (g, v)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        g, v = Generator(*g), BasisVector(*v)
        out: dict = {}
        fam = self.family(v.family)
        if fam.supports(v.index) and not self.algebra.family(g.family).central:
            rules = [r for r in self.rules_for(g.family, v.family) if r.guard.holds(g.index, v.index)]
            if len(rules) > 1:
                raise SpecError(f"overlapping guards for {g} on {v}")
            vals = {"i": Q(g.index), "j": Q(v.index)}
            for r in rules:
                for s in r.summands:
                    t = BasisVector(s.target, 0 if s.to_zero else g.index + v.index)
                    if not self.family(t.family).supports(t.index):
                        continue
                    c = s.coefficient.substitute(vals)
                    if c:
                        c = out[t] + c if t in out else c
                        if c:
                            out[t] = c
                        else:
                            del out[t]
        self._cache[key] = out
        return out


def act(mod: ModuleSpec, g, v: ModuleVector) -> ModuleVector:
    """Linear extension of the guarded rules; results are projected onto the
    supported basis."""
    out: dict = {}
    for b, c in v.terms.items():
        for t, k in mod.act_basis(g, b).items():
            out[t] = out.get(t, ZERO_S) + c * k
    return ModuleVector(out)


def _act_combination(mod: ModuleSpec, g, combo: Mapping) -> dict:
    out: dict = {}
    for b, c in combo.items():
        for t, k in mod.act_basis(g, b).items():
            v = c * k
            prev = out.get(t)
            if prev is not None:
                v = prev + v
                if not v:
                    del out[t]
                    continue
            out[t] = v
    return out


def axiom_defect(mod: ModuleSpec, g, h, v) -> dict:
    """``[g,h].v - (g.(h.v) - (-1)^{|g||h|} h.(g.v))`` as a raw combination."""
    alg = mod.algebra
    start = {BasisVector(*v): ONE_S}
    lhs = {}
    for t, c in alg.bracket_generators(g, h).items():
        for u, k in mod.act_basis(t, v).items():
            lhs[u] = lhs.get(u, ZERO_S) + c * k
    gh = _act_combination(mod, g, _act_combination(mod, h, start))
    hg = _act_combination(mod, h, _act_combination(mod, g, start))
    sign = -1 if alg.parity(g) * alg.parity(h) else 1
    out = dict(lhs)
    for u, c in gh.items():
        out[u] = out.get(u, ZERO_S) - c
    for u, c in hg.items():
        out[u] = out.get(u, ZERO_S) + c * sign
    return {u: c for u, c in out.items() if c}


def _axiom_row(mod: ModuleSpec, gens: list, vecs: list, g) -> list:
    out = []
    for h in gens:
        for v in vecs:
            d = axiom_defect(mod, g, h, v)
            if d:
                out.append(Violation((g, h, v), ModuleVector(d)))
    return out


def check_module_axioms(mod: ModuleSpec, window: int) -> CheckReport:
    """Module axiom on every generator pair and basis vector with indices in
    the window; central elements act by zero."""
    if window < 2:
        raise ValueError("window must be at least 2")
    gens = mod.algebra.window_generators(window, include_central=False)
    vecs = mod.basis_vectors(window)
    rows = map_ordered(partial(_axiom_row, mod, gens, vecs), gens)
    report = CheckReport("module-axioms", window, [v for row in rows for v in row])
    alg = mod.algebra
    report.violations.sort(
        key=lambda v: (alg.generator_key(v.witness[0]), alg.generator_key(v.witness[1]), mod.vector_key(v.witness[2]))
    )
    return report


def specialize_module(mod: ModuleSpec, bindings: Mapping) -> ModuleSpec:
    bindings = dict(bindings or {})
    unknown = set(bindings) - set(mod.parameters)
    if unknown:
        raise SpecError(f"{mod.name} has no parameters {sorted(unknown)}")
    if not bindings:
        return mod
    values = {k: v if isinstance(v, Scalar) else to_rational(v) for k, v in bindings.items()}
    rules = tuple(
        ActionRule(
            r.generator,
            r.basis,
            tuple(ActionSummand(s.coefficient.substitute(values), s.target, s.to_zero) for s in r.summands),
            r.guard,
        )
        for r in mod.rules
    )
    params = tuple(p for p in mod.parameters if p not in bindings)
    return ModuleSpec(mod.name, mod.algebra, params, mod.basis, rules)


@dataclass(frozen=True)
class JointWeight:
    l0: Scalar
    h0: Scalar
    parity: int

    def __str__(self) -> str:
        return f"({self.l0},{self.h0},{self.parity})"


def joint_weight(mod: ModuleSpec, v) -> JointWeight:
    """Eigenvalues of L_0 and H_0 on a basis vector (0 if the family is absent)."""
    v = BasisVector(*v)
    vals = []
    for fam in ("L", "H"):
        try:
            mod.algebra.family(fam)
        except SpecError:
            vals.append(ZERO_S)
            continue
        image = mod.act_basis(Generator(fam, 0), v)
        extra = set(image) - {v}
        if extra:
            raise SpecError(f"{fam}(0) is not diagonal on {v} in {mod.name}")
        vals.append(image.get(v, ZERO_S))
    return JointWeight(vals[0], vals[1], mod.family(v.family).parity)


def structure_key(mod: ModuleSpec) -> tuple:
    """Name-free canonical description used for structural equality."""
    rules = []
    for r in mod.rules:
        merged: dict = {}
        for s in r.summands:
            key = (s.target, s.to_zero)
            merged[key] = merged.get(key, ZERO_S) + s.coefficient
        items = tuple(sorted((t, z, str(c)) for (t, z), c in merged.items() if c))
        if items:
            rules.append((r.generator, r.basis, str(r.guard), items))
    return (
        tuple(sorted(mod.parameters)),
        tuple((b.name, b.parity, str(b.support)) for b in mod.basis),
        tuple(sorted(rules)),
    )


def same_module_structure(m1: ModuleSpec, m2: ModuleSpec) -> bool:
    return m1.algebra.same_structure(m2.algebra) and structure_key(m1) == structure_key(m2)
