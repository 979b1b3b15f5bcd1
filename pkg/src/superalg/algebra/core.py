"""Graded Lie superalgebras given by guarded structure-constant rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Mapping, NamedTuple

from ..errors import SpecError
from ..field import ZERO_S, Q, Scalar, format_scalar, to_rational
from ..parallel import map_ordered

EVEN, ODD = 0, 1
INDEX_VARS = ("i", "j")


@dataclass(frozen=True)
class GeneratorFamily:
    name: str
    parity: int = EVEN
    central: bool = False

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise SpecError(f"parity of {self.name} must be 0 or 1")
        if self.central and self.parity != EVEN:
            raise SpecError(f"central family {self.name} must be even")


class Generator(NamedTuple):
    family: str
    index: int

    def __str__(self) -> str:
        return f"{self.family}({self.index})"


@dataclass(frozen=True)
class Summand:
    """``coefficient(i, j) * target_{i+j}``; with ``delta`` the term carries
    a Kronecker factor ``[i+j = 0]`` and targets index 0."""

    coefficient: Scalar
    target: str
    delta: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Scalar.of(self.coefficient))


@dataclass(frozen=True)
class BracketRule:
    left: str
    right: str
    summands: tuple = ()


class Element:
    """Finite linear combination of generators with Scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {Generator(*g): Scalar.of(c) for g, c in (terms or {}).items() if c}

    @classmethod
    def gen(cls, family: str, index: int = 0, coeff=1) -> "Element":
        return cls({Generator(family, index): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, ZERO_S) + c
        return Element(out)

    def __neg__(self) -> "Element":
        return Element({g: -c for g, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __rmul__(self, scalar) -> "Element":
        s = Scalar.of(scalar)
        return Element({g: s * c for g, c in self.terms.items()})

    __mul__ = __rmul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute(self, bindings) -> "Element":
        return Element({g: c.substitute(bindings) for g, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"Element({self})"

    def __str__(self) -> str:
        return format_combination(self.terms)


def format_combination(terms: Mapping) -> str:
    if not terms:
        return "0"
    parts = []
    for g in sorted(terms, key=lambda g: (g[0], g[1])):
        c = terms[g]
        label = f"{g[0]}({g[1]})"
        if c == 1:
            parts.append(label)
        elif c == -1:
            parts.append(f"-{label}")
        else:
            cs = format_scalar(c)
            if not _atomic(cs):
                cs = f"({cs})"
            parts.append(f"{cs}*{label}")
    return " + ".join(parts).replace("+ -", "- ")


def _atomic(text: str) -> bool:
    body = text[1:] if text.startswith("-") else text
    return not any(ch in body for ch in "+-/")


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    name: str
    parameters: tuple
    families: tuple
    rules: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "rules", tuple(self.rules))
        fams = {}
        for f in self.families:
            if f.name in fams:
                raise SpecError(f"duplicate family {f.name}")
            fams[f.name] = f
        allowed = set(self.parameters) | set(INDEX_VARS)
        rmap = {}
        for r in self.rules:
            for name in (r.left, r.right):
                if name not in fams:
                    raise SpecError(f"rule references undeclared family {name}")
            if fams[r.left].central or fams[r.right].central:
                if r.summands:
                    raise SpecError(f"central family in nonzero rule [{r.left},{r.right}]")
            key = (r.left, r.right)
            if key in rmap or (r.right, r.left) in rmap:
                raise SpecError(f"duplicate rule for pair {r.left},{r.right}")
            rmap[key] = r
            for s in r.summands:
                if s.target not in fams:
                    raise SpecError(f"rule [{r.left},{r.right}] targets undeclared family {s.target}")
                if fams[s.target].central and not s.delta:
                    raise SpecError(f"central target {s.target} requires a delta guard")
                extra = s.coefficient.variables() - allowed
                if extra:
                    raise SpecError(f"undeclared variables {sorted(extra)} in [{r.left},{r.right}]")
                parity = (fams[r.left].parity + fams[r.right].parity) % 2
                if fams[s.target].parity != parity:
                    raise SpecError(f"rule [{r.left},{r.right}] breaks parity")
        object.__setattr__(self, "_families", fams)
        object.__setattr__(self, "_rules", rmap)

    def __getstate__(self):
        state = {k: getattr(self, k) for k in ("name", "parameters", "families", "rules")}
        return state

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)
        object.__setattr__(self, "_cache", {})
        self.__post_init__()

    # -- lookups --------------------------------------------------------
    def family(self, name: str) -> GeneratorFamily:
        try:
            return self._families[name]
        except KeyError:
            raise SpecError(f"undeclared family {name} in {self.name}") from None

    def parity(self, g) -> int:
        return self.family(g[0]).parity

    def rule(self, left: str, right: str):
        return self._rules.get((left, right))

    def family_position(self, name: str) -> int:
        return next(k for k, f in enumerate(self.families) if f.name == name)

    def generator_key(self, g) -> tuple:
        return (self.family_position(g[0]), g[1])

    def window_generators(self, window: int, include_central: bool = True) -> list:
        gens = []
        for f in self.families:
            if f.central:
                if include_central:
                    gens.append(Generator(f.name, 0))
            else:
                gens.extend(Generator(f.name, k) for k in range(-window, window + 1))
        return gens

    # -- brackets -------------------------------------------------------
    def bracket_generators(self, g, h) -> dict:
        """Raw ``{Generator: Scalar}`` for the bracket of two generators."""
        key = (g, h)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        fg, fh = self.family(g[0]), self.family(h[0])
        if fg.central or fh.central:
            out = {}
        elif (g[0], h[0]) in self._rules:
            out = _evaluate(self._rules[(g[0], h[0])], g[1], h[1], self._families)
        elif (h[0], g[0]) in self._rules:
            raw = _evaluate(self._rules[(h[0], g[0])], h[1], g[1], self._families)
            sign = 1 if fg.parity * fh.parity else -1
            out = {t: c * sign for t, c in raw.items()}
        else:
            out = {}
        self._cache[key] = out
        return out

    def structure_key(self) -> tuple:
        """Canonical, name-free description used for structural equality."""
        rules = []
        for r in self.rules:
            merged = _merge_summands(r.summands)
            if merged:
                rules.append((r.left, r.right, merged))
        return (
            tuple(sorted(self.parameters)),
            self.families,
            tuple(sorted(rules, key=lambda t: (t[0], t[1]))),
        )

    def same_structure(self, other: "AlgebraSpec") -> bool:
        return self.structure_key() == other.structure_key()

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return self.name == other.name and self.same_structure(other)

    def __hash__(self):
        return hash((self.name, self.structure_key()))


def _merge_summands(summands) -> tuple:
    acc: dict = {}
    for s in summands:
        key = (s.target, s.delta)
        acc[key] = acc.get(key, ZERO_S) + s.coefficient
    return tuple(sorted(((t, d, str(c)) for (t, d), c in acc.items() if c)))


def _evaluate(rule: BracketRule, i: int, j: int, families) -> dict:
    out: dict = {}
    vals = {"i": Q(i), "j": Q(j)}
    for s in rule.summands:
        if s.delta and i + j != 0:
            continue
        c = s.coefficient.substitute(vals)
        if not c:
            continue
        t = Generator(s.target, 0 if families[s.target].central else i + j)
        prev = out.get(t)
        c = c if prev is None else prev + c
        if c:
            out[t] = c
        else:
            del out[t]
    return out


def bracket(alg: AlgebraSpec, x: Element, y: Element) -> Element:
    """Bilinear extension of the generator rules."""
    out: dict = {}
    for g, a in x.terms.items():
        for h, b in y.terms.items():
            ab = a * b
            for t, c in alg.bracket_generators(g, h).items():
                out[t] = out.get(t, ZERO_S) + ab * c
    return Element(out)


# -- checks -------------------------------------------------------------


@dataclass
class Violation:
    witness: tuple
    residual: object

    def to_json(self) -> dict:
        return {"witness": [str(w) for w in self.witness], "residual": str(self.residual)}


@dataclass
class CheckReport:
    check: str
    window: int
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "fail" if self.violations else "pass"

    @property
    def passed(self) -> bool:
        return not self.violations

    def witnesses(self) -> list:
        return [v.witness for v in self.violations]


def _accumulate(acc: dict, terms: Mapping, factor) -> None:
    for t, c in terms.items():
        v = c * factor
        prev = acc.get(t)
        if prev is None:
            acc[t] = v
        else:
            v = prev + v
            if v:
                acc[t] = v
            else:
                del acc[t]


def nested_bracket(bracket_gen, x, inner: Mapping, sign: int, acc: dict) -> None:
    """acc += sign * [x, inner] for a raw combination ``inner``."""
    for w, c in inner.items():
        terms = bracket_gen(x, w)
        if terms:
            _accumulate(acc, terms, c * sign if sign != 1 else c)


def jacobi_residual(bracket_gen, parity, x, y, z) -> dict:
    """Graded Jacobi sum for generators, given a generator-bracket callable."""
    px, py, pz = parity(x), parity(y), parity(z)
    acc: dict = {}
    nested_bracket(bracket_gen, x, bracket_gen(y, z), -1 if px * pz else 1, acc)
    nested_bracket(bracket_gen, y, bracket_gen(z, x), -1 if py * px else 1, acc)
    nested_bracket(bracket_gen, z, bracket_gen(x, y), -1 if pz * py else 1, acc)
    return acc


def check_antisymmetry(alg: AlgebraSpec, window: int) -> CheckReport:
    if window < 1:
        raise ValueError("window must be at least 1")
    gens = alg.window_generators(window)
    report = CheckReport("antisymmetry", window)
    for x in gens:
        for y in gens:
            acc: dict = {}
            _accumulate(acc, alg.bracket_generators(x, y), 1)
            sign = -1 if alg.parity(x) * alg.parity(y) else 1
            _accumulate(acc, alg.bracket_generators(y, x), sign)
            if acc:
                report.violations.append(Violation((x, y), Element(acc)))
    report.violations.sort(key=lambda v: tuple(alg.generator_key(g) for g in v.witness))
    return report


def _jacobi_row(alg: AlgebraSpec, gens: list, x) -> list:
    out = []
    br, par = alg.bracket_generators, alg.parity
    for y in gens:
        for z in gens:
            r = jacobi_residual(br, par, x, y, z)
            if r:
                out.append(Violation((x, y, z), Element(r)))
    return out


def check_jacobi(alg: AlgebraSpec, window: int) -> CheckReport:
    """Graded Jacobi identity on every ordered generator triple in the window.

    Residual coefficients stay symbolic in the parameters and must vanish
    identically.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    gens = alg.window_generators(window)
    rows = map_ordered(partial(_jacobi_row, alg, gens), gens)
    report = CheckReport("jacobi", window, [v for row in rows for v in row])
    report.violations.sort(key=lambda v: tuple(alg.generator_key(g) for g in v.witness))
    return report


# -- transformations ----------------------------------------------------


def specialize(alg: AlgebraSpec, bindings: Mapping) -> AlgebraSpec:
    """Substitute rational values for some parameters."""
    bindings = dict(bindings)
    unknown = set(bindings) - set(alg.parameters)
    if unknown:
        raise SpecError(f"{alg.name} has no parameters {sorted(unknown)}")
    if not bindings:
        return alg
    values = {k: to_rational(v) if not isinstance(v, Scalar) else v for k, v in bindings.items()}
    rules = tuple(
        BracketRule(
            r.left,
            r.right,
            tuple(Summand(s.coefficient.substitute(values), s.target, s.delta) for s in r.summands),
        )
        for r in alg.rules
    )
    params = tuple(p for p in alg.parameters if p not in bindings)
    return AlgebraSpec(alg.name, params, alg.families, rules)


def _swap_ij(s: Scalar) -> Scalar:
    return s.substitute({"i": Scalar.var("__j"), "j": Scalar.var("__i")}).substitute(
        {"__i": Scalar.var("i"), "__j": Scalar.var("j")}
    )


def oriented_rule(alg: AlgebraSpec, left: str, right: str) -> tuple:
    """Summands of ``[left_i, right_j]`` whether stored directly or reversed."""
    r = alg.rule(left, right)
    if r is not None:
        return r.summands
    r = alg.rule(right, left)
    if r is None:
        return ()
    sign = 1 if alg.family(left).parity * alg.family(right).parity else -1
    return tuple(Summand(_swap_ij(s.coefficient) * sign, s.target, s.delta) for s in r.summands)


def check_rescaled_match(
    a: AlgebraSpec, b: AlgebraSpec, mu, bindings: Mapping | None = None
) -> CheckReport:
    """Compare rule tables of ``a`` and ``b`` after odd rescaling.

    ``bindings`` substitute parameters of ``b`` and may also rewrite a
    central family of ``b`` as a combination of ``a``'s central families
    (e.g. ``{"c_H": c/3}``).  Odd-odd rules of ``a`` must equal ``mu`` times
    those of ``b``; all other rules must agree exactly.
    """
    names_a = [f.name for f in a.families]
    names_b = [f.name for f in b.families]
    bindings = {k: Scalar.of(v) for k, v in (bindings or {}).items()}
    family_map = {k: v for k, v in bindings.items() if k in names_b}
    params = {k: v for k, v in bindings.items() if k not in names_b}
    missing = ((set(names_b) - set(family_map)) | _vars_of(family_map)) ^ set(names_a)
    if missing:
        raise SpecError(f"family mismatch between {a.name} and {b.name}: {sorted(missing)}")
    mu = Scalar.of(mu)
    report = CheckReport("rescaled-match", 0)
    for x in names_a:
        for y in names_a:
            if names_a.index(x) > names_a.index(y):
                continue
            lhs = _linear_form(oriented_rule(a, x, y), {}, {})
            rhs = _linear_form(oriented_rule(b, x, y), family_map, params)
            if a.family(x).parity and a.family(y).parity:
                rhs = {k: v * mu for k, v in rhs.items()}
            diff = dict(lhs)
            for k, v in rhs.items():
                diff[k] = diff.get(k, ZERO_S) - v
            diff = {k: v for k, v in diff.items() if v}
            if diff:
                residual = Element({Generator(t + ("[i+j=0]" if d else ""), 0): c for (t, d), c in diff.items()})
                report.violations.append(Violation((Generator(x, 0), Generator(y, 0)), residual))
    return report


def _linear_form(summands, family_map: Mapping, params: Mapping) -> dict:
    out: dict = {}
    for s in summands:
        c = s.coefficient.substitute(params) if params else s.coefficient
        if s.target in family_map:
            parts, rest = family_map[s.target].linear_parts(sorted(_vars_of(family_map)))
            if rest:
                raise SpecError(f"binding for {s.target} is not linear in families")
            targets = parts.items()
        else:
            targets = [(s.target, Scalar.of(1))]
        for t, k in targets:
            key = (t, s.delta)
            out[key] = out.get(key, ZERO_S) + c * k
    return {k: v for k, v in out.items() if v}


def _vars_of(family_map: Mapping) -> set:
    names = set()
    for v in family_map.values():
        names |= v.variables()
    return names


def generator_parity_sign(p: int, q: int) -> int:
    return -1 if p * q else 1


def window_pairs(gens: Iterable) -> Iterable:
    gens = list(gens)
    for x in gens:
        for y in gens:
            yield x, y
