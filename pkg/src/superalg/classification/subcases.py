"""Elimination of the H-action subcases for the RA-type odd actions.

Each subcase fixes ``H_i x_j = f_{ij} x_{i+j}`` and ``H_i y_j = f'_{ij} y_{i+j}``
together with (b, b').  With ``G^+_i x_j = y_{i+j}`` and
``G^-_i y_j = 2(a-j+2i(b+1/2)) x_{i+j}``, a subcase survives when
``[H_i, G^+_j] = G^+_{i+j}`` on x and ``[H_i, G^-_j] = -G^-_{i+j}`` on y
hold on the window for some admissible value of f.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra.builtins import builtin_algebra
from ..algebra.core import Generator
from ..field import Scalar, parse_scalar
from ..modules.builtins import X, Y
from ..modules.spec import ActionRule, ActionSummand, BasisVector, ModuleSpec, axiom_defect


@dataclass(frozen=True)
class Subcase:
    case_id: str
    f: str  # f_{ij}
    fprime: str  # f'_{ij}
    b: str
    bprime: str
    nonzero: tuple = ()  # expressions in f that must not vanish


# (id, f_ij, f'_ij, b, b', required nonzero).  A form carrying a factor f or
# f+1 needs that factor nonzero, else it collapses into a constant subcase.
SUBCASES = (
    Subcase("5.1", "f", "f+1", "b", "b+1/2"),
    Subcase("5.2", "(a-j)/(a-i-j)*f", "f+1", "0", "1/2", ("f",)),
    Subcase("5.3", "(a-i-j)/(a-j)*f", "f+1", "-1", "-1/2", ("f",)),
    Subcase("5.4", "f", "(a-j)/(a-i-j)*(f+1)", "-1/2", "0", ("f+1",)),
    Subcase("5.5", "f", "(a-i-j)/(a-j)*(f+1)", "-3/2", "-1", ("f+1",)),
    Subcase("6.1", "0", "1", "0", "1/2"),
    Subcase("6.2", "0", "1", "-1", "-1/2"),
    Subcase("6.3", "f", "f+1", "-1/2", "0", ("f",)),
    Subcase("6.4", "f", "(a-i)/(a-i-j)*(f+1)", "-1/2", "0", ("f", "f+1")),
    Subcase("6.5", "(a-j)/(a-i-j)*f", "f+1", "0", "1/2", ("f",)),
    Subcase("6.6", "(a-i-j)/(a-j)*f", "f+1", "-1", "-1/2", ("f",)),
    Subcase("6.7", "f", "(a-i-j)/(a-j)*(f+1)", "-3/2", "-1", ("f+1",)),
)


@dataclass
class SubcaseVerdict:
    case_id: str
    surviving: bool
    forced_f: Scalar | None = None
    witness: tuple | None = None  # (identity, i, j, k)
    reason: str = ""
    embeds_in_ra: bool | None = None
    a_value: Scalar | None = None

    def to_json(self) -> dict:
        return {
            "case": self.case_id,
            "verdict": "surviving" if self.surviving else "eliminated",
            "forced_f": None if self.forced_f is None else str(self.forced_f),
            "witness": None if self.witness is None else list(self.witness),
            "reason": self.reason,
            "embeds_in_RA": self.embeds_in_ra,
            "a": None if self.a_value is None else str(self.a_value),
        }


@dataclass
class SubcaseTable:
    window: int
    verdicts: list = field(default_factory=list)

    def verdict(self, case_id: str) -> SubcaseVerdict:
        return next(v for v in self.verdicts if v.case_id == case_id)

    def survivors(self, case: str | None = None) -> list:
        return [v.case_id for v in self.verdicts if v.surviving and (case is None or v.case_id.startswith(case + "."))]

    def to_json(self) -> dict:
        return {"window": self.window, "subcases": [v.to_json() for v in self.verdicts]}


def _module(sub: Subcase, a: Scalar) -> ModuleSpec:
    i, j = Scalar.vars("i j")
    b = parse_scalar(sub.b)
    bprime = parse_scalar(sub.bprime)
    bind = {"a": a}
    rules = (
        ActionRule("L", "x", (ActionSummand(a - j + i * b, "x"),)),
        ActionRule("L", "y", (ActionSummand(a - j + i * bprime, "y"),)),
        ActionRule("H", "x", (ActionSummand(parse_scalar(sub.f).substitute(bind), "x"),)),
        ActionRule("H", "y", (ActionSummand(parse_scalar(sub.fprime).substitute(bind), "y"),)),
        ActionRule("Gp", "x", (ActionSummand(Scalar.of(1), "y"),)),
        ActionRule("Gm", "y", (ActionSummand(2 * (a - j + 2 * i * (b + Scalar.of("1/2"))), "x"),)),
    )
    params = tuple(sorted({"a", "b", "f"} & set().union(*(s.coefficient.variables() for r in rules for s in r.summands))))
    return ModuleSpec(f"subcase-{sub.case_id}", builtin_algebra("ramond-n2"), params, (X, Y), rules)


def _equations(mod: ModuleSpec, window: int):
    """Yield ``((identity, i, j, k), coefficient)`` for every nonzero defect."""
    for name, odd, vec in (("[H,G+] on x", "Gp", "x"), ("[H,G-] on y", "Gm", "y")):
        for i in range(-window, window + 1):
            for j in range(-window, window + 1):
                for k in range(-window, window + 1):
                    d = axiom_defect(mod, Generator("H", i), Generator(odd, j), BasisVector(vec, k))
                    for c in d.values():
                        yield (name, i, j, k), c


def _judge(sub: Subcase, window: int, a: Scalar) -> SubcaseVerdict:
    mod = _module(sub, a)
    forbidden = {}
    for text in sub.nonzero:
        # the value of f at which this nondegeneracy expression vanishes
        parts, rest = parse_scalar(text).linear_parts(["f"])
        forbidden[-rest / parts["f"]] = text
    value = None
    for witness, c in _equations(mod, window):
        if value is not None:
            c = c.substitute({"f": value})
            if c:
                return SubcaseVerdict(sub.case_id, False, value, witness, f"inconsistent after f={value}")
            continue
        parts, rest = c.linear_parts(["f"]) if "f" in c.variables() else ({}, c)
        coef = parts.get("f")
        if not coef:
            if rest:
                return SubcaseVerdict(sub.case_id, False, None, witness, "identity fails for every f")
            continue
        value = -rest / coef
        if value in forbidden:
            return SubcaseVerdict(sub.case_id, False, value, witness, f"forces {forbidden[value]} = 0")
    verdict = SubcaseVerdict(sub.case_id, True, value, None, "")
    b = parse_scalar(sub.b)
    bind = {"f": value} if value is not None else {}
    f_ij = parse_scalar(sub.f).substitute(bind)
    fp_ij = parse_scalar(sub.fprime).substitute(bind)
    verdict.embeds_in_ra = f_ij == -(2 * b + 2) and fp_ij == -(2 * b + 1)
    return verdict


def eliminate_h_subcases(window: int = 3, subcases=SUBCASES) -> SubcaseTable:
    """Judge every tabulated subcase on the window.

    Case 5 keeps ``a`` symbolic (a - b and a - b' are not integers); Case 6
    has a - b integral, so ``a = b + 3*window + 2`` keeps every
    denominator on the window away from zero.
    """
    if window < 3:
        raise ValueError("window must be at least 3")
    table = SubcaseTable(window)
    for sub in subcases:
        if sub.case_id.startswith("6."):
            a = parse_scalar(sub.b) + 3 * window + 2
        else:
            a = Scalar.var("a")
        v = _judge(sub, window, a)
        v.a_value = a
        table.verdicts.append(v)
    return table


__all__ = ["SUBCASES", "Subcase", "SubcaseTable", "SubcaseVerdict", "eliminate_h_subcases"]
