"""Parser for the algebra/module definition language.

A file holds ``algebra`` and ``module`` blocks::

    algebra witt {
      params: ;
      generator L even;
      bracket L(i) L(j) -> (i-j) * L(i+j);
    }

    module A_ab over virasoro {
      params: a, b;
      basis x even;
      action L(i) x(j) -> (a-j+i*b) * x(i+j);
    }

Names after ``algebra``, ``module`` and ``over`` may contain hyphens
(``ramond-n2``).  A term whose target index is ``0`` must carry
``delta(i+j)`` or ``when i+j=0`` in an algebra; in a module it sends the
vector to index 0.  ``basis x even when j != 0;`` restricts the support.
"""

from __future__ import annotations

from pathlib import Path

from ..algebra.builtins import BUILTIN_ALGEBRAS, builtin_algebra
from ..algebra.core import EVEN, ODD, AlgebraSpec, BracketRule, GeneratorFamily, Summand
from ..errors import ParseError, SemanticError, SpecError
from ..field import ONE_S, Scalar
from ..field.parse import Token, TokenStream, parse_expression, tokenize
from ..modules.spec import TRUE, ActionRule, ActionSummand, BasisFamily, Guard, GuardAtom, ModuleSpec

KEYWORDS = frozenset(
    "algebra module params generator bracket basis action when and over even odd central delta".split()
)
_I, _J = Scalar.vars("i j")
_SUM = _I + _J


def _name(ts: TokenStream, what: str) -> tuple:
    """IDENT, allowing hyphen-joined adjacent pieces such as ``ramond-n2``."""
    first = ts.peek
    if first.kind != "ident" or first.value in KEYWORDS:
        raise ts.error(f"expected {what}, found {first.value or 'end of input'!r}")
    ts.next()
    parts, end = [first.value], first.end
    while ts.at("-") and ts.peek.start == end:
        nxt = ts.peek_at(1)
        if nxt.kind not in ("ident", "int") or nxt.start != ts.peek.end:
            break
        ts.next()
        ts.next()
        parts.append("-" + nxt.value)
        end = nxt.end
    return "".join(parts), first


def _ident(ts: TokenStream, what: str) -> Token:
    tok = ts.peek
    if tok.kind != "ident" or tok.value in KEYWORDS:
        raise ts.error(f"expected {what}, found {tok.value or 'end of input'!r}")
    return ts.next()


def _params(ts: TokenStream) -> tuple:
    ts.expect("params")
    ts.expect(":")
    names = []
    if not ts.at(";"):
        while True:
            tok = _ident(ts, "parameter name")
            if tok.value in ("i", "j") or tok.value in names:
                raise SemanticError(f"invalid or repeated parameter {tok.value!r}", tok.line, tok.col)
            names.append(tok.value)
            if not ts.accept(","):
                break
    ts.expect(";")
    return tuple(names)


def _parity(ts: TokenStream) -> int:
    if ts.accept("even"):
        return EVEN
    if ts.accept("odd"):
        return ODD
    raise ts.error("expected 'even' or 'odd'")


def _ref(ts: TokenStream, var: str) -> Token:
    fam = _ident(ts, "family name")
    ts.expect("(")
    idx = _ident(ts, "index variable")
    if idx.value != var:
        raise SemanticError(f"index variable must be {var!r}, found {idx.value!r}", idx.line, idx.col)
    ts.expect(")")
    return fam


def _check_vars(value: Scalar, allowed: set, tok: Token) -> None:
    extra = value.variables() - allowed
    if extra:
        raise SemanticError(f"undeclared variables {sorted(extra)}", tok.line, tok.col)


def _guard_atom(ts: TokenStream) -> GuardAtom:
    tok = ts.peek
    expr = parse_expression(ts)
    if ts.accept("="):
        op = "="
    elif ts.accept("!="):
        op = "!="
    else:
        raise ts.error("expected '=' or '!=' in guard")
    neg = ts.accept("-")
    value = int(ts.expect_kind("int", "integer").value)
    value = -value if neg else value
    _check_vars(expr, {"i", "j"}, tok)
    const = expr.substitute({"i": 0, "j": 0})
    if not const.is_constant() or const.to_rational().denominator != 1:
        raise SemanticError("guard constant must be an integer", tok.line, tok.col)
    try:
        return GuardAtom(expr - const, op, value - int(const.to_rational()))
    except SpecError as exc:
        raise SemanticError(str(exc), tok.line, tok.col) from None


def _guard(ts: TokenStream) -> Guard:
    atoms = [_guard_atom(ts)]
    while ts.accept("and"):
        atoms.append(_guard_atom(ts))
    return Guard.of(*atoms)


def parse_guard(text: str) -> Guard:
    """Parse ``atom (and atom)*``; ``true`` or empty text is the empty guard."""
    if text.strip() in ("", "true"):
        return TRUE
    ts = TokenStream(tokenize(text))
    g = _guard(ts)
    if ts.peek.kind != "eof":
        raise ts.error(f"trailing input {ts.peek.value!r}")
    return g


def _sum(ts: TokenStream, allowed: set, *, algebra: bool) -> list:
    """Return ``[(coefficient, target_token, to_zero)]``."""
    if ts.peek.kind == "int" and ts.peek.value == "0" and ts.peek_at(1).value in (";", "when"):
        ts.next()
        return []
    terms = []
    while True:
        terms.append(_term(ts, allowed, algebra=algebra))
        if not ts.accept("+"):
            return terms


def _term(ts: TokenStream, allowed: set, *, algebra: bool) -> tuple:
    start = ts.peek
    seen_delta = []

    def on_delta(arg, tok):
        if not algebra:
            raise SemanticError("delta(...) is only allowed in algebra brackets", tok.line, tok.col)
        if arg != _SUM:
            raise SemanticError("delta argument must be i+j", tok.line, tok.col)
        seen_delta.append(tok)
        return ONE_S

    if ts.peek.kind == "ident" and ts.peek_at(1).value == "(" and ts.peek.value != "delta":
        coeff = ONE_S  # bare reference
    else:
        coeff = parse_expression(ts, on_delta=on_delta, stop_before_ref=True)
        ts.expect("*")
    _check_vars(coeff, allowed, start)
    target = _ident(ts, "target family")
    ts.expect("(")
    itok = ts.peek
    index = parse_expression(ts)
    ts.expect(")")
    if algebra and ts.at("when"):
        gtok = ts.next()
        g = _guard(ts)
        if g != Guard.of(GuardAtom(_SUM, "=", 0)):
            raise SemanticError("a bracket term guard must be i+j=0", gtok.line, gtok.col)
        seen_delta.append(gtok)
    if index == _SUM:
        zero = False
    elif index.is_zero():
        zero = True
    else:
        raise SemanticError("target index must be i+j or 0", itok.line, itok.col)
    if algebra and zero != bool(seen_delta):
        raise SemanticError("index 0 targets go with a delta(i+j) factor", itok.line, itok.col)
    return coeff, target, zero


def _algebra(ts: TokenStream) -> AlgebraSpec:
    ts.expect("algebra")
    name, head = _name(ts, "algebra name")
    ts.expect("{")
    params = _params(ts)
    allowed = set(params) | {"i", "j"}
    families, fam_tokens = [], {}
    while ts.at("generator"):
        ts.next()
        tok = _ident(ts, "generator name")
        if tok.value in fam_tokens:
            raise SemanticError(f"duplicate generator {tok.value}", tok.line, tok.col)
        parity = _parity(ts)
        central = ts.accept("central")
        if central and parity != EVEN:
            raise SemanticError(f"central generator {tok.value} must be even", tok.line, tok.col)
        ts.expect(";")
        families.append(GeneratorFamily(tok.value, parity, central))
        fam_tokens[tok.value] = tok
    rules, seen = [], {}
    while ts.at("bracket"):
        ts.next()
        left = _ref(ts, "i")
        right = _ref(ts, "j")
        ts.expect("->")
        terms = _sum(ts, allowed, algebra=True)
        ts.expect(";")
        for tok in (left, right, *(t for _, t, _ in terms)):
            if tok.value not in fam_tokens:
                raise SemanticError(f"unknown generator family {tok.value}", tok.line, tok.col)
        key = frozenset((left.value, right.value))
        if key in seen:
            raise SemanticError(f"duplicate bracket for {left.value}, {right.value}", left.line, left.col)
        seen[key] = left
        summands = tuple(Summand(c, t.value, z) for c, t, z in terms)
        rules.append((BracketRule(left.value, right.value, summands), left))
    ts.expect("}")
    try:
        return AlgebraSpec(name, params, tuple(families), tuple(r for r, _ in rules))
    except SpecError as exc:
        raise SemanticError(str(exc), head.line, head.col) from None


def _module(ts: TokenStream, algebras: dict) -> ModuleSpec:
    ts.expect("module")
    name, head = _name(ts, "module name")
    ts.expect("over")
    alg_name, alg_tok = _name(ts, "algebra name")
    if alg_name in algebras:
        alg = algebras[alg_name]
    elif alg_name in BUILTIN_ALGEBRAS:
        alg = builtin_algebra(alg_name)
    else:
        raise SemanticError(f"unknown algebra {alg_name}", alg_tok.line, alg_tok.col)
    ts.expect("{")
    params = _params(ts)
    allowed = set(params) | {"i", "j"}
    basis, basis_tokens = [], {}
    while ts.at("basis"):
        ts.next()
        tok = _ident(ts, "basis name")
        if tok.value in basis_tokens:
            raise SemanticError(f"duplicate basis family {tok.value}", tok.line, tok.col)
        parity = _parity(ts)
        support = _guard(ts) if ts.accept("when") else TRUE
        if any("i" in a.expr.variables() for a in support.atoms):
            raise SemanticError("a basis support guard is written in j only", tok.line, tok.col)
        ts.expect(";")
        basis.append(BasisFamily(tok.value, parity, support))
        basis_tokens[tok.value] = tok
    gen_names = {f.name for f in alg.families}
    rules = []
    while ts.at("action"):
        ts.next()
        gen = _ref(ts, "i")
        vec = _ref(ts, "j")
        ts.expect("->")
        terms = _sum(ts, allowed, algebra=False)
        guard = _guard(ts) if ts.accept("when") else TRUE
        ts.expect(";")
        if gen.value not in gen_names:
            raise SemanticError(f"unknown generator family {gen.value}", gen.line, gen.col)
        for tok in (vec, *(t for _, t, _ in terms)):
            if tok.value not in basis_tokens:
                raise SemanticError(f"unknown basis family {tok.value}", tok.line, tok.col)
        summands = tuple(ActionSummand(c, t.value, z) for c, t, z in terms)
        rules.append(ActionRule(gen.value, vec.value, summands, guard))
    ts.expect("}")
    try:
        return ModuleSpec(name, alg, params, tuple(basis), tuple(rules))
    except SpecError as exc:
        raise SemanticError(str(exc), head.line, head.col) from None


def parse(text: str, algebras: dict | None = None) -> list:
    """Parse definition text into a list of AlgebraSpec / ModuleSpec.

    ``algebras`` supplies extra algebras that modules may be ``over``;
    algebras defined earlier in the same text take precedence over built-ins.
    """
    ts = TokenStream(tokenize(text))
    known = dict(algebras or {})
    out = []
    while ts.peek.kind != "eof":
        if ts.at("algebra"):
            alg = _algebra(ts)
            known[alg.name] = alg
            out.append(alg)
        elif ts.at("module"):
            out.append(_module(ts, known))
        else:
            tok = ts.peek
            raise ParseError(f"expected 'algebra' or 'module', found {tok.value!r}", tok.line, tok.col)
    return out


def parse_file(path) -> list:
    return parse(Path(path).read_text(encoding="utf-8"))


__all__ = ["KEYWORDS", "parse", "parse_file", "parse_guard"]
