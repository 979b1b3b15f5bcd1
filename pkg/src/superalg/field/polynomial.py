"""Sparse multivariate polynomials over the rationals.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable
name, so polynomials over different variable sets combine without a shared
ring declaration.  Monomials are ordered graded-lexicographically, with
variables ranked alphabetically (``a`` is the most significant).
"""

from __future__ import annotations

from functools import cmp_to_key, lru_cache
from typing import Iterable, Mapping

from gmpy2 import mpq

from .rational import Q, to_rational

Monomial = tuple  # tuple[tuple[str, int], ...]

ONE_MONO: Monomial = ()


@lru_cache(maxsize=1 << 16)
def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for v, e in m2:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_cmp(m1: Monomial, m2: Monomial) -> int:
    d1, d2 = mono_degree(m1), mono_degree(m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    # lex: walk variables alphabetically, first difference decides
    e1, e2 = dict(m1), dict(m2)
    for v in sorted(set(e1) | set(e2)):
        x, y = e1.get(v, 0), e2.get(v, 0)
        if x != y:
            return -1 if x < y else 1
    return 0


mono_key = cmp_to_key(_mono_cmp)


class Polynomial:
    """Immutable sparse polynomial with :class:`gmpy2.mpq` coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, *, _trusted=False):
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for m, c in (terms or {}).items():
                c = to_rational(c)
                if c:
                    clean[tuple(sorted((v, e) for v, e in m if e))] = c
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Polynomial":
        c = to_rational(c)
        return cls({(): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): Q(1)}, _trusted=True)

    # -- predicates / accessors ----------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and () in t)

    def constant_value(self) -> mpq:
        """Constant term (the whole value for constant polynomials)."""
        return self.terms.get((), Q(0))

    def is_one(self) -> bool:
        t = self.terms
        return len(t) == 1 and t.get(()) == 1

    def variables(self) -> frozenset:
        return frozenset(v for m in self.terms for v, _ in m)

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(mono_degree(m) for m in self.terms)
        return max(dict(m).get(var, 0) for m in self.terms)

    def sorted_terms(self) -> list:
        """Terms in descending monomial order."""
        return sorted(self.terms.items(), key=lambda kv: mono_key(kv[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=mono_key)
        return m, self.terms[m]

    def leading_coefficient(self) -> mpq:
        return self.leading_term()[1]

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(out, _trusted=True)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        c = to_rational(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return Polynomial({m: v * c for m, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.terms, other.terms
        if not a or not b:
            return ZERO
        if len(b) == 1 and () in b:
            return self.scale(b[()])
        if len(a) == 1 and () in a:
            return other.scale(a[()])
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial({m: c for m, c in out.items() if c}, _trusted=True)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative exponent on a polynomial")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation ----------------------------------------------------
    def substitute(self, values: Mapping[str, mpq]) -> "Polynomial":
        """Substitute rational values for some variables."""
        if not values or not (self.variables() & values.keys()):
            return self
        out: dict = {}
        for m, c in self.terms.items():
            rest = []
            for v, e in m:
                val = values.get(v)
                if val is None:
                    rest.append((v, e))
                else:
                    c = c * val**e
                    if not c:
                        break
            if c:
                key = tuple(rest)
                s = out.get(key)
                out[key] = c if s is None else s + c
        return Polynomial({m: c for m, c in out.items() if c}, _trusted=True)

    def linear_parts(self, unknowns: Iterable[str]):
        """Split into ``{unknown: coefficient polynomial}`` and a remainder.

        Raises ValueError when some unknown occurs non-linearly.
        """
        unknowns = set(unknowns)
        parts: dict = {}
        rest: dict = {}
        for m, c in self.terms.items():
            hit = [(v, e) for v, e in m if v in unknowns]
            if not hit:
                rest[m] = c
                continue
            if len(hit) > 1 or hit[0][1] != 1:
                raise ValueError(f"non-linear occurrence of {hit} in {self}")
            u = hit[0][0]
            key = tuple((v, e) for v, e in m if v != u)
            parts.setdefault(u, {})[key] = c
        return (
            {u: Polynomial(t, _trusted=True) for u, t in parts.items()},
            Polynomial(rest, _trusted=True),
        )

    # -- comparison / display -----------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)


def _format_monomial(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


def format_polynomial(p: Polynomial) -> str:
    """Render with integer-or-rational coefficients, descending grlex."""
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = _fmt_q(a)
        elif a == 1:
            body = _format_monomial(m)
        else:
            body = f"{_fmt_q(a)}*{_format_monomial(m)}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"-{body}" if neg else f"+{body}")
    return "".join(parts)


def _fmt_q(c: mpq) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


ZERO = Polynomial({}, _trusted=True)
ONE = Polynomial({(): Q(1)}, _trusted=True)
