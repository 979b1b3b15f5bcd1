"""Rational functions in canonical form.

A :class:`Scalar` is ``num/den`` with ``gcd(num, den) = 1`` and ``den`` monic
under the graded-lex order, so equality of values is structural equality.
Constant denominators are always folded into the numerator, which keeps the
common polynomial case free of gcd computations.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .polynomial import ONE, ZERO, Polynomial, format_polynomial
from .rational import _MPQ, Q, format_rational, to_rational


class PoleError(ZeroDivisionError):
    """A substitution sent a denominator to zero."""


@lru_cache(maxsize=256)
def _ring(names: tuple):
    # lex keeps sympy's leading-term lookups cheap; monicity is re-imposed
    # under our own order after conversion
    return ring([Symbol(n) for n in names], QQ)[0]


def _to_sympy(p: Polynomial, R, pos: dict):
    n = len(pos)
    d = {}
    for m, c in p.terms.items():
        e = [0] * n
        for v, k in m:
            e[pos[v]] = k
        d[tuple(e)] = c
    return R.from_dict(d)


def _from_sympy(sp, names: tuple) -> Polynomial:
    out = {}
    for e, c in sp.items():
        m = tuple((names[k], x) for k, x in enumerate(e) if x)
        out[m] = Q(c)
    return Polynomial(out, _trusted=True)


def _cancel(num: Polynomial, den: Polynomial):
    """Canonical (num, den) pair for num/den."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero scalar")
    if num.is_zero():
        return ZERO, ONE
    if den.is_constant():
        c = den.constant_value()
        return (num if c == 1 else num.scale(1 / c)), ONE
    names = tuple(sorted(num.variables() | den.variables()))
    R = _ring(names)
    pos = {v: k for k, v in enumerate(names)}
    p, q = _to_sympy(num, R, pos).cancel(_to_sympy(den, R, pos))
    num, den = _from_sympy(p, names), _from_sympy(q, names)
    lc = den.leading_coefficient()
    if den.is_constant():
        return num.scale(1 / lc), ONE
    if lc != 1:
        inv = 1 / lc
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def polynomial_gcd(polys: Iterable[Polynomial]) -> Polynomial:
    """Monic gcd of polynomials (zero entries ignored; empty input gives 0)."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return ZERO
    names = tuple(sorted(set().union(*(p.variables() for p in polys))))
    if not names:
        return ONE
    R = _ring(names)
    pos = {v: k for k, v in enumerate(names)}
    g = _to_sympy(polys[0], R, pos)
    for p in polys[1:]:
        g = g.gcd(_to_sympy(p, R, pos))
        if g.is_ground:
            return ONE
    g = _from_sympy(g, names)
    return g.scale(1 / g.leading_coefficient())


class Scalar:
    """Immutable canonical rational function."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial = ONE, *, _canonical=False):
        if not _canonical:
            num, den = _cancel(num, den)
        elif den is not ONE and den.is_one():
            den = ONE
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def of(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, Polynomial):
            return cls(x, ONE, _canonical=True)
        if isinstance(x, str):
            from .parse import parse_scalar

            return parse_scalar(x)
        c = to_rational(x)
        return cls(Polynomial.constant(c), ONE, _canonical=True)

    @classmethod
    def var(cls, name: str) -> "Scalar":
        return cls(Polynomial.var(name), ONE, _canonical=True)

    @classmethod
    def vars(cls, names: str):
        return tuple(cls.var(n) for n in names.split())

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    __bool__ = lambda self: bool(self.num.terms)  # noqa: E731

    def is_constant(self) -> bool:
        return self.den is ONE and self.num.is_constant()

    def is_polynomial(self) -> bool:
        return self.den is ONE

    def to_rational(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.constant_value()

    def variables(self) -> frozenset:
        return self.num.variables() | self.den.variables()

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den is ONE and other.den is ONE:
            return Scalar(self.num + other.num, ONE, _canonical=True)
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den, _canonical=True)

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            if type(other) is int or type(other) is _MPQ:
                if not other:
                    return ZERO_S
                return Scalar(self.num.scale(other), self.den, _canonical=True)
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if not self.num.terms or not other.num.terms:
            return ZERO_S
        if self.den is ONE and other.den is ONE:
            return Scalar(self.num * other.num, ONE, _canonical=True)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if not other.num.terms:
            raise ZeroDivisionError("division by the zero scalar")
        if other.is_constant():
            c = other.num.constant_value()
            return Scalar(self.num.scale(1 / c), self.den, _canonical=True)
        return Scalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "Scalar":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return ONE_S / (self ** (-n))
        if self.den is ONE:
            return Scalar(self.num**n, ONE, _canonical=True)
        return Scalar(self.num**n, self.den**n, _canonical=True)

    def inverse(self) -> "Scalar":
        return ONE_S / self

    # -- substitution -------------------------------------------------
    def substitute(self, bindings: Mapping[str, object]) -> "Scalar":
        """Ring homomorphism sending variables to rationals or Scalars.

        Raises :class:`PoleError` if the denominator vanishes.
        """
        if not bindings:
            return self
        rational, symbolic = {}, {}
        mine = self.variables()
        for k, v in bindings.items():
            if k not in mine:
                continue
            if isinstance(v, Scalar):
                if v.is_constant():
                    rational[k] = v.num.constant_value()
                else:
                    symbolic[k] = v
            else:
                rational[k] = to_rational(v)
        if not rational and not symbolic:
            return self
        num = self.num.substitute(rational)
        den = self.den.substitute(rational) if self.den is not ONE else ONE
        if symbolic:
            num_s = _eval_symbolic(num, symbolic)
            den_s = _eval_symbolic(den, symbolic) if den is not ONE else ONE_S
            if den_s.is_zero():
                raise PoleError(f"denominator of {self} vanishes under {_fmt_bindings(bindings)}")
            return num_s / den_s
        if den.is_zero():
            raise PoleError(f"denominator of {self} vanishes under {_fmt_bindings(bindings)}")
        return Scalar(num, den)

    def linear_parts(self, unknowns: Iterable[str]):
        """Coefficients of each unknown plus the unknown-free remainder.

        The denominator must not involve any unknown.
        """
        unknowns = set(unknowns)
        if self.den.variables() & unknowns:
            raise ValueError(f"unknown in denominator of {self}")
        parts, rest = self.num.linear_parts(unknowns)
        return (
            {u: Scalar(p, self.den) for u, p in parts.items()},
            Scalar(rest, self.den),
        )

    # -- comparison / display -----------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is NotImplemented:
                return False
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.num.constant_value())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    try:
        return Scalar.of(x)
    except TypeError:
        return NotImplemented


def _eval_symbolic(p: Polynomial, values: Mapping[str, Scalar]) -> Scalar:
    total = ZERO_S
    for m, c in p.terms.items():
        term = Scalar(Polynomial.constant(c), ONE, _canonical=True)
        rest = []
        for v, e in m:
            if v in values:
                term = term * values[v] ** e
            else:
                rest.append((v, e))
        if rest:
            term = term * Scalar(Polynomial({tuple(rest): 1}, _trusted=True), ONE, _canonical=True)
        total = total + term
    return total


def _fmt_bindings(b) -> str:
    return "{" + ", ".join(f"{k}={v}" for k, v in sorted(b.items())) + "}"


def _integerize(num: Polynomial, den: Polynomial):
    from math import gcd, lcm

    coeffs = list(num.terms.values()) + list(den.terms.values())
    mult = 1
    for c in coeffs:
        mult = lcm(mult, int(c.denominator))
    n = num.scale(mult)
    d = den.scale(mult)
    g = 0
    for c in list(n.terms.values()) + list(d.terms.values()):
        g = gcd(g, int(c.numerator))
    if g > 1:
        n, d = n.scale(Q(1, g)), d.scale(Q(1, g))
    return n, d


def format_scalar(x: Scalar) -> str:
    """Canonical text: ``N`` or ``N/D`` with integer-coefficient N and D."""
    if x.is_zero():
        return "0"
    if x.is_constant():
        return format_rational(x.num.constant_value())
    n, d = _integerize(x.num, x.den)
    ns = format_polynomial(n)
    if d.is_one():
        return ns
    ds = format_polynomial(d)
    if len(n.terms) > 1:
        ns = f"({ns})"
    if len(d.terms) > 1 or "*" in ds:
        ds = f"({ds})"
    return f"{ns}/{ds}"


ZERO_S = Scalar(ZERO, ONE, _canonical=True)
ONE_S = Scalar(ONE, ONE, _canonical=True)
