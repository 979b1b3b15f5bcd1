"""Arbitrary-precision rationals (gmpy2 ``mpq`` under a local alias)."""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

Q = mpq
_MPQ = type(mpq(0))

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> mpq:
    """Parse ``p`` or ``p/q`` with optional sign.  Decimals are rejected."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return mpq(num, den)


def to_rational(x) -> mpq:
    if type(x) is _MPQ:
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def format_rational(q: mpq) -> str:
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
