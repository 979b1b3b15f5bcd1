from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from superalg.field import (
    LinearSystem,
    PoleError,
    Q,
    Scalar,
    format_rational,
    format_scalar,
    interpolate_closed_form,
    parse_rational,
    parse_scalar,
    solve_linear,
)
from superalg.field.linear import residual

a, b, i, j = Scalar.vars("a b i j")
SYMS = {n: sympy.Symbol(n) for n in "abij"}


def to_sympy(x: Scalar):
    return sympy.sympify(format_scalar(x).replace("^", "**"), locals=SYMS)


fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)
small_ints = st.integers(-4, 4)


@st.composite
def scalars(draw, depth=3):
    """Random rational functions in a, b built with + - * and division."""
    leaf = st.one_of(
        fractions.map(Scalar.of),
        st.sampled_from([a, b, i, j]),
    )
    x = draw(leaf)
    for _ in range(draw(st.integers(0, depth))):
        y = draw(leaf)
        op = draw(st.sampled_from("+-*/"))
        if op == "+":
            x = x + y
        elif op == "-":
            x = x - y
        elif op == "*":
            x = x * y
        elif y:
            x = x / y
    return x


# -- rationals ---------------------------------------------------------------


@pytest.mark.parametrize(
    "text, value",
    [("3", Fraction(3)), ("-7/21", Fraction(-1, 3)), ("+4/6", Fraction(2, 3)), ("0/5", Fraction(0))],
)
def test_parse_rational_literals(text, value):
    q = parse_rational(text)
    assert (int(q.numerator), int(q.denominator)) == (value.numerator, value.denominator)


@pytest.mark.parametrize("bad", ["0.5", "1e3", "1/", "a/2", ""])
def test_parse_rational_rejects_non_fractions(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")


@given(fractions)
def test_rational_format_round_trip(f):
    q = Q(f.numerator, f.denominator)
    assert parse_rational(format_rational(q)) == q


# -- scalars -----------------------------------------------------------------


def test_canonical_cancellation():
    x = (a**2 - b**2) / (a - b)
    assert x == a + b
    assert x.is_polynomial()
    assert format_scalar((i**3 - i) / 6) == "(i^3-i)/6"


def test_equal_values_share_hash_and_text():
    x = (a + 1) / (2 * a + 2)
    assert x == Scalar.of("1/2")
    assert hash(x) == hash(Scalar.of("1/2"))
    assert format_scalar(x) == "1/2"


def test_substitution_pole_raises():
    with pytest.raises(PoleError):
        (1 / (a - j)).substitute({"a": 2, "j": 2})


def test_substitution_with_symbolic_value():
    x = (a - j) / (a + i)
    assert x.substitute({"a": b + 1}) == (b + 1 - j) / (b + 1 + i)


def test_linear_parts_split():
    f = Scalar.var("f")
    parts, rest = (2 * a * f - 3 + j).linear_parts(["f"])
    assert parts == {"f": 2 * a}
    assert rest == j - 3


def test_linear_parts_rejects_products_of_unknowns():
    u, v = Scalar.vars("u v")
    with pytest.raises(ValueError):
        (u * v + u).linear_parts(["u", "v"])


@given(scalars(), scalars())
def test_field_operations_agree_with_sympy(x, y):
    assert sympy.simplify(to_sympy(x + y) - (to_sympy(x) + to_sympy(y))) == 0
    assert sympy.simplify(to_sympy(x * y) - to_sympy(x) * to_sympy(y)) == 0


@given(scalars())
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(scalars(), scalars(), scalars())
def test_distributive_law(x, y, z):
    assert x * (y + z) == x * y + x * z


@given(scalars())
def test_inverse(x):
    if x:
        assert x * x.inverse() == 1


@given(scalars(), st.integers(-5, 5), st.integers(-5, 5))
def test_substitution_is_a_homomorphism(x, ia, ib):
    vals = {"a": ia, "b": ib, "i": 2, "j": -3}
    try:
        lhs = (x * x + x).substitute(vals)
        v = x.substitute(vals)
    except PoleError:
        return
    assert lhs == v * v + v


# -- linear solving ----------------------------------------------------------


def _system(rows, unknowns):
    s = LinearSystem(list(unknowns))
    for coeffs, c in rows:
        s.add_row(coeffs, c)
    return s


def test_unique_solution():
    s = _system([({"x": 1, "y": 1}, 3), ({"x": 1, "y": -1}, 1)], "xy")
    sol = solve_linear(s)
    assert sol.consistent and sol.dimension == 0
    assert sol.particular == {"x": Scalar.of(2), "y": Scalar.of(1)}


def test_inconsistent_row_reported():
    s = _system([({"x": 1}, 1), ({"y": 1}, 0), ({"x": 2}, 3)], "xy")
    sol = solve_linear(s)
    assert not sol.consistent
    assert sol.inconsistent_row == 2


def test_symbolic_coefficients():
    s = _system([({"x": a, "y": 1}, b), ({"x": 1, "y": -1}, 0)], "xy")
    sol = solve_linear(s)
    assert sol.particular["x"] == b / (a + 1)


def test_parametrize_two_free_coordinates():
    # x + y + z + w = 0 and x - w = 0 leave a 2-dimensional space
    s = _system([({"x": 1, "y": 1, "z": 1, "w": 1}, 0), ({"x": 1, "w": -1}, 0)], "xyzw")
    sol = solve_linear(s)
    assert sol.dimension == 2
    vals = sol.parametrize(["x", "y"], ["s", "t"])
    sv, tv = Scalar.vars("s t")
    assert vals["x"] == sv and vals["y"] == tv
    assert vals["w"] == sv
    assert vals["z"] == -2 * sv - tv


def test_forced_zero():
    s = _system([({"x": 1, "y": 1}, 0), ({"x": 1, "y": 2}, 0), ({"z": 1, "w": -1}, 0)], "xyzw")
    sol = solve_linear(s)
    assert sol.forced_zero("x") and sol.forced_zero("y")
    assert not sol.forced_zero("z")


@given(
    st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=1, max_size=5),
    st.lists(small_ints, min_size=5, max_size=5),
)
def test_rank_and_residual_against_sympy(matrix, rhs):
    names = ["u0", "u1", "u2", "u3"]
    rows = [({n: c for n, c in zip(names, row)}, rhs[k]) for k, row in enumerate(matrix)]
    sol = solve_linear(_system(rows, names))
    m = sympy.Matrix(matrix)
    aug = m.row_join(sympy.Matrix(rhs[: len(matrix)]))
    assert sol.consistent == (m.rank() == aug.rank())
    if sol.consistent:
        assert sol.dimension == 4 - m.rank()
        assert all(not r for r in residual(_system(rows, names), sol.particular))
        for vec in sol.homogeneous_basis:
            hom = _system([(c, 0) for c, _ in rows], names)
            assert all(not r for r in residual(hom, vec))


# -- interpolation -----------------------------------------------------------


def test_interpolation_recovers_cubic():
    pts = [(k, Scalar.of(Fraction(k**3 - k, 6))) for k in range(-4, 5)]
    assert interpolate_closed_form(pts, 3, "i") == (i**3 - i) / 6


def test_interpolation_reports_failure():
    pts = [(k, Scalar.of(2**abs(k))) for k in range(-4, 5)]
    assert interpolate_closed_form(pts, 3, "i") is None


def test_interpolation_with_symbolic_values():
    pts = [(k, (b * b - b) / 2 * k * k) for k in range(-3, 4)]
    assert interpolate_closed_form(pts, 3, "i") == (b * b - b) / 2 * i * i


@given(st.lists(fractions, min_size=1, max_size=4))
def test_interpolation_exact_on_random_polynomials(coeffs):
    poly = sum((Scalar.of(c) * i**k for k, c in enumerate(coeffs)), Scalar.of(0))
    pts = [(k, poly.substitute({"i": k})) for k in range(-4, 5)]
    assert interpolate_closed_form(pts, 3, "i") == poly
