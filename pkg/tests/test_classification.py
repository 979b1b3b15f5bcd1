from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from superalg.classification.branches import (
    assemble_family,
    branch_bprime,
    branch_polynomial,
    generic_families,
    pair_and_normalize,
    scan_side_conditions,
    solve_coefficient_shapes,
)
from superalg.classification.deformation import (
    DEFORMATION_FAMILIES,
    assemble_deformation,
    derive_deformation,
)
from superalg.classification.subcases import SUBCASES, eliminate_h_subcases
from superalg.errors import SpecError
from superalg.field import PoleError, Scalar
from superalg.modules.builtins import builtin_module
from superalg.modules.spec import check_module_axioms, same_module_structure, specialize_module

a, b, i, j = Scalar.vars("a b i j")
h1, gp0, gm0, alpha, beta = Scalar.vars("h1 gp0 gm0 alpha beta")
HALF = Scalar.of("1/2")


def recurrence_defects(shape, bv, bpv, av=Fraction(1, 7), window=3):
    """Evaluate (i/2-j)u(i+j,k) - (a-k-j+i b')u(j,k) + (a-k+i b)u(j,i+k) at
    a fixed a, written out independently of the solver."""
    def u(p, q):
        return shape.substitute({"a": av, "i": p, "j": q})

    bad = []
    w = range(-window, window + 1)
    for ii in w:
        for jj in w:
            for kk in w:
                if abs(ii + jj) > window or abs(ii + kk) > window:
                    continue
                try:
                    val = (Fraction(ii, 2) - jj) * u(ii + jj, kk) - (av - kk - jj + ii * bpv) * u(jj, kk) + (av - kk + ii * bv) * u(jj, ii + kk)
                except PoleError:
                    continue
                if val:
                    bad.append((ii, jj, kk))
    return bad


# -- branch equation ----------------------------------------------------------


def test_branch_roots_symbolic():
    bs = branch_bprime(b)
    assert set(bs.roots) == {b + HALF, -(b + HALF), b - HALF, -b - 3 * HALF}
    for r in bs.roots:
        assert not branch_polynomial(b, r)


def test_branch_roots_against_sympy_factorization():
    bs_, bp = sympy.symbols("b bprime")
    t = bp**2 - (bs_ + sympy.Rational(1, 2)) ** 2
    factors = {str(f.as_expr()) for f, _ in sympy.factor_list(sympy.expand(t * (t + 2 * bp + 1)), bp)[1]}
    assert len(factors) == 4
    sols = {sympy.solve(sympy.sympify(f), bp)[0] for f in factors}
    ours = {sympy.sympify(str(r).replace("^", "**"), locals={"b": bs_}) for r in branch_bprime(b).roots}
    assert {sympy.simplify(s) for s in sols} == {sympy.simplify(s) for s in ours}


def test_branch_at_zero_merges_duplicate():
    bs = branch_bprime(0)
    assert [str(r) for r in bs.roots] == ["1/2", "-1/2", "-3/2"]
    assert sorted(bs.multiplicities) == [1, 1, 2]


@given(st.fractions(min_value=-6, max_value=6, max_denominator=8))
def test_branch_roots_annihilate_at_rationals(bv):
    for r in branch_bprime(bv).roots:
        assert not branch_polynomial(bv, r)


# -- coefficient shapes ---------------------------------------------------------


@pytest.mark.parametrize(
    "bv, bpv, kind, shape",
    [
        ("1/4", "3/4", "constant", Scalar.of(1)),
        ("-1", "1/2", "(a-j)^-1", 1 / (a - j)),
        ("-3/2", "0", "(a-i-j)^-1", 1 / (a - i - j)),
        ("1/4", "-1/4", "polynomial", (2 * a + i - 2 * j) / 2),
    ],
)
def test_shape_solutions(bv, bpv, kind, shape):
    (sol,) = solve_coefficient_shapes(bv, bpv, 3)
    assert sol.kind == kind
    assert sol.shape == shape
    assert sol.condition == ("none" if kind in ("constant", "polynomial") else "a not in Z")
    assert recurrence_defects(sol.shape, Fraction(bv), Fraction(bpv)) == []


def test_off_branch_has_no_solution():
    assert solve_coefficient_shapes("1/4", "0", 3) == []


def test_b_side_uses_swapped_parameters():
    (sol,) = solve_coefficient_shapes("1/4", "3/4", 3, side="b")
    assert recurrence_defects(sol.shape, Fraction(3, 4), Fraction(1, 4)) == []


@pytest.fixture(scope="module")
def families():
    return generic_families(3)


def test_generic_families_are_the_four_builtins(families):
    assert [f.label for f in families] == ["RA", "RB", "RAp", "RBp"]
    names = {"RA": "RA_ab", "RB": "RB_ab", "RAp": "RAp_ab", "RBp": "RBp_ab"}
    for fam in families:
        assert same_module_structure(assemble_family(fam, 3), builtin_module(names[fam.label]))


def test_family_offsets(families):
    offsets = {f.label: f.offset for f in families}
    assert offsets == {"RA": HALF, "RB": HALF, "RAp": -HALF, "RBp": -HALF}


def test_ra_coefficients(families):
    ra = next(f for f in families if f.label == "RA")
    assert ra.coefficients["a+"] == 1 and not ra.coefficients["a-"]
    assert ra.coefficients["b-"] == 2 * (a - j + 2 * i * (b + HALF))


def test_pairing_rejects_empty_side():
    with pytest.raises(SpecError):
        pair_and_normalize(None, None, 3)


def test_side_condition_scans():
    cands = [f"{k}/4" for k in range(-8, 9)]
    minus = scan_side_conditions("minus", cands)
    shift = scan_side_conditions("shift", cands)
    assert minus.forced == [Scalar.of(-1), Scalar.of("-1/2")]
    assert shift.forced == [Scalar.of("-3/2"), Scalar.of(-1)]
    kinds = {s.kind for s in minus.hits if s.b == -1}
    assert kinds == {"(a-j)^-1"}


# -- subcases -------------------------------------------------------------------


@pytest.fixture(scope="module")
def subcase_table():
    return eliminate_h_subcases(3)


def test_case_five_survivor(subcase_table):
    assert subcase_table.survivors("5") == ["5.1"]
    v = subcase_table.verdict("5.1")
    assert v.forced_f == -2 * b - 2
    assert v.embeds_in_ra


@pytest.mark.parametrize("case_id", ["5.2", "5.3", "5.4", "5.5"])
def test_case_five_eliminations_carry_witnesses(case_id, subcase_table):
    v = subcase_table.verdict(case_id)
    assert not v.surviving
    assert v.witness is not None and len(v.witness) == 4


def test_case_six_survivors(subcase_table):
    assert subcase_table.survivors("6") == ["6.2", "6.3"]
    assert all(subcase_table.verdict(c).embeds_in_ra for c in ("6.2", "6.3"))


def test_every_tabulated_subcase_judged(subcase_table):
    assert [v.case_id for v in subcase_table.verdicts] == [s.case_id for s in SUBCASES]


# -- deformations ---------------------------------------------------------------


@pytest.fixture(scope="module")
def deformations():
    return {name: derive_deformation(name, 4) for name in DEFORMATION_FAMILIES}


def test_ra_x0_closed_forms(deformations):
    sol = deformations["RA-x0"]
    assert sol.dimension == 2
    cf = sol.closed_forms
    assert cf["l"] == i * i / 2 * h1 - i * gp0
    assert cf["h"] == i * h1
    assert cf["gm"] == 0
    assert sol.h1_zero_trivial


@pytest.mark.parametrize("name, norm", [
    ("RA-x0", {"h1": 1, "gp0": -alpha}),
    ("RA-y0", {"h1": 1, "gp0": beta}),
    ("RB-x0", {"h1": 1, "gm0": alpha}),
    ("RB-y0", {"h1": 1, "gm0": -beta}),
])
def test_normalization_reproduces_builtin(name, norm, deformations):
    sol = deformations[name]
    assert sol.matches_builtin
    assert sol.normalization == {k: Scalar.of(v) for k, v in norm.items()}
    # independent comparison of every action on the window
    mod = assemble_deformation(sol)
    point = {"alpha": Scalar.of("1/3"), "beta": Scalar.of("2/5")}
    binding = {k: Scalar.of(v).substitute(point) for k, v in norm.items()}
    fixed = specialize_module(mod, binding)
    target = builtin_module(DEFORMATION_FAMILIES[name].builtin)
    target = specialize_module(target, {k: v for k, v in point.items() if k in target.parameters})
    gens = target.algebra.window_generators(3, include_central=False)
    for g in gens:
        for v in target.basis_vectors(3):
            assert fixed.act_basis(g, v) == target.act_basis(g, v), (g, v)


def test_assembled_deformations_satisfy_axioms(deformations):
    for sol in deformations.values():
        assert check_module_axioms(assemble_deformation(sol), 3).passed


def test_unknown_family():
    with pytest.raises(SpecError):
        derive_deformation("RC-x0")
