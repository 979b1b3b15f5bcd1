import pytest

from superalg.algebra.builtins import HAT_CENTRAL_TERMS, builtin_algebra
from superalg.algebra.core import check_jacobi, specialize
from superalg.cocycle import build_cocycle_system, extend_with_cocycle, solve_central_extensions
from superalg.errors import SpecError
from superalg.extension import (
    assemble_extension,
    check_single_odd_trivial,
    derive_two_odd_constraints,
    matches_tilde_l,
)
from superalg.field import Scalar

i, b, d = Scalar.vars("i b d")


@pytest.fixture(scope="module")
def tilde_ext():
    return solve_central_extensions(builtin_algebra("tilde-L"), 6)


@pytest.fixture(scope="module")
def two_odd():
    return derive_two_odd_constraints(3)


def test_witt_cocycle_is_one_dimensional():
    ext = solve_central_extensions(builtin_algebra("witt"), 6)
    assert ext.dimension == 1
    assert ext.closed_forms == {"L,L": (i**3 - i) / 6}


def test_witt_cocycle_values_follow_recursion():
    # l_k = (k+1)/(k-2) l_{k-1} from l_2 = 1
    ext = solve_central_extensions(builtin_algebra("witt"), 6)
    vals = {u.left.index: v for u, v in ext.basis[0].items()}
    for k in range(3, 7):
        assert vals[k] == vals[k - 1] * (k + 1) / (k - 2)


def test_tilde_l_dimension(tilde_ext):
    assert tilde_ext.dimension == 1
    assert not tilde_ext.fit_failures


def test_tilde_l_closed_forms(tilde_ext):
    cf = tilde_ext.closed_forms
    c_l = 6 * (b - b * b)  # c_L in units of c_H
    c_hl = 1 - 2 * b
    c_g = (b * b - b) / 2
    assert cf["H,H"] == i
    assert cf["L,L"] == (i**3 - i) / 6 * c_l
    assert cf["L,H"] == i * (i - 1) / 2 * c_hl
    assert cf["Gm,Gp"] == c_g + (i * (i + 1) / 2 - i * b)
    assert set(tilde_ext.vanishing_pairs) == {"Gm,Gm", "Gp,Gp"}


def test_tilde_l_closed_forms_match_hat_l(tilde_ext):
    for (left, right), term in HAT_CENTRAL_TERMS.items():
        assert tilde_ext.closed_forms[f"{left},{right}"] == term


def test_extended_algebra_equals_hat_l(tilde_ext):
    ext = extend_with_cocycle(builtin_algebra("tilde-L"), tilde_ext.closed_forms, name="hat-L")
    assert ext.same_structure(builtin_algebra("hat-L"))


def test_hv_tilde0_has_three_cocycles():
    ext = solve_central_extensions(builtin_algebra("hv-tilde0"), 4)
    assert ext.dimension == 3


def test_cocycle_system_rejects_central_input():
    with pytest.raises(SpecError):
        build_cocycle_system(builtin_algebra("virasoro"), 4)


def test_small_window_rejected():
    with pytest.raises(ValueError):
        solve_central_extensions(builtin_algebra("witt"), 2)


def test_two_odd_fact_sequence(two_odd):
    names = two_odd.fact_names()
    for fact in ["f_1 + f_2 = 0", "a^+ = a^- = 0", "b^+ + b^- = 1", "a_{ij} = d", "b_{ij} = d(-i+(i+j)b)"]:
        assert fact in names
    assert names.index("f_1 + f_2 = 0") < names.index("b^+ + b^- = 1")


def test_two_odd_structure_values(two_odd):
    s = two_odd.structure
    assert s["f_1"] == 1 and s["f_2"] == -1
    assert s["a^+"] == 0 and s["a^-"] == 0
    assert s["b^+"] + s["b^-"] == 1
    i_, j_ = Scalar.vars("i j")
    assert two_odd.closed_forms["a_ij"] == d
    assert two_odd.closed_forms["b_ij"] == d * (-i_ + (i_ + j_) * s["b^-"])


def test_assembled_extension_is_tilde_l(two_odd):
    assert matches_tilde_l(two_odd)
    alg = assemble_extension(two_odd, d=2, name="scaled")
    assert not alg.same_structure(builtin_algebra("tilde-L"))
    # any nonzero scale still gives a superalgebra
    assert check_jacobi(specialize(alg, {"b": 3}), 2).passed


def test_single_odd_family_is_trivial():
    assert check_single_odd_trivial(3).passed
    assert not check_single_odd_trivial(3, f=0).passed
