from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superalg.algebra.builtins import builtin_algebra
from superalg.algebra.core import Generator
from superalg.errors import SpecError
from superalg.field import Scalar
from superalg.modules.builtins import BUILTIN_MODULES, builtin_module
from superalg.modules.intertwiner import check_intertwiner, find_diagonal_intertwiner, restrict_to_virasoro
from superalg.modules.spec import (
    ActionRule,
    ActionSummand,
    BasisFamily,
    BasisVector,
    Guard,
    ModuleSpec,
    ModuleVector,
    act,
    axiom_defect,
    check_module_axioms,
    joint_weight,
    same_module_structure,
    specialize_module,
)
from superalg.modules.submodules import (
    NotInvariant,
    WeightCollision,
    find_diagonal_submodules,
    quotient_module,
    submodule_spec,
)

a, b, i, j = Scalar.vars("a b i j")
X0 = BasisVector("x", 0)
generic = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def _mutated_ra():
    ra = builtin_module("RA_ab")
    rules = tuple(
        ActionRule("Gm", "y", (ActionSummand(2 * (a - j + 2 * i * b), "x"),)) if r.generator == "Gm" else r
        for r in ra.rules
    )
    return ModuleSpec("RA_mutated", ra.algebra, ra.parameters, ra.basis, rules)


def test_ra_actions_by_hand():
    ra = builtin_module("RA_ab")
    # G^+_{-1} x_0 = y_{-1}, then G^-_1 y_{-1} = 2(a+2+2b) x_0
    y = act(ra, ("Gp", -1), ModuleVector.basis("x", 0))
    assert y == ModuleVector.basis("y", -1)
    assert act(ra, ("Gm", 1), y) == ModuleVector({X0: 2 * (a + 2 + 2 * b)})
    assert act(ra, ("Gm", 1), ModuleVector.basis("x", 0)).is_zero()


def test_anticommutator_on_x0_matches_bracket():
    ra = builtin_module("RA_ab")
    # {G^-_1, G^+_{-1}} = 2L_0 - 2H_0 on x_0
    expected = 2 * a + 2 * (2 * b + 2)
    assert axiom_defect(ra, ("Gm", 1), ("Gp", -1), X0) == {}
    l0 = ra.act_basis(("L", 0), X0)[X0]
    h0 = ra.act_basis(("H", 0), X0)[X0]
    assert 2 * l0 - 2 * h0 == expected


@pytest.mark.parametrize("name", sorted(BUILTIN_MODULES))
def test_builtin_modules_satisfy_axioms(name):
    assert check_module_axioms(builtin_module(name), 2).passed


def test_mutated_odd_action_fails_with_witness():
    rep = check_module_axioms(_mutated_ra(), 2)
    assert not rep.passed
    hit = [v for v in rep.violations if v.witness == (Generator("Gm", 1), Generator("Gp", -1), X0)]
    assert hit
    assert hit[0].residual == ModuleVector({X0: 2})


def test_defect_of_mutation_by_hand():
    # the mutation drops 2i from the coefficient, so at i = 1 the image of
    # y_{-1} loses 2 x_0 and [G^-_1, G^+_{-1}] x_0 exceeds the action by 2 x_0
    assert axiom_defect(_mutated_ra(), ("Gm", 1), ("Gp", -1), X0) == {X0: Scalar.of(2)}


def test_specialization_and_weights():
    ra = specialize_module(builtin_module("RA_ab"), {"a": Fraction(1, 2), "b": Fraction(1, 3)})
    assert ra.parameters == ()
    w = joint_weight(ra, ("y", 2))
    assert w.l0 == Scalar.of("1/2") - 2
    assert w.h0 == -(Scalar.of("2/3") + 1)
    assert w.parity == 1


def test_specialize_unknown_parameter():
    with pytest.raises(SpecError):
        specialize_module(builtin_module("A_ab"), {"q": 1})


def test_uncovered_guard_rejected():
    vir = builtin_algebra("virasoro")
    with pytest.raises(SpecError, match="uncovered"):
        ModuleSpec("bad", vir, (), (BasisFamily("x"),), (ActionRule("L", "x", (ActionSummand(-j, "x"),), Guard.parse("j!=0")),))


def test_overlapping_guard_rejected():
    vir = builtin_algebra("virasoro")
    rules = (
        ActionRule("L", "x", (ActionSummand(-j, "x"),)),
        ActionRule("L", "x", (ActionSummand(i, "x"),), Guard.parse("j=0")),
    )
    with pytest.raises(SpecError, match="overlapping"):
        ModuleSpec("bad", vir, (), (BasisFamily("x"),), rules)


def test_parity_violation_rejected():
    ramond = builtin_algebra("ramond-n2")
    with pytest.raises(SpecError, match="parity"):
        ModuleSpec("bad", ramond, (), (BasisFamily("x"),), (ActionRule("Gp", "x", (ActionSummand(1, "x"),)),))


@settings(max_examples=10)
@given(generic, generic)
def test_ra_axioms_at_random_points(av, bv):
    ra = specialize_module(builtin_module("RA_ab"), {"a": av, "b": bv})
    assert check_module_axioms(ra, 2).passed


@settings(max_examples=10)
@given(generic, generic)
def test_rb_mutation_always_detected(av, bv):
    rb = builtin_module("RB_ab")
    rules = tuple(
        ActionRule(r.generator, r.basis, tuple(ActionSummand(s.coefficient + 1, s.target) for s in r.summands))
        if r.generator == "H" and r.basis == "y" else r
        for r in rb.rules
    )
    bad = specialize_module(ModuleSpec("RB_bad", rb.algebra, rb.parameters, rb.basis, rules), {"a": av, "b": bv})
    assert not check_module_axioms(bad, 2).passed


# -- submodules and quotients -------------------------------------------------


def test_generic_ra_is_irreducible():
    rep = find_diagonal_submodules(builtin_module("RA_ab"), {"a": Fraction(1, 2), "b": Fraction(1, 3)})
    assert rep.irreducible


def test_ra_codimension_one_submodule():
    rep = find_diagonal_submodules(builtin_module("RA_ab"), {"a": 0, "b": -1})
    assert len(rep.submodules) == 1
    assert rep.descriptions[0] == {"x": "all except [0]", "y": "all"}
    assert X0 not in rep.submodules[0]


def test_ra_one_dimensional_submodule():
    rep = find_diagonal_submodules(builtin_module("RA_ab"), {"a": 0, "b": Fraction(-1, 2)})
    assert rep.submodules == [[BasisVector("y", 0)]]


def test_weight_collision_raises():
    # A_{0,0} over Virasoro alone: H is absent, so x_k only carry L_0 = -k;
    # two copies of the same family collide
    vir = builtin_algebra("virasoro")
    rules = (
        ActionRule("L", "x", (ActionSummand(-j + i, "x"),)),
        ActionRule("L", "z", (ActionSummand(-j + i, "z"),)),
    )
    mod = ModuleSpec("twice", vir, (), (BasisFamily("x"), BasisFamily("z")), rules)
    with pytest.raises(WeightCollision):
        find_diagonal_submodules(mod)


def test_quotients_pass_axioms():
    ra = builtin_module("RA_ab")
    q1 = quotient_module(ra, {"x": Guard.parse("j!=0"), "y": Guard()}, {"a": 0, "b": -1})
    assert [f.name for f in q1.basis] == ["x"]
    assert check_module_axioms(q1, 3).passed
    q2 = quotient_module(ra, {"y": Guard.parse("j=0")}, {"a": 0, "b": Fraction(-1, 2)})
    assert check_module_axioms(q2, 3).passed
    assert not q2.family("y").supports(0)


def test_quotient_by_non_invariant_span():
    with pytest.raises(NotInvariant) as err:
        quotient_module(builtin_module("RA_ab"), {"x": Guard.parse("j=0")}, {"a": 0, "b": -1})
    assert err.value.witness[1] == X0


def test_submodule_spec_passes_axioms():
    ra = specialize_module(builtin_module("RA_ab"), {"a": 0, "b": Fraction(-1, 2)})
    sub = submodule_spec(ra, {"y": Guard.parse("j=0")})
    assert check_module_axioms(sub, 3).passed


# -- isomorphisms and restriction ----------------------------------------------


SAMPLES = [(Fraction(1, 3), Fraction(1, 4)), (Fraction(-2, 5), Fraction(3, 7)), (Fraction(5, 2), Fraction(-1, 3))]


@pytest.mark.parametrize("av, bv", SAMPLES)
def test_ra_isomorphic_to_primed_shift(av, bv):
    m1, m2 = builtin_module("RA_ab"), builtin_module("RAp_ab")
    phi = find_diagonal_intertwiner(m1, m2, ({"a": av, "b": bv}, {"a": av, "b": bv + Fraction(1, 2)}))
    assert phi is not None and phi.family_map == {"x": "y", "y": "x"}
    s1 = specialize_module(m1, {"a": av, "b": bv})
    s2 = specialize_module(m2, {"a": av, "b": bv + Fraction(1, 2)})
    assert check_intertwiner(s1, s2, phi, 3)


def test_ra_and_rb_not_isomorphic():
    pts = {"a": Fraction(1, 3), "b": Fraction(1, 4)}
    assert find_diagonal_intertwiner(builtin_module("RA_ab"), builtin_module("RB_ab"), pts) is None


def test_wrong_shift_not_isomorphic():
    pts = ({"a": Fraction(1, 3), "b": Fraction(1, 4)}, {"a": Fraction(1, 3), "b": Fraction(1, 4)})
    assert find_diagonal_intertwiner(builtin_module("RA_ab"), builtin_module("RAp_ab"), pts) is None


def test_restriction_to_virasoro():
    even, odd = restrict_to_virasoro(builtin_module("RA_ab"))
    assert (even.pattern, even.a, even.b) == ("A_ab", a, b)
    assert (odd.pattern, odd.a, odd.b) == ("A_ab", a, b + Scalar.of("1/2"))
    assert same_module_structure(even.module, builtin_module("A_ab"))
    even_d, _ = restrict_to_virasoro(builtin_module("RA_alpha"))
    assert even_d.pattern == "deformed"
