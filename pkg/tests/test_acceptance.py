"""Acceptance criteria 1-12, each at its stated window.

Every test prints a ``criterion N: PASS`` or ``criterion N: FAIL`` line
straight to the terminal, so the lines appear even under captured output.
"""

import json
import time
from contextlib import contextmanager
from fractions import Fraction
from importlib import resources

import pytest

from superalg.algebra.builtins import BUILTIN_ALGEBRAS, builtin_algebra
from superalg.algebra.core import check_jacobi, check_rescaled_match, specialize
from superalg.classification.branches import (
    assemble_family,
    branch_bprime,
    branch_polynomial,
    generic_families,
    scan_side_conditions,
    solve_coefficient_shapes,
)
from superalg.classification.deformation import DEFORMATION_FAMILIES, assemble_deformation, derive_deformation
from superalg.classification.subcases import eliminate_h_subcases
from superalg.cli import run_command
from superalg.cocycle import extend_with_cocycle, solve_central_extensions
from superalg.dsl import parse
from superalg.extension import assemble_extension, derive_two_odd_constraints, matches_tilde_l
from superalg.field import Scalar
from superalg.modules.builtins import BUILTIN_MODULES, builtin_module
from superalg.modules.intertwiner import check_intertwiner, find_diagonal_intertwiner
from superalg.modules.spec import (
    ActionRule,
    ActionSummand,
    BasisVector,
    Guard,
    ModuleSpec,
    check_module_axioms,
    same_module_structure,
    specialize_module,
)
from superalg.modules.submodules import find_diagonal_submodules, quotient_module, submodule_spec

a, b, c, d, i, j = Scalar.vars("a b c d i j")
h1, gp0 = Scalar.vars("h1 gp0")
HALF = Scalar.of("1/2")


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(n):
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}")

    return run


def test_criterion_01_jacobi_suite(criterion):
    with criterion(1):
        start = time.perf_counter()
        for name in ("ramond-n2", "hv-tilde0", "tilde-L", "hat-L", "virasoro"):
            rep = check_jacobi(builtin_algebra(name), 6)
            assert rep.passed and not rep.violations, name
        assert "b" in builtin_algebra("tilde-L").parameters and "b" in builtin_algebra("hat-L").parameters
        assert time.perf_counter() - start < 30


def test_criterion_02_rescaled_specialization(criterion):
    with criterion(2):
        hat = specialize(builtin_algebra("hat-L"), {"b": HALF})
        assert check_rescaled_match(builtin_algebra("ramond-n2"), hat, 2, {"c_H": c / 3}).passed


def test_criterion_03_central_extensions(criterion):
    with criterion(3):
        witt = solve_central_extensions(builtin_algebra("witt"), 6)
        assert witt.dimension == 1
        assert witt.closed_forms == {"L,L": (i**3 - i) / 6}
        ext = solve_central_extensions(builtin_algebra("tilde-L"), 6)
        assert ext.dimension == 1
        cf = ext.closed_forms
        assert cf["H,H"] == i
        assert cf["L,L"] == (i**3 - i) / 6 * (6 * (b - b * b))
        assert cf["L,H"] == i * (i - 1) / 2 * (1 - 2 * b)
        assert cf["Gm,Gp"] == (b * b - b) / 2 + (i * (i + 1) / 2 - i * b)
        hat = extend_with_cocycle(builtin_algebra("tilde-L"), cf, name="hat-L")
        assert hat.same_structure(builtin_algebra("hat-L"))


def test_criterion_04_two_odd_extension(criterion):
    with criterion(4):
        rep = derive_two_odd_constraints(3)
        names = rep.fact_names()
        for fact in ("f_1 + f_2 = 0", "a^+ = a^- = 0", "b^+ + b^- = 1", "a_{ij} = d", "b_{ij} = d(-i+(i+j)b)"):
            assert fact in names
        s = rep.structure
        assert s["f_1"] + s["f_2"] == 0 and s["a^+"] == 0 and s["a^-"] == 0 and s["b^+"] + s["b^-"] == 1
        assert rep.closed_forms["a_ij"] == d
        assert rep.closed_forms["b_ij"] == d * (-i + (i + j) * s["b^-"])
        assert matches_tilde_l(rep)
        assert assemble_extension(rep, d=1, name="tilde-L").same_structure(builtin_algebra("tilde-L"))


def _mutated_ra():
    ra = builtin_module("RA_ab")
    rules = []
    for r in ra.rules:
        if (r.generator, r.basis) == ("Gm", "y"):
            r = ActionRule("Gm", "y", (ActionSummand(2 * (a - j + 2 * i * b), "x"),), r.guard)
        rules.append(r)
    return ModuleSpec("RA_mutated", ra.algebra, ra.parameters, ra.basis, tuple(rules))


def test_criterion_05_module_axioms(criterion):
    with criterion(5):
        assert len(BUILTIN_MODULES) == 11
        for name in BUILTIN_MODULES:
            mod = builtin_module(name)
            assert mod.parameters, name  # symbolic parameters
            assert check_module_axioms(mod, 4).passed, name
        bad = check_module_axioms(_mutated_ra(), 4)
        assert not bad.passed
        witness = bad.violations[0].witness
        assert len(witness) == 3 and bad.violations[0].residual


def test_criterion_06_branch_equation(criterion):
    with criterion(6):
        roots = branch_bprime(b).roots
        assert len(roots) == 4
        assert set(roots) == {b + HALF, -(b + HALF), b - HALF, -b - 3 * HALF}
        for r in roots:
            assert branch_polynomial(b, r).is_zero()
        # independent expansion of 4 j^2 t (t + 2b' + 1), t = b'^2 - (b+1/2)^2
        for r in roots:
            t = r * r - (b + HALF) ** 2
            assert (4 * j * j * t * (t + 2 * r + 1)).is_zero()


def test_criterion_07_shape_classification(criterion):
    with criterion(7):
        fams = generic_families(4)
        assert [f.label for f in fams] == ["RA", "RB", "RAp", "RBp"]
        names = {"RA": "RA_ab", "RB": "RB_ab", "RAp": "RAp_ab", "RBp": "RBp_ab"}
        for fam in fams:
            assert same_module_structure(assemble_family(fam, 4), builtin_module(names[fam.label]))
        cands = [f"{k}/4" for k in range(-8, 9)]
        minus = scan_side_conditions("minus", cands, window=4)
        shift = scan_side_conditions("shift", cands, window=4)
        assert minus.forced == [Scalar.of(-1), Scalar.of("-1/2")]
        assert shift.forced == [Scalar.of("-3/2"), Scalar.of(-1)]
        (s2,) = solve_coefficient_shapes(-1, HALF, 4)
        (s3,) = solve_coefficient_shapes("-3/2", 0, 4)
        assert s2.condition == s3.condition == "a not in Z"


def test_criterion_08_subcase_elimination(criterion):
    with criterion(8):
        table = eliminate_h_subcases(3)
        assert table.survivors("5") == ["5.1"]
        assert table.verdict("5.1").forced_f == -2 * b - 2
        for cid in ("5.2", "5.3", "5.4", "5.5"):
            v = table.verdict(cid)
            assert not v.surviving and v.witness
        assert table.survivors("6") == ["6.2", "6.3"]


def test_criterion_09_submodules_and_quotients(criterion):
    with criterion(9):
        ra = builtin_module("RA_ab")
        assert find_diagonal_submodules(ra, {"a": HALF, "b": Fraction(1, 3)}).irreducible
        rep = find_diagonal_submodules(ra, {"a": 0, "b": -1})
        assert len(rep.submodules) == 1
        assert rep.descriptions[0] == {"x": "all except [0]", "y": "all"}
        rep = find_diagonal_submodules(ra, {"a": 0, "b": -HALF})
        assert rep.submodules == [[BasisVector("y", 0)]]
        q1 = quotient_module(ra, {"x": Guard.parse("j!=0"), "y": Guard()}, {"a": 0, "b": -1})
        q2 = quotient_module(ra, {"y": Guard.parse("j=0")}, {"a": 0, "b": -HALF})
        assert check_module_axioms(q1, 4).passed and check_module_axioms(q2, 4).passed
        sub = submodule_spec(specialize_module(ra, {"a": 0, "b": -HALF}), {"y": Guard.parse("j=0")})
        assert check_module_axioms(sub, 4).passed


def _same_actions(m1, m2, window):
    gens = m2.algebra.window_generators(window, include_central=False)
    return all(m1.act_basis(g, v) == m2.act_basis(g, v) for g in gens for v in m2.basis_vectors(window))


def test_criterion_10_deformations(criterion):
    with criterion(10):
        point = {"alpha": Scalar.of("2/3"), "beta": Scalar.of("-3/5")}
        alpha, beta = point["alpha"], point["beta"]
        norms = {"RA-x0": {"h1": 1, "gp0": -alpha}, "RA-y0": {"h1": 1, "gp0": beta},
                 "RB-x0": {"h1": 1, "gm0": alpha}, "RB-y0": {"h1": 1, "gm0": -beta}}
        for name, norm in norms.items():
            sol = derive_deformation(name, 4)
            assert sol.dimension == 2 and sol.matches_builtin, name
            fixed = specialize_module(assemble_deformation(sol), norm)
            target = builtin_module(DEFORMATION_FAMILIES[name].builtin)
            target = specialize_module(target, {k: v for k, v in point.items() if k in target.parameters})
            assert _same_actions(fixed, target, 3), name
            if name == "RA-x0":
                cf = sol.closed_forms
                assert cf["l"] == i * i / 2 * h1 - i * gp0
                assert cf["h"] == i * h1
                assert cf["gm"] == 0


def test_criterion_11_isomorphisms(criterion):
    with criterion(11):
        samples = [(Fraction(1, 3), Fraction(1, 4)), (Fraction(-2, 5), Fraction(3, 7)), (Fraction(5, 2), Fraction(-1, 3))]
        for left, right in (("RA_ab", "RAp_ab"), ("RB_ab", "RBp_ab")):
            m1, m2 = builtin_module(left), builtin_module(right)
            for av, bv in samples:
                p1, p2 = {"a": av, "b": bv}, {"a": av, "b": bv + Fraction(1, 2)}
                phi = find_diagonal_intertwiner(m1, m2, (p1, p2))
                assert phi is not None, (left, av, bv)
                assert check_intertwiner(specialize_module(m1, p1), specialize_module(m2, p2), phi, 3)
        for av, bv in samples:
            pts = {"a": av, "b": bv}
            assert find_diagonal_intertwiner(builtin_module("RA_ab"), builtin_module("RB_ab"), pts) is None


MUTATED = """algebra bad {
  params: ;
  generator L even;
  generator c even central;
  bracket L(i) L(j) -> (i-j) * L(i+j) + (i^2/12) * c(0) when i+j=0;
}
"""


def test_criterion_12_dsl_and_cli(criterion, tmp_path):
    with criterion(12):
        data = resources.files("superalg") / "data"
        for name in BUILTIN_ALGEBRAS:
            (spec,) = parse(data.joinpath(f"{name}.sag").read_text(encoding="utf-8"))
            assert spec.same_structure(builtin_algebra(name))
        for name in BUILTIN_MODULES:
            (spec,) = parse(data.joinpath(f"{name}.sag").read_text(encoding="utf-8"))
            assert same_module_structure(spec, builtin_module(name))
        argv = ["solve-cocycles", "-A", "witt", "--window", "4", "--format", "json"]
        first, second = run_command(argv).payload(), run_command(argv).payload()
        assert first == second and json.loads(first)["status"] == "result"
        bad = tmp_path / "bad.sag"
        bad.write_text(MUTATED, encoding="utf-8")
        assert run_command(["check-jacobi", "-A", "virasoro", "--window", "3"]).code == 0
        assert run_command(["check-jacobi", "-A", str(bad), "--window", "3"]).code == 1
        assert run_command(["check-jacobi", "-A", "virasoro", "--window", "0"]).code == 2
        assert run_command(["check-jacobi", "-A", str(tmp_path / "missing.sag")]).code == 2
