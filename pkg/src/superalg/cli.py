"""Command-line driver.

Exit codes: 0 when a check passes or a result is produced, 1 when the answer
is a violation or contradiction, 2 for usage, parse and pole errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import NamedTuple

from .algebra.builtins import BUILTIN_ALGEBRAS, builtin_algebra
from .algebra.core import AlgebraSpec, check_jacobi, specialize
from .classification.branches import (
    assemble_family,
    branch_bprime,
    branch_polynomial,
    generic_families,
    scan_side_conditions,
    solve_coefficient_shapes,
)
from .classification.deformation import DEFORMATION_FAMILIES, assemble_deformation, derive_deformation
from .classification.subcases import eliminate_h_subcases
from .cocycle import solve_central_extensions
from .dsl import parse, parse_guard, render
from .dsl.render import render_module
from .errors import SuperalgError
from .extension import StageError, derive_two_odd_constraints, matches_tilde_l
from .field import Scalar, parse_rational
from .modules.builtins import BUILTIN_MODULES, builtin_module
from .modules.intertwiner import check_intertwiner, find_diagonal_intertwiner
from .modules.spec import ModuleSpec, check_module_axioms, same_module_structure, specialize_module
from .modules.submodules import NotInvariant, find_diagonal_submodules, quotient_module
from .report import Report, emit_report

MIN_WINDOW = {
    "check-jacobi": 1,
    "check-module": 2,
    "solve-cocycles": 3,
    "classify-extension": 1,
    "classify-modules": 3,
    "eliminate-subcases": 3,
    "find-submodules": 1,
    "quotient": 2,
    "check-isomorphism": 1,
    "derive-deformation": 3,
}

# b values probed for the side conditions of the two non-generic branches
SCAN_CANDIDATES = tuple(f"{k}/4" for k in range(-8, 9))

FAMILY_BUILTINS = {"RA": "RA_ab", "RB": "RB_ab", "RAp": "RAp_ab", "RBp": "RBp_ab"}


class UsageError(SuperalgError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- argument handling -------------------------------------------------------


def _binding(text: str) -> tuple:
    name, sep, value = text.partition("=")
    name = name.strip()
    if not sep or not name:
        raise UsageError(f"expected name=p/q, got {text!r}")
    try:
        return name, parse_rational(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None


def _rational_arg(text: str | None, flag: str):
    if text is None:
        return None
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-A", "--algebra")
    p.add_argument("-M", "--module", action="append", default=[])
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--band", type=int, default=6)
    p.add_argument("--set", action="append", default=[], metavar="NAME=P/Q")
    p.add_argument("--b")
    p.add_argument("--bprime")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="superalg", description="Checks and solvers for graded superalgebras and their modules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in (*MIN_WINDOW, "branch-bprime"):
        p = sub.add_parser(name)
        _common(p)
        if name == "quotient":
            p.add_argument("--remove", action="append", default=[], metavar="FAMILY:GUARD")
        if name == "derive-deformation":
            p.add_argument("--family", required=True, choices=sorted(DEFORMATION_FAMILIES))
    p = sub.add_parser("parse")
    _common(p)
    p.add_argument("file")
    return parser


class _Context:
    """Loaded definitions plus the bindings applied to them."""

    def __init__(self, args):
        self.args = args
        self.global_set = dict(_binding(s) for s in args.set)
        self.used: set = set()
        self.algebras: dict = {}

    def _apply(self, params, bindings: dict) -> dict:
        chosen = {k: v for k, v in self.global_set.items() if k in params}
        self.used |= set(chosen)
        chosen.update(bindings)
        return chosen

    def algebra(self) -> AlgebraSpec:
        ref = self.args.algebra
        if ref is None:
            raise UsageError("this command needs --algebra")
        if ref in BUILTIN_ALGEBRAS:
            alg = builtin_algebra(ref)
        else:
            alg = _single(_parse_path(ref), AlgebraSpec, ref)
        self.algebras[alg.name] = alg
        return specialize(alg, self._apply(alg.parameters, {}))

    def modules(self) -> list:
        out = []
        for ref in self.args.module:
            source, inline = _split_inline(ref)
            if source in BUILTIN_MODULES:
                mod = builtin_module(source)
            else:
                mod = _single(_parse_path(source, self.algebras), ModuleSpec, source)
            out.append(specialize_module(mod, self._apply(mod.parameters, inline)))
        return out

    def module(self) -> ModuleSpec:
        mods = self.modules()
        if len(mods) != 1:
            raise UsageError("this command needs exactly one --module")
        return mods[0]

    def check_unused(self) -> None:
        unused = sorted(set(self.global_set) - self.used)
        if unused:
            raise UsageError(f"--set names no parameter of the inputs: {', '.join(unused)}")

    def inputs(self) -> dict:
        a = self.args
        out = {}
        if a.algebra:
            out["algebra"] = a.algebra
        if a.module:
            out["modules"] = list(a.module)
        if self.global_set:
            out["set"] = {k: str(v) for k, v in sorted(self.global_set.items())}
        for key in ("b", "bprime"):
            if getattr(a, key) is not None:
                out[key] = getattr(a, key)
        if getattr(a, "remove", None):
            out["remove"] = list(a.remove)
        if getattr(a, "family", None):
            out["family"] = a.family
        if a.command == "find-submodules":
            out["band"] = a.band
        if a.command == "parse":
            out["file"] = a.file
        return out


def _split_inline(ref: str) -> tuple:
    """``NAME:a=1/3,b=3/4`` -> (NAME, bindings); plain refs have no bindings."""
    head, sep, tail = ref.rpartition(":")
    if not sep or "=" not in tail:
        return ref, {}
    return head, dict(_binding(part) for part in tail.split(",") if part.strip())


def _parse_path(path: str, algebras: dict | None = None) -> list:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path!r} is neither a built-in name nor a readable file")
    return parse(p.read_text(encoding="utf-8"), algebras)


def _single(defs: list, kind, path: str):
    found = [d for d in defs if isinstance(d, kind)]
    if not found:
        raise UsageError(f"{path} defines no {'algebra' if kind is AlgebraSpec else 'module'}")
    return found[0]


# -- commands ----------------------------------------------------------------


def _check_result(ctx, command: str, check) -> tuple:
    rep = Report(command, ctx.inputs(), check.status, check.window, [v.to_json() for v in check.violations])
    return (0 if check.passed else 1), rep


def cmd_check_jacobi(ctx):
    alg = ctx.algebra()
    ctx.check_unused()
    return _check_result(ctx, "check-jacobi", check_jacobi(alg, ctx.args.window))


def cmd_check_module(ctx):
    mod = ctx.module()
    ctx.check_unused()
    return _check_result(ctx, "check-module", check_module_axioms(mod, ctx.args.window))


def cmd_solve_cocycles(ctx):
    alg = ctx.algebra()
    ctx.check_unused()
    w = ctx.args.window
    ext = solve_central_extensions(alg, w)
    basis = [
        {str(u): str(c) for u, c in sorted(vec.items())}
        for vec in ext.basis
    ]
    sols = {
        "dimension": ext.dimension,
        "basis": basis,
        "vanishing": sorted(ext.vanishing_pairs),
        "fit_failures": sorted(ext.fit_failures),
    }
    forms = {k: str(v) for k, v in ext.closed_forms.items()}
    return 0, Report("solve-cocycles", ctx.inputs(), "result", w, [], sols, forms)


def cmd_classify_extension(ctx):
    ctx.check_unused()
    w = ctx.args.window
    try:
        dcs = derive_two_odd_constraints(w)
    except StageError as exc:
        return 1, Report("classify-extension", ctx.inputs(), "fail", w, [], {"contradiction": str(exc)})
    sols = {
        "facts": [f.to_json() for f in dcs.facts],
        "structure": {k: str(v) for k, v in dcs.structure.items()},
        "matches_tilde_L": matches_tilde_l(dcs),
    }
    forms = {k: str(v) for k, v in dcs.closed_forms.items()}
    return 0, Report("classify-extension", ctx.inputs(), "result", w, [], sols, forms)


def _b_value(ctx):
    b = _rational_arg(ctx.args.b, "--b")
    return Scalar.var("b") if b is None else Scalar.of(b)


def cmd_branch_bprime(ctx):
    ctx.check_unused()
    b = _b_value(ctx)
    bs = branch_bprime(b)
    sols = [str(r) for r in bs.roots]
    forms = {"branch_polynomial": str(branch_polynomial(b, Scalar.var("bprime")))}
    rep = Report("branch-bprime", ctx.inputs(), "result", None, [], sols, forms)
    return 0, rep


def cmd_classify_modules(ctx):
    ctx.check_unused()
    w = ctx.args.window
    if ctx.args.b is None:
        if ctx.args.bprime is not None:
            raise UsageError("--bprime needs --b")
        return _classify_generic(ctx, w)
    b = _b_value(ctx)
    bprime = _rational_arg(ctx.args.bprime, "--bprime")
    primes = [Scalar.of(bprime)] if bprime is not None else branch_bprime(b).roots
    sols = {}
    for bp in primes:
        sols[f"bprime={bp}"] = {
            side: [s.to_json() for s in solve_coefficient_shapes(b, bp, w, side=side)] for side in ("a", "b")
        }
    return 0, Report("classify-modules", ctx.inputs(), "result", w, [], sols)


def _classify_generic(ctx, w: int):
    families = generic_families(w)
    fams, forms, mismatched = {}, {}, []
    for fam in families:
        mod = assemble_family(fam, w)
        builtin = FAMILY_BUILTINS.get(fam.label)
        equal = builtin is not None and same_module_structure(mod, builtin_module(builtin))
        if not equal:
            mismatched.append(fam.label)
        entry = fam.to_json()
        entry["builtin"] = builtin
        entry["matches_builtin"] = equal
        fams[fam.label] = entry
        for k, v in fam.coefficients.items():
            forms[f"{fam.label} {k}"] = str(v)
    scans = {rel: scan_side_conditions(rel, SCAN_CANDIDATES).to_json() for rel in ("minus", "shift")}
    sols = {"families": fams, "side_conditions": scans}
    status = "fail" if mismatched or len(families) != 4 else "result"
    return (1 if status == "fail" else 0), Report("classify-modules", ctx.inputs(), status, w, [], sols, forms)


def cmd_eliminate_subcases(ctx):
    ctx.check_unused()
    w = ctx.args.window
    table = eliminate_h_subcases(w)
    sols = {
        "subcases": table.to_json()["subcases"],
        "survivors": {"5": table.survivors("5"), "6": table.survivors("6")},
    }
    return 0, Report("eliminate-subcases", ctx.inputs(), "result", w, [], sols)


def cmd_find_submodules(ctx):
    mod = ctx.module()
    ctx.check_unused()
    a = ctx.args
    rep = find_diagonal_submodules(mod, window=a.window, band=a.band)
    total = len(mod.basis_vectors(a.band))
    subs = [
        {
            "vectors": [str(v) for v in s],
            "description": d,
            "codimension_in_band": total - len(s),
        }
        for s, d in zip(rep.submodules, rep.descriptions)
    ]
    sols = {"irreducible": rep.irreducible, "submodules": subs, "weights_checked": rep.weights_checked}
    return 0, Report("find-submodules", ctx.inputs(), "result", a.window, [], sols)


def cmd_quotient(ctx):
    mod = ctx.module()
    ctx.check_unused()
    w = ctx.args.window
    if not ctx.args.remove:
        raise UsageError("quotient needs at least one --remove FAMILY:GUARD")
    removed = {}
    for item in ctx.args.remove:
        fam, sep, guard = item.partition(":")
        if not sep or not fam:
            raise UsageError(f"expected FAMILY:GUARD, got {item!r}")
        removed[fam.strip()] = parse_guard(guard)
    try:
        q = quotient_module(mod, removed, window=w)
    except NotInvariant as exc:
        viol = [{"witness": [str(w) for w in exc.witness], "residual": str(exc)}]
        return 1, Report("quotient", ctx.inputs(), "fail", w, viol, {"invariant": False})
    check = check_module_axioms(q, w)
    sols = {"invariant": True, "quotient": render_module(q).splitlines()}
    code, rep = _check_result(ctx, "quotient", check)
    rep.solutions = sols
    return code, rep


def cmd_check_isomorphism(ctx):
    mods = ctx.modules()
    ctx.check_unused()
    if len(mods) != 2:
        raise UsageError("check-isomorphism needs exactly two --module")
    w = ctx.args.window
    m1, m2 = mods
    for m in mods:
        if m.parameters:
            raise UsageError(f"bind all parameters of {m.name}: missing {list(m.parameters)}")
    phi = find_diagonal_intertwiner(m1, m2, window=w)
    if phi is None:
        return 1, Report("check-isomorphism", ctx.inputs(), "fail", w, [], {"isomorphic": False})
    ok = check_intertwiner(m1, m2, phi, w)
    scalars = {
        str(v): str(c) for v, c in sorted(phi.scalars.items(), key=lambda t: m1.vector_key(t[0]))
    }
    sols = {
        "isomorphic": ok,
        "family_map": dict(sorted(phi.family_map.items())),
        "scalars": scalars,
        "solution_dimension": phi.dimension,
    }
    return (0 if ok else 1), Report("check-isomorphism", ctx.inputs(), "pass" if ok else "fail", w, [], sols)


def cmd_derive_deformation(ctx):
    ctx.check_unused()
    w = ctx.args.window
    sol = derive_deformation(ctx.args.family, w)
    check = check_module_axioms(assemble_deformation(sol), w)
    ok = bool(sol.matches_builtin) and check.passed
    payload = sol.to_json()
    forms = payload.pop("closed_forms")
    payload["assembled_axioms"] = check.status
    return (0 if ok else 1), Report(
        "derive-deformation",
        ctx.inputs(),
        "pass" if ok else "fail",
        w,
        [v.to_json() for v in check.violations],
        payload,
        forms,
    )


def cmd_parse(ctx):
    ctx.check_unused()
    defs = parse(Path(ctx.args.file).read_text(encoding="utf-8"))
    listing = [
        {"kind": "algebra" if isinstance(d, AlgebraSpec) else "module", "name": d.name} for d in defs
    ]
    sols = {"definitions": listing, "canonical": render(defs).splitlines()}
    return 0, Report("parse", ctx.inputs(), "pass", None, [], sols)


COMMANDS = {
    "check-jacobi": cmd_check_jacobi,
    "check-module": cmd_check_module,
    "solve-cocycles": cmd_solve_cocycles,
    "classify-extension": cmd_classify_extension,
    "branch-bprime": cmd_branch_bprime,
    "classify-modules": cmd_classify_modules,
    "eliminate-subcases": cmd_eliminate_subcases,
    "find-submodules": cmd_find_submodules,
    "quotient": cmd_quotient,
    "check-isomorphism": cmd_check_isomorphism,
    "derive-deformation": cmd_derive_deformation,
    "parse": cmd_parse,
}


class CommandResult(NamedTuple):
    code: int
    report: Report | None
    error: str | None = None
    fmt: str = "text"
    out: str | None = None

    def payload(self) -> bytes:
        return emit_report(self.report, self.fmt)


def run_command(argv) -> CommandResult:
    """Run one command without touching stdout."""
    fmt, out = "text", None
    try:
        args = build_parser().parse_args(list(argv))
        fmt, out = args.format, args.out
        minimum = MIN_WINDOW.get(args.command)
        if minimum is not None and args.window < minimum:
            raise UsageError(f"--window must be at least {minimum} for {args.command}")
        if args.command == "find-submodules" and args.band < 1:
            raise UsageError("--band must be positive")
        code, report = COMMANDS[args.command](_Context(args))
        return CommandResult(code, report, None, fmt, out)
    except (SuperalgError, OSError, ValueError) as exc:
        return CommandResult(2, None, str(exc), fmt, out)
    except ZeroDivisionError as exc:
        return CommandResult(2, None, f"pole: {exc}", fmt, out)


def main(argv=None) -> int:
    res = run_command(sys.argv[1:] if argv is None else argv)
    if res.report is None:
        print(f"superalg: error: {res.error}", file=sys.stderr)
        return res.code
    data = res.payload()
    if res.out:
        Path(res.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return res.code


__all__ = ["COMMANDS", "CommandResult", "MIN_WINDOW", "UsageError", "build_parser", "main", "run_command"]
