"""Exact Gaussian elimination over the Scalar field."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from .scalar import ONE_S, ZERO_S, Scalar


@dataclass
class LinearSystem:
    """Rows ``sum(coeffs[u] * u) = constant`` over declared unknowns."""

    unknowns: list
    rows: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self._declared = set(self.unknowns)
        if len(self._declared) != len(self.unknowns):
            raise ValueError("duplicate unknowns")
        for coeffs, _ in self.rows:
            self._check(coeffs)
        if self.labels and len(self.labels) != len(self.rows):
            raise ValueError("labels must match rows")

    def _check(self, coeffs):
        bad = [u for u in coeffs if u not in self._declared]
        if bad:
            raise KeyError(f"undeclared unknowns {bad}")

    def add_row(self, coeffs: Mapping[Hashable, object], constant=0, label=None) -> None:
        coeffs = {u: Scalar.of(c) for u, c in coeffs.items()}
        self._check(coeffs)
        if self.labels or label is not None:
            self.labels.extend([None] * (len(self.rows) - len(self.labels)))
            self.labels.append(label)
        self.rows.append(({u: c for u, c in coeffs.items() if c}, Scalar.of(constant)))


@dataclass
class SolutionSpace:
    """Affine solution set: ``particular + span(homogeneous_basis)``.

    ``consistent`` is False for an inconsistent system; then
    ``inconsistent_row`` is the index of the first row that exposed it.
    """

    unknowns: list
    particular: dict
    homogeneous_basis: list
    consistent: bool = True
    inconsistent_row: int | None = None
    pivots: dict = field(default_factory=dict, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.homogeneous_basis)

    def value(self, vec: Mapping, u) -> Scalar:
        return vec.get(u, ZERO_S)

    def forced_zero(self, u) -> bool:
        """True when every solution has coordinate ``u`` equal to zero."""
        if not self.consistent:
            return True
        if self.particular.get(u, ZERO_S):
            return False
        return all(not b.get(u, ZERO_S) for b in self.homogeneous_basis)

    def parametrize(self, free: Sequence, names: Sequence[str] | None = None) -> dict:
        """Express every unknown in terms of the chosen free coordinates.

        ``free`` must index an invertible minor of the homogeneous basis.
        Returns ``{unknown: Scalar}`` linear in variables ``names``.
        """
        k = self.dimension
        if len(free) != k:
            raise ValueError(f"need {k} free coordinates, got {len(free)}")
        names = list(names or [str(f) for f in free])
        # basis' = M^{-1} basis, where M[r][c] = basis[r][free[c]]
        mat = [[b.get(f, ZERO_S) for f in free] for b in self.homogeneous_basis]
        inv = _invert(mat)
        syms = [Scalar.var(n) for n in names]
        out = {}
        for u in self.unknowns:
            val = self.particular.get(u, ZERO_S)
            for c in range(k):
                coef = ZERO_S
                for r in range(k):
                    if inv[c][r]:
                        coef = coef + inv[c][r] * self.homogeneous_basis[r].get(u, ZERO_S)
                if coef:
                    val = val + coef * syms[c]
            out[u] = val
        return out


def _invert(mat):
    n = len(mat)
    aug = [list(row) + [ONE_S if i == j else ZERO_S for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("chosen free coordinates do not parametrize the solution space")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    # aug = [I | M^{-1}]; a solution with free values s is s M^{-1} B
    return [row[n:] for row in aug]


class _Echelon:
    """Incremental reduced row echelon form."""

    def __init__(self, unknowns):
        self.order = {u: k for k, u in enumerate(unknowns)}
        self.rows: dict = {}  # pivot unknown -> (coeffs, constant), pivot coeff 1

    def reduce(self, coeffs: dict, const: Scalar):
        coeffs = dict(coeffs)
        for u in [u for u in coeffs if u in self.rows]:
            f = coeffs.get(u)
            if not f:
                continue
            pc, pk = self.rows[u]
            for v, c in pc.items():
                nv = coeffs.get(v, ZERO_S) - f * c
                if nv:
                    coeffs[v] = nv
                else:
                    coeffs.pop(v, None)
            const = const - f * pk
        return coeffs, const

    def insert(self, coeffs: dict, const: Scalar) -> str:
        """Add a row; returns 'new', 'redundant' or 'inconsistent'."""
        coeffs, const = self.reduce(coeffs, const)
        if not coeffs:
            return "inconsistent" if const else "redundant"
        piv = min(coeffs, key=self._pivot_key(coeffs))
        inv = coeffs[piv].inverse()
        coeffs = {v: c * inv for v, c in coeffs.items()}
        coeffs[piv] = ONE_S
        const = const * inv
        for u, (pc, pk) in list(self.rows.items()):
            f = pc.get(piv)
            if not f:
                continue
            new = dict(pc)
            for v, c in coeffs.items():
                nv = new.get(v, ZERO_S) - f * c
                if nv:
                    new[v] = nv
                else:
                    new.pop(v, None)
            self.rows[u] = (new, pk - f * const)
        self.rows[piv] = (coeffs, const)
        return "new"

    def _pivot_key(self, coeffs):
        order = self.order
        # first unknown in declaration order; constants preferred as pivots
        return lambda u: (not coeffs[u].is_constant(), order[u])


def _row_weight(row) -> tuple:
    coeffs, _ = row
    return (sum(not c.is_constant() for c in coeffs.values()), len(coeffs))


def solve_linear(system: LinearSystem) -> SolutionSpace:
    """Reduce the system; rows with constant coefficients are eliminated first,
    which keeps fill-in of symbolic entries small."""
    ech = _Echelon(system.unknowns)
    order = sorted(range(len(system.rows)), key=lambda k: _row_weight(system.rows[k]))
    for k in order:
        coeffs, const = system.rows[k]
        if ech.insert(coeffs, const) == "inconsistent":
            return SolutionSpace(list(system.unknowns), {}, [], consistent=False, inconsistent_row=k)
    return _space(system.unknowns, ech)


def _space(unknowns, ech: _Echelon) -> SolutionSpace:
    particular = {}
    for p, (_, const) in ech.rows.items():
        if const:
            particular[p] = const
    free = [u for u in unknowns if u not in ech.rows]
    basis = []
    for f in free:
        vec = {f: ONE_S}
        for p, (pc, _) in ech.rows.items():
            c = pc.get(f)
            if c:
                vec[p] = -c
        basis.append(vec)
    return SolutionSpace(list(unknowns), particular, basis, pivots=dict(ech.rows))


def residual(system: LinearSystem, assignment: Mapping) -> list:
    """Row residuals ``lhs - constant`` under an assignment."""
    out = []
    for coeffs, const in system.rows:
        total = -const
        for u, c in coeffs.items():
            v = assignment.get(u)
            if v:
                total = total + c * v
        out.append(total)
    return out
