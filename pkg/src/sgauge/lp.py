"""Exact rational linear programming: two-phase tableau simplex.

The default pivot rule takes the largest reduced cost (lowest index on ties)
and falls back to Bland's lowest-index rule after ``DEGENERATE_LIMIT``
consecutive degenerate pivots, which keeps the anti-cycling guarantee.
``rule="bland"`` uses Bland's rule throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .geometry import ZERO, Q, vec

LE = "<="
EQ = "="

DEGENERATE_LIMIT = 50

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """Maximize ``objective . x`` subject to ``a_i . x (<= | =) b_i``.

    Variables are free unless flagged in ``nonneg``.  Constraint rows may be
    given densely (a sequence) or sparsely (a ``{index: coefficient}`` dict).
    """

    objective: tuple
    constraints: tuple
    nonneg: tuple = field(default=None)

    def __post_init__(self):
        n = len(self.objective)
        if n < 1:
            raise ValueError("a linear program needs at least one variable")
        object.__setattr__(self, "objective", vec(self.objective))
        rows = []
        for a, rel, b in self.constraints:
            if rel not in (LE, EQ):
                raise ValueError(f"unknown relation {rel!r}")
            if isinstance(a, dict):
                if any(not 0 <= j < n for j in a):
                    raise ValueError("constraint refers to a missing variable")
                a = {j: Q(v) for j, v in a.items() if v != 0}
            else:
                if len(a) != n:
                    raise ValueError("constraint width does not match the variable count")
                a = {j: Q(v) for j, v in enumerate(a) if v != 0}
            rows.append((a, rel, Q(b)))
        object.__setattr__(self, "constraints", tuple(rows))
        nonneg = (False,) * n if self.nonneg is None else tuple(bool(x) for x in self.nonneg)
        if len(nonneg) != n:
            raise ValueError("nonneg flags do not match the variable count")
        object.__setattr__(self, "nonneg", nonneg)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence) -> bool:
        if any(flag and xj < 0 for flag, xj in zip(self.nonneg, x)):
            return False
        for a, rel, b in self.constraints:
            lhs = sum((v * x[j] for j, v in a.items()), ZERO)
            if (rel == LE and lhs > b) or (rel == EQ and lhs != b):
                return False
        return True

    def value_at(self, x: Sequence):
        return sum((c * xj for c, xj in zip(self.objective, x)), ZERO)


@dataclass(frozen=True)
class LPOutcome:
    status: str
    x: tuple | None = None
    value: object = None
    basis: tuple = ()

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def solve(lp: LinearProgram, rule: str = "dantzig") -> LPOutcome:
    if rule not in ("dantzig", "bland"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    return _Tableau(lp, bland_only=rule == "bland").run()


class _Tableau:
    def __init__(self, lp: LinearProgram, bland_only: bool = False):
        self.lp = lp
        self.bland_only = bland_only
        # standard-form columns: (original var, sign) pairs, then slacks, then artificials
        cols = []
        for j, nonneg in enumerate(lp.nonneg):
            cols.append((j, 1))
            if not nonneg:
                cols.append((j, -1))
        self.n_struct = len(cols)
        col_of = {}
        for k, (j, s) in enumerate(cols):
            col_of.setdefault(j, []).append((k, s))
        n_slack = sum(1 for _, rel, _ in lp.constraints if rel == LE)
        rows, basis = [], []
        slack = self.n_struct
        for a, rel, b in lp.constraints:
            row = [ZERO] * (self.n_struct + n_slack)
            for j, v in a.items():
                for k, s in col_of[j]:
                    row[k] = v if s > 0 else -v
            basic = None
            if rel == LE:
                row[slack] = mpq(1)
                basic = slack
                slack += 1
            if b < 0:
                row = [-x for x in row]
                b = -b
                basic = None
            row.append(b)
            rows.append(row)
            basis.append(basic)
        self.n_slack = n_slack
        self.first_art = self.n_struct + n_slack
        n_art = sum(1 for x in basis if x is None)
        width = self.first_art + n_art
        art = self.first_art
        for i, row in enumerate(rows):
            rhs = row.pop()
            row.extend([ZERO] * n_art)
            row.append(rhs)
            if basis[i] is None:
                row[art] = mpq(1)
                basis[i] = art
                art += 1
        self.rows = rows
        self.basis = basis
        self.width = width
        self.cols = cols

    def pivot(self, r, c):
        rows = self.rows
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [x * inv for x in prow]
            rows[r] = prow
        nz = [(j, y) for j, y in enumerate(prow) if y]
        for i, row in enumerate(rows):
            if i != r:
                f = row[c]
                if f:
                    for j, y in nz:
                        row[j] -= f * y
        f = self.obj[c]
        if f:
            obj = self.obj
            for j, y in nz:
                obj[j] -= f * y
        self.basis[r] = c

    def set_objective(self, costs):
        """Reduced-cost row for maximizing ``costs`` (a dict col -> cost)."""
        obj = [ZERO] * (self.width + 1)
        for c, v in costs.items():
            obj[c] = v
        for i, b in enumerate(self.basis):
            cb = costs.get(b)
            if cb:
                obj = [x - cb * y if y else x for x, y in zip(obj, self.rows[i])]
        self.obj = obj

    def iterate(self, allowed):
        """Pivot until optimal or unbounded."""
        degenerate = DEGENERATE_LIMIT if self.bland_only else 0
        while True:
            obj = self.obj
            if degenerate < DEGENERATE_LIMIT:
                c = max(range(allowed), key=obj.__getitem__)
                if obj[c] <= 0:
                    c = None
            else:
                c = next((j for j in range(allowed) if obj[j] > 0), None)
            if c is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[c]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            if not self.bland_only:
                degenerate = degenerate + 1 if best[0][0] == 0 else 0
            self.pivot(best[1], c)

    def run(self) -> LPOutcome:
        lp = self.lp
        if self.first_art < self.width:
            self.set_objective({c: mpq(-1) for c in range(self.first_art, self.width)})
            self.iterate(self.width)
            if self.obj[-1] != 0:
                return LPOutcome(INFEASIBLE)
            self._drive_out_artificials()
        costs = {}
        for k, (j, s) in enumerate(self.cols):
            if lp.objective[j]:
                costs[k] = lp.objective[j] if s > 0 else -lp.objective[j]
        self.set_objective(costs)
        status = self.iterate(self.first_art)
        if status == UNBOUNDED:
            return LPOutcome(UNBOUNDED)
        x = [ZERO] * lp.n_vars
        for i, b in enumerate(self.basis):
            if b < self.n_struct:
                j, s = self.cols[b]
                x[j] += self.rows[i][-1] * s
        x = tuple(x)
        return LPOutcome(OPTIMAL, x, lp.value_at(x), tuple(self.basis))

    def _drive_out_artificials(self):
        i = 0
        while i < len(self.rows):
            if self.basis[i] >= self.first_art:
                row = self.rows[i]
                c = next((j for j in range(self.first_art) if row[j] != 0), None)
                if c is None:
                    # redundant equality row
                    del self.rows[i]
                    del self.basis[i]
                    continue
                self.pivot(i, c)
            i += 1
