"""Exact rational linear programming.

Minimise ``c . x`` subject to rows ``a . x >= b`` or ``a . x = b`` and
``x_j >= 0`` (or ``x_j`` free).  The engine is a two-phase simplex method on
a compact dictionary (one row per constraint, one column per non-basic
variable) with gmpy2 rationals inside; every number that leaves this module
is a :class:`fractions.Fraction`.

Pivoting uses Dantzig's rule while the objective strictly improves and falls
back to Bland's smallest-index rule as soon as a run of degenerate pivots
starts, which keeps the usual termination guarantee.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from gmpy2 import mpq

from .core import fmt_q
from .errors import DimensionMismatch, SolverError

GE = ">="
EQ = "="


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[int, Fraction], ...]  # sparse (index, value), sorted, no zeros
    relation: str
    rhs: Fraction
    label: str = ""

    def dense(self, nvars: int) -> list[Fraction]:
        row = [Fraction(0)] * nvars
        for j, v in self.coeffs:
            row[j] = v
        return row

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((v * x[j] for j, v in self.coeffs), Fraction(0))

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        return self.lhs(x) - self.rhs

    def holds(self, x: Sequence[Fraction]) -> bool:
        s = self.slack(x)
        return s == 0 if self.relation == EQ else s >= 0


def make_constraint(coeffs, relation: str, rhs, nvars: int, label: str = "") -> Constraint:
    """Build a constraint from a dense sequence or an ``{index: value}`` map."""
    if relation not in (GE, EQ):
        raise ValueError(f"relation must be '>=' or '=', got {relation!r}")
    if isinstance(coeffs, Mapping):
        items = coeffs.items()
    else:
        if len(coeffs) != nvars:
            raise DimensionMismatch(f"constraint has {len(coeffs)} coefficients, expected {nvars}")
        items = enumerate(coeffs)
    acc: dict[int, Fraction] = {}
    for j, v in items:
        if not 0 <= j < nvars:
            raise DimensionMismatch(f"coefficient index {j} outside 0..{nvars - 1}")
        acc[j] = acc.get(j, Fraction(0)) + Fraction(v)
    sparse = tuple(sorted((j, v) for j, v in acc.items() if v != 0))
    return Constraint(sparse, relation, Fraction(rhs), label)


@dataclass(frozen=True)
class LpProblem:
    nvars: int
    constraints: tuple[Constraint, ...]
    objective: tuple[Fraction, ...]
    free: tuple[bool, ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.nvars < 1:
            raise DimensionMismatch("an LP needs at least one variable")
        if len(self.objective) != self.nvars:
            raise DimensionMismatch(
                f"objective has {len(self.objective)} entries, expected {self.nvars}")
        if self.free and len(self.free) != self.nvars:
            raise DimensionMismatch("free-variable flags do not match the variable count")
        if self.names and len(self.names) != self.nvars:
            raise DimensionMismatch("variable names do not match the variable count")
        for c in self.constraints:
            if c.coeffs and c.coeffs[-1][0] >= self.nvars:
                raise DimensionMismatch(f"constraint {c.label!r} refers to a missing variable")

    def is_free(self, j: int) -> bool:
        return bool(self.free) and self.free[j]

    def name(self, j: int) -> str:
        return self.names[j] if self.names else f"x{j}"

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def dump(self) -> str:
        """Plain-text listing: objective, then one constraint per line."""

        def expr(pairs):
            terms = [f"{fmt_q(v)}*{self.name(j)}" for j, v in pairs]
            return " + ".join(terms) if terms else "0"

        lines = ["min " + expr((j, v) for j, v in enumerate(self.objective) if v)]
        for k, c in enumerate(self.constraints):
            tag = f"  # {c.label}" if c.label else ""
            lines.append(f"c{k}: {expr(c.coeffs)} {c.relation} {fmt_q(c.rhs)}{tag}")
        free = [self.name(j) for j in range(self.nvars) if self.is_free(j)]
        if free:
            lines.append("free " + " ".join(free))
        return "\n".join(lines)


def lp_problem(nvars: int, constraints, objective, free=None, names=None) -> LpProblem:
    """Convenience constructor accepting ``(coeffs, relation, rhs[, label])`` tuples."""
    cons = []
    for c in constraints:
        if isinstance(c, Constraint):
            cons.append(c)
        else:
            cons.append(make_constraint(*c[:3], nvars, *(c[3:4] or ("",))))
    if isinstance(objective, Mapping):
        obj = [Fraction(0)] * nvars
        for j, v in objective.items():
            obj[j] = Fraction(v)
    else:
        obj = [Fraction(v) for v in objective]
    return LpProblem(nvars, tuple(cons), tuple(obj),
                     tuple(bool(f) for f in free) if free else (),
                     tuple(names) if names else ())


@dataclass
class LpSolution:
    status: Status
    value: Fraction | None = None
    assignment: tuple[Fraction, ...] = ()
    basis: tuple[int, ...] = ()          # constraints tight in the final dictionary
    bounds: tuple[int, ...] = ()         # variables held at their lower bound 0
    duals: tuple[Fraction, ...] = ()     # one multiplier per constraint
    pivots: int = 0
    info: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Dictionary:
    """Compact simplex dictionary ``x_B = d0 + D x_N``.

    Variable numbering: structural columns ``0..n-1`` (free variables already
    split in two), row slacks ``n..n+m-1``, the phase-one artificial ``n+m``.
    """

    def __init__(self, rows, rhs, n):
        self.n = n
        self.m = len(rows)
        self.basic = [n + r for r in range(self.m)]
        self.nonbasic = list(range(n))
        # slack_r = a_r . x - b_r
        self.rows = [[-b] + list(a) for a, b in zip(rows, rhs)]
        self.pivots = 0

    def pivot(self, r: int, k: int, objs) -> None:
        row = self.rows[r]
        piv = row[k + 1]
        inv = 1 / piv
        new = [-v * inv for v in row]
        new[k + 1] = inv
        nz = [j for j, v in enumerate(new) if v]
        self.rows[r] = new
        for other in (*[self.rows[i] for i in range(self.m) if i != r], *objs):
            a = other[k + 1]
            if not a:
                continue
            other[k + 1] = 0
            for j in nz:
                other[j] += a * new[j]
        self.basic[r], self.nonbasic[k] = self.nonbasic[k], self.basic[r]
        self.pivots += 1

    def run(self, obj, banned=frozenset(), leave_first=None, max_pivots=None):
        """Minimise ``obj`` (a dictionary row).  Returns "optimal" or "unbounded"."""
        degenerate_run = 0
        while True:
            cand = [k for k in range(len(self.nonbasic))
                    if obj[k + 1] < 0 and self.nonbasic[k] not in banned]
            if not cand:
                return "optimal"
            if degenerate_run:
                k = min(cand, key=lambda c: self.nonbasic[c])
            else:
                k = min(cand, key=lambda c: (obj[c + 1], self.nonbasic[c]))
            best = None
            for r, row in enumerate(self.rows):
                a = row[k + 1]
                if a < 0:
                    ratio = row[0] / -a
                    pref = 0 if self.basic[r] == leave_first else 1
                    key = (ratio, pref, self.basic[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return "unbounded"
            degenerate_run = degenerate_run + 1 if best[0][0] == 0 else 0
            self.pivot(best[1], k, (obj,))
            if max_pivots is not None and self.pivots > max_pivots:
                raise SolverError("pivot limit exceeded")


def solve(p: LpProblem, max_pivots: int | None = None) -> LpSolution:
    """Solve ``p`` exactly.

    On ``Optimal`` the solution carries a vertex, the constraints tight in the
    final dictionary and one dual multiplier per constraint, which together
    certify optimality (see :func:`check_solution`).
    """
    n0 = p.nvars
    # column map: original var j -> (plus column, minus column or None)
    cols: list[tuple[int, int | None]] = []
    n = 0
    for j in range(n0):
        if p.is_free(j):
            cols.append((n, n + 1))
            n += 2
        else:
            cols.append((n, None))
            n += 1

    rows, rhs, origin = [], [], []
    for ci, c in enumerate(p.constraints):
        a = [mpq(0)] * n
        for j, v in c.coeffs:
            pj, mj = cols[j]
            a[pj] = mpq(v.numerator, v.denominator)
            if mj is not None:
                a[mj] = -a[pj]
        b = mpq(c.rhs.numerator, c.rhs.denominator)
        rows.append(a)
        rhs.append(b)
        origin.append((ci, 1))
        if c.relation == EQ:
            rows.append([-v for v in a])
            rhs.append(-b)
            origin.append((ci, -1))

    cost = [mpq(0)] * n
    for j, v in enumerate(p.objective):
        pj, mj = cols[j]
        cost[pj] = mpq(v.numerator, v.denominator)
        if mj is not None:
            cost[mj] = -cost[pj]

    d = _Dictionary(rows, rhs, n)
    m = d.m
    art = n + m

    # phase one: a single artificial column added to every row
    if any(row[0] < 0 for row in d.rows):
        for row in d.rows:
            row.append(mpq(1))
        d.nonbasic.append(art)
        kart = len(d.nonbasic) - 1
        w = [mpq(0)] * (len(d.nonbasic) + 1)
        w[kart + 1] = mpq(1)
        r0 = min(range(m), key=lambda r: (d.rows[r][0], d.basic[r]))
        d.pivot(r0, kart, (w,))
        d.run(w, leave_first=art, max_pivots=max_pivots)
        if w[0] > 0:
            return LpSolution(Status.INFEASIBLE, pivots=d.pivots)
        if art in d.basic:
            r = d.basic.index(art)
            k = next((k for k, v in enumerate(d.rows[r][1:]) if v), None)
            if k is None:
                # artificial row is identically zero; drop it
                d.rows.pop(r)
                d.basic.pop(r)
                d.m -= 1
            else:
                d.pivot(r, k, (w,))
        k = d.nonbasic.index(art)
        for row in d.rows:
            row.pop(k + 1)
        d.nonbasic.pop(k)

    # phase two objective expressed in the current non-basic variables
    z = [mpq(0)] * (len(d.nonbasic) + 1)
    for k, v in enumerate(d.nonbasic):
        if v < n:
            z[k + 1] = cost[v]
    for r, v in enumerate(d.basic):
        if v < n and cost[v]:
            cv = cost[v]
            for j, a in enumerate(d.rows[r]):
                if a:
                    z[j] += cv * a
    if d.run(z, max_pivots=max_pivots) == "unbounded":
        return LpSolution(Status.UNBOUNDED, pivots=d.pivots)

    val = [mpq(0)] * n
    for r, v in enumerate(d.basic):
        if v < n:
            val[v] = d.rows[r][0]
    x = []
    for pj, mj in cols:
        v = val[pj] - (val[mj] if mj is not None else 0)
        x.append(Fraction(int(v.numerator), int(v.denominator)))

    duals = [Fraction(0)] * len(p.constraints)
    tight, at_bound = set(), []
    for k, v in enumerate(d.nonbasic):
        if n <= v < n + m:
            ci, sign = origin[v - n]
            y = z[k + 1]
            duals[ci] += sign * Fraction(int(y.numerator), int(y.denominator))
            tight.add(ci)
        elif v < n:
            j = next(j for j, (pj, mj) in enumerate(cols) if v in (pj, mj))
            if not p.is_free(j):
                at_bound.append(j)
    value = p.objective_value(x)
    if value != Fraction(int(z[0].numerator), int(z[0].denominator)):
        raise SolverError("objective value disagrees with the final dictionary")
    return LpSolution(Status.OPTIMAL, value, tuple(x), tuple(sorted(tight)),
                      tuple(sorted(at_bound)), tuple(duals), d.pivots)


def check_solution(p: LpProblem, s: LpSolution) -> bool:
    """Independent optimality check of a claimed optimal solution.

    Verifies exact primal feasibility, the objective value, and that the
    multipliers supported on the claimed basis form a dual-feasible
    certificate with complementary slackness (non-negative reduced costs).
    """
    if s.status is not Status.OPTIMAL or len(s.assignment) != p.nvars:
        return False
    if len(s.duals) != len(p.constraints):
        return False
    x = [Fraction(v) for v in s.assignment]
    for j, v in enumerate(x):
        if not p.is_free(j) and v < 0:
            return False
    if not all(c.holds(x) for c in p.constraints):
        return False
    if p.objective_value(x) != s.value:
        return False
    basis = set(s.basis)
    reduced = list(p.objective)
    for i, (c, y) in enumerate(zip(p.constraints, s.duals)):
        if y == 0:
            continue
        if i not in basis:
            return False
        if c.relation == GE and y < 0:
            return False
        if c.slack(x) != 0:
            return False
        for j, a in c.coeffs:
            reduced[j] -= y * a
    for j, rc in enumerate(reduced):
        if p.is_free(j):
            if rc != 0:
                return False
        elif rc < 0 or (rc > 0 and x[j] != 0):
            return False
    return True
