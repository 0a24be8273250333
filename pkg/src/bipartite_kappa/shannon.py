"""Shannon complexity of bipartite structures as an exact LP.

The decision variables are the values ``f(i, j)`` of a symmetrised rank
function on the grid ``0..n1 x 0..n2``.  They must be pointed, monotone,
concave along rows and columns and submodular on unit squares; wherever the
qualified/unqualified pattern of the touched points matches, the inequality
is strengthened by one unit of secret.  The complexity is the minimum of
``max(f(1,0), f(0,1))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .core import QualMap, Staircase, fmt_q, qualmap
from .errors import DimensionMismatch, GridTooSmall, NonPositiveWidth, SolverError, WidthTooSmall
from . import ratlp

Cell = tuple[int, int]


@dataclass(frozen=True)
class GridConstraint:
    kind: str
    at: Cell
    coeffs: tuple[tuple[Cell, int], ...]
    rhs: int

    def slack(self, g: "RankGrid") -> Fraction:
        return sum((c * g(*p) for p, c in self.coeffs), Fraction(0)) - self.rhs


@dataclass(frozen=True)
class RankGrid:
    n1: int
    n2: int
    values: tuple[tuple[Fraction, ...], ...]  # values[i][j] = f(i, j)

    def __call__(self, i: int, j: int) -> Fraction:
        return self.values[i][j]

    @property
    def H(self) -> Fraction:
        return self.values[1][0] if self.n1 >= 1 else Fraction(0)

    @property
    def V(self) -> Fraction:
        return self.values[0][1] if self.n2 >= 1 else Fraction(0)

    @property
    def complexity(self) -> Fraction:
        return max(self.H, self.V)

    @classmethod
    def from_function(cls, fn, n1: int, n2: int) -> "RankGrid":
        return cls(n1, n2, tuple(tuple(Fraction(fn(i, j)) for j in range(n2 + 1))
                                 for i in range(n1 + 1)))

    def to_csv(self) -> str:
        """Rows from top (``j = n2``) to bottom, columns ``i = 0..n1``."""
        return "\n".join(",".join(fmt_q(self.values[i][j]) for i in range(self.n1 + 1))
                         for j in range(self.n2, -1, -1))

    @classmethod
    def from_csv(cls, text: str) -> "RankGrid":
        rows = [[Fraction(v) for v in line.split(",")] for line in text.strip().splitlines()]
        n2, n1 = len(rows) - 1, len(rows[0]) - 1
        return cls(n1, n2, tuple(tuple(rows[n2 - j][i] for j in range(n2 + 1))
                                 for i in range(n1 + 1)))


def shannon_constraints(q: QualMap) -> Iterator[GridConstraint]:
    """Every monotonicity/submodularity inequality on the grid, strengthened
    where the qualification pattern demands it."""
    n1, n2 = q.n1, q.n2
    for i, j in itertools.product(range(n1 + 1), range(n2 + 1)):
        if i < n1:
            strong = q(i + 1, j) and not q(i, j)
            yield GridConstraint("strong-mono-h" if strong else "mono-h", (i, j),
                                 (((i + 1, j), 1), ((i, j), -1)), int(strong))
        if j < n2:
            strong = q(i, j + 1) and not q(i, j)
            yield GridConstraint("strong-mono-v" if strong else "mono-v", (i, j),
                                 (((i, j + 1), 1), ((i, j), -1)), int(strong))
        if 0 < i < n1:
            strong = not q(i - 1, j) and q(i, j) and q(i + 1, j)
            yield GridConstraint("strong-sub1-h" if strong else "sub1-h", (i, j),
                                 (((i, j), 2), ((i - 1, j), -1), ((i + 1, j), -1)), int(strong))
        if 0 < j < n2:
            strong = not q(i, j - 1) and q(i, j) and q(i, j + 1)
            yield GridConstraint("strong-sub1-v" if strong else "sub1-v", (i, j),
                                 (((i, j), 2), ((i, j - 1), -1), ((i, j + 1), -1)), int(strong))
        if i < n1 and j < n2:
            strong = (not q(i, j) and q(i + 1, j) and q(i, j + 1) and q(i + 1, j + 1))
            yield GridConstraint("strong-sub2" if strong else "sub2", (i, j),
                                 (((i + 1, j), 1), ((i, j), -1), ((i + 1, j + 1), -1),
                                  ((i, j + 1), 1)), int(strong))


def _var(i: int, j: int, n2: int) -> int:
    return i * (n2 + 1) + j


def build_shannon_lp(s: Staircase) -> ratlp.LpProblem:
    if s.n1 < s.points[-1][0] or s.n2 < s.points[0][1]:
        raise GridTooSmall(f"grid {s.n1}x{s.n2} too small for {s.points}")
    q = qualmap(s)
    n1, n2 = s.n1, s.n2
    npts = (n1 + 1) * (n2 + 1)
    t = npts
    names = [f"f{i}_{j}" for i in range(n1 + 1) for j in range(n2 + 1)] + ["t"]
    cons = [ratlp.make_constraint({0: 1}, ratlp.EQ, 0, npts + 1, "origin@0,0")]
    for gc in shannon_constraints(q):
        coeffs = {_var(*p, n2): c for p, c in gc.coeffs}
        cons.append(ratlp.make_constraint(coeffs, ratlp.GE, gc.rhs, npts + 1,
                                          f"{gc.kind}@{gc.at[0]},{gc.at[1]}"))
    if n1 >= 1:
        cons.append(ratlp.make_constraint({t: 1, _var(1, 0, n2): -1}, ratlp.GE, 0, npts + 1,
                                          "t>=H"))
    if n2 >= 1:
        cons.append(ratlp.make_constraint({t: 1, _var(0, 1, n2): -1}, ratlp.GE, 0, npts + 1,
                                          "t>=V"))
    obj = [Fraction(0)] * npts + [Fraction(1)]
    return ratlp.LpProblem(npts + 1, tuple(cons), tuple(obj), (), tuple(names))


@dataclass
class KappaResult:
    kappa: Fraction
    witness: RankGrid
    staircase: Staircase
    bounds: dict[str, Fraction] = field(default_factory=dict)
    pivots: int = 0

    @property
    def n1(self) -> int:
        return self.staircase.n1

    @property
    def n2(self) -> int:
        return self.staircase.n2

    def to_json(self, witness: bool = False) -> dict:
        doc = {
            "kappa": fmt_q(self.kappa),
            "staircase": self.staircase.to_json(),
            "n1": self.n1,
            "n2": self.n2,
            "H": fmt_q(self.witness.H),
            "V": fmt_q(self.witness.V),
            "bounds": {k: fmt_q(v) for k, v in self.bounds.items()},
        }
        if witness:
            doc["witness"] = [[fmt_q(v) for v in col] for col in self.witness.values]
        return doc

    @classmethod
    def from_json(cls, doc) -> "KappaResult":
        from .core import Staircase as _S
        s = _S.from_json(doc["staircase"])
        if "witness" in doc:
            vals = tuple(tuple(Fraction(v) for v in col) for col in doc["witness"])
        else:
            vals = tuple(tuple(Fraction(0) for _ in range(s.n2 + 1)) for _ in range(s.n1 + 1))
        return cls(Fraction(doc["kappa"]), RankGrid(s.n1, s.n2, vals), s,
                   {k: Fraction(v) for k, v in doc.get("bounds", {}).items()})


def kappa(s: Staircase) -> KappaResult:
    lp = build_shannon_lp(s)
    sol = ratlp.solve(lp)
    if not sol.optimal:
        raise SolverError(f"Shannon LP ended {sol.status.value}")
    n2 = s.n2
    vals = tuple(tuple(sol.assignment[_var(i, j, n2)] for j in range(n2 + 1))
                 for i in range(s.n1 + 1))
    grid = RankGrid(s.n1, s.n2, vals)
    if grid.complexity != sol.value:
        raise SolverError("LP objective differs from max(H, V) of the witness")
    return KappaResult(sol.value, grid, s, applicable_bounds(s), sol.pivots)


@dataclass(frozen=True)
class Violation:
    kind: str
    at: Cell
    slack: Fraction

    def to_json(self) -> dict:
        return {"kind": self.kind, "at": list(self.at), "slack": fmt_q(self.slack)}


def verify_rankgrid(s: Staircase, g: RankGrid) -> list[Violation]:
    """All violated constraints; empty iff ``g`` realizes the structure with
    a unit secret."""
    if (g.n1, g.n2) != (s.n1, s.n2):
        raise DimensionMismatch(f"grid {g.n1}x{g.n2} vs staircase grid {s.n1}x{s.n2}")
    out = []
    if g(0, 0) != 0:
        out.append(Violation("origin", (0, 0), -abs(g(0, 0))))
    for i, j in itertools.product(range(g.n1 + 1), range(g.n2 + 1)):
        if g(i, j) < 0:
            out.append(Violation("nonneg", (i, j), g(i, j)))
    for gc in shannon_constraints(qualmap(s)):
        sl = gc.slack(g)
        if sl < 0:
            out.append(Violation(gc.kind, gc.at, sl))
    return out


# closed-form lower bounds

def bound_single_step(w: int) -> Fraction:
    if w < 1:
        raise NonPositiveWidth(f"width must be positive, got {w}")
    return 2 - Fraction(1, w)


def _check_widths(widths: Sequence[int]) -> list[int]:
    ws = [int(w) for w in widths]
    if not ws:
        raise WidthTooSmall("need at least one step")
    if any(w < 2 for w in ws):
        raise WidthTooSmall(f"every width must be at least 2, got {tuple(ws)}")
    return ws


def bound_matus(widths: Sequence[int]) -> Fraction:
    """Lower bound for height-one staircases: ``1 + (l-1) / (1 + sum 1/(w_k - 1))``."""
    ws = _check_widths(widths)
    return 1 + Fraction(len(ws)) / (1 + sum(Fraction(1, w - 1) for w in ws))


def _blocks(count: int) -> Iterator[tuple[int, ...]]:
    """Sets of centres ``1..count-2`` whose 3-step windows are disjoint."""

    def rec(start: int, chosen: tuple[int, ...]):
        yield chosen
        for k in range(start, count - 1):
            yield from rec(k + 3, chosen + (k,))

    yield from rec(1, ())


def _improved_for(ws: list[int], centres: tuple[int, ...]) -> Fraction:
    # H >= l - sum_i (V-1) a_i, where a centre k contributes (V-1+W)/(w_k-1+W)
    # with W the sum of its two neighbour widths; solve H = V.
    slope = Fraction(0)
    shift = Fraction(0)
    for i, w in enumerate(ws):
        if i in centres:
            W = ws[i - 1] + ws[i + 1]
            d = w - 1 + W
            slope += Fraction(1, d)
            shift += Fraction(W, d)
        else:
            slope += Fraction(1, w - 1)
    return 1 + (len(ws) - shift) / (1 + slope)


def bound_matus_improved(widths: Sequence[int]) -> Fraction:
    """Height-one bound with the small-intermediate-step refinement.

    Each chosen intermediate step trades its plain term for the refined one;
    the chosen windows of three consecutive steps must not overlap.  The best
    choice (possibly none) is returned, so the value never falls below
    :func:`bound_matus`.
    """
    ws = _check_widths(widths)
    return max(_improved_for(ws, c) for c in _blocks(len(ws)))


def applicable_bounds(s: Staircase) -> dict[str, Fraction]:
    """Closed-form lower bounds whose hypotheses hold for ``s``."""
    out: dict[str, Fraction] = {}
    pts, ws, hs = s.points, s.widths, s.heights
    single = [bound_single_step(w) for k, w in enumerate(ws) if w >= 2 and pts[k][0] != 0]
    if single:
        out["single_step"] = max(single)
    mirrored = [bound_single_step(h) for k, h in enumerate(hs)
                if h >= 2 and pts[k + 1][1] != 0]
    if mirrored:
        out["single_step_mirrored"] = max(mirrored)
    if ws and all(h == 1 for h in hs) and pts[0][0] >= 1 and all(w >= 2 for w in ws):
        out["matus"] = bound_matus(ws)
        out["matus_improved"] = bound_matus_improved(ws)
    return out
