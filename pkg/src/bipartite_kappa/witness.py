"""Rank grids by edge differences, the edge-condition checker and the three
explicit constructions (single step, regular equal-step, height one).

``hval(i, j)`` is the value on the horizontal edge ``(i,j)-(i+1,j)`` and
``vval(i, j)`` on the vertical edge ``(i,j)-(i,j+1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .core import QualMap, Staircase, fmt_q, qualmap, staircase_from_points
from .errors import DimensionMismatch, InconsistentEdges, PreconditionViolation
from .shannon import RankGrid, bound_matus

LABELS = ("8a", "8b", "8c", "8d", "8e", "8f")


@dataclass(frozen=True)
class EdgeGrid:
    n1: int
    n2: int
    h: tuple[tuple[Fraction, ...], ...]  # h[i][j], 0 <= i < n1, 0 <= j <= n2
    v: tuple[tuple[Fraction, ...], ...]  # v[i][j], 0 <= i <= n1, 0 <= j < n2
    staircase: Staircase | None = field(default=None, compare=False)

    def hval(self, i: int, j: int) -> Fraction:
        return self.h[i][j]

    def vval(self, i: int, j: int) -> Fraction:
        return self.v[i][j]

    @property
    def H(self) -> Fraction:
        return self.h[0][0] if self.n1 else Fraction(0)

    @property
    def V(self) -> Fraction:
        return self.v[0][0] if self.n2 else Fraction(0)

    @classmethod
    def from_functions(cls, n1: int, n2: int, hfn: Callable, vfn: Callable,
                       staircase: Staircase | None = None) -> "EdgeGrid":
        h = tuple(tuple(Fraction(hfn(i, j)) for j in range(n2 + 1)) for i in range(n1))
        v = tuple(tuple(Fraction(vfn(i, j)) for j in range(n2)) for i in range(n1 + 1))
        return cls(n1, n2, h, v, staircase)

    def replace(self, *, h: dict | None = None, v: dict | None = None) -> "EdgeGrid":
        """Copy with some edges overwritten; keys are ``(i, j)``."""
        hs = [list(col) for col in self.h]
        vs = [list(col) for col in self.v]
        for (i, j), x in (h or {}).items():
            hs[i][j] = Fraction(x)
        for (i, j), x in (v or {}).items():
            vs[i][j] = Fraction(x)
        return EdgeGrid(self.n1, self.n2, tuple(map(tuple, hs)), tuple(map(tuple, vs)),
                        self.staircase)

    def to_csv(self) -> str:
        """Horizontal matrix, blank line, vertical matrix; top row first."""
        hm = [",".join(fmt_q(self.h[i][j]) for i in range(self.n1))
              for j in range(self.n2, -1, -1)]
        vm = [",".join(fmt_q(self.v[i][j]) for i in range(self.n1 + 1))
              for j in range(self.n2 - 1, -1, -1)]
        return "\n".join(hm) + "\n\n" + "\n".join(vm) + "\n"

    @classmethod
    def from_csv(cls, text: str, staircase: Staircase | None = None) -> "EdgeGrid":
        blocks = [b for b in text.strip("\n").split("\n\n")]
        if len(blocks) != 2:
            raise DimensionMismatch("edge CSV needs a horizontal and a vertical block")

        def rows(b):
            return [[Fraction(x) for x in line.split(",")] if line.strip() else []
                    for line in b.strip("\n").split("\n")]

        hr, vr = rows(blocks[0]), rows(blocks[1])
        n2 = len(hr) - 1
        n1 = len(vr[0]) - 1 if vr else len(hr[0])
        if len(vr) != n2 or any(len(r) != n1 for r in hr) or any(len(r) != n1 + 1 for r in vr):
            raise DimensionMismatch("edge CSV blocks have inconsistent shapes")
        h = tuple(tuple(hr[n2 - j][i] for j in range(n2 + 1)) for i in range(n1))
        v = tuple(tuple(vr[n2 - 1 - j][i] for j in range(n2)) for i in range(n1 + 1))
        return cls(n1, n2, h, v, staircase)


def edges_to_rankgrid(e: EdgeGrid) -> RankGrid:
    vals = [[Fraction(0)] * (e.n2 + 1) for _ in range(e.n1 + 1)]
    for i in range(e.n1 + 1):
        for j in range(e.n2 + 1):
            if i == 0 and j == 0:
                continue
            vals[i][j] = vals[i][j - 1] + e.v[i][j - 1] if j else vals[i - 1][j] + e.h[i - 1][j]
    for i in range(e.n1):
        for j in range(e.n2):
            if e.v[i][j] + e.h[i][j + 1] != e.h[i][j] + e.v[i + 1][j]:
                raise InconsistentEdges(f"unit square at ({i},{j}) is not consistent")
    return RankGrid(e.n1, e.n2, tuple(map(tuple, vals)))


def rankgrid_to_edges(g: RankGrid) -> EdgeGrid:
    return EdgeGrid.from_functions(g.n1, g.n2, lambda i, j: g(i + 1, j) - g(i, j),
                                   lambda i, j: g(i, j + 1) - g(i, j))


@dataclass(frozen=True)
class EdgeViolation:
    label: str
    edge: str  # "h", "v" or "square"
    at: tuple[int, int]
    slack: Fraction

    def to_json(self) -> dict:
        return {"edge": self.edge, "at": list(self.at), "slack": fmt_q(self.slack)}


@dataclass
class CheckReport:
    violations: list[EdgeViolation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_label(self, label: str) -> list[EdgeViolation]:
        return [x for x in self.violations if x.label == label]

    def to_json(self) -> dict:
        return {lab: [x.to_json() for x in self.by_label(lab)] for lab in LABELS}


def check_conditions(e: EdgeGrid, q: QualMap) -> CheckReport:
    if (e.n1, e.n2) != (q.n1, q.n2):
        raise DimensionMismatch(f"edges on {e.n1}x{e.n2}, qualification map on {q.n1}x{q.n2}")
    out: list[EdgeViolation] = []

    def need(label, edge, at, slack):
        if slack < 0:
            out.append(EdgeViolation(label, edge, at, Fraction(slack)))

    n1, n2 = e.n1, e.n2
    for i in range(n1):
        for j in range(n2 + 1):
            need("8a", "h", (i, j), e.h[i][j])
            if q(i, j) != q(i + 1, j):
                need("8d", "h", (i, j), e.h[i][j] - 1)
            if i + 1 < n1:
                strong = not q(i, j) and q(i + 1, j) and q(i + 2, j)
                need("8e" if strong else "8c", "h", (i, j), e.h[i][j] - e.h[i + 1][j] - strong)
            if j < n2:
                need("8c", "h", (i, j), e.h[i][j] - e.h[i][j + 1])
    for i in range(n1 + 1):
        for j in range(n2):
            need("8a", "v", (i, j), e.v[i][j])
            if q(i, j) != q(i, j + 1):
                need("8d", "v", (i, j), e.v[i][j] - 1)
            if j + 1 < n2:
                strong = not q(i, j) and q(i, j + 1) and q(i, j + 2)
                need("8e" if strong else "8c", "v", (i, j), e.v[i][j] - e.v[i][j + 1] - strong)
            if i < n1:
                strong = not q(i, j) and q(i + 1, j) and q(i, j + 1) and q(i + 1, j + 1)
                need("8f" if strong else "8c", "v", (i, j), e.v[i][j] - e.v[i + 1][j] - strong)
    for i in range(n1):
        for j in range(n2):
            d = e.v[i][j] + e.h[i][j + 1] - e.h[i][j] - e.v[i + 1][j]
            if d:
                out.append(EdgeViolation("8b", "square", (i, j), -abs(d)))
    return CheckReport(out)


# constructions

def single_step_staircase(i1: int, j1: int, w: int, h: int) -> Staircase:
    return staircase_from_points([(i1, j1), (i1 + w, j1 - h)])


def construct_single_step(i1: int, j1: int, w: int, h: int) -> EdgeGrid:
    """Two-point staircase ``(i1, j1), (i1+w, j1-h)`` with ``H = V = 2 - 1/w``."""
    if not (i1 >= 1 and w >= h >= 1 and w >= 2 and j1 >= h):
        raise PreconditionViolation(
            f"need i1 >= 1, w >= h >= 1, w >= 2, j1 >= h; got {(i1, j1, w, h)}")
    i2, j2 = i1 + w, j1 - h
    s = single_step_staircase(i1, j1, w, h)

    def hv(i, j):
        if i < i1:
            return 2 * w - 1
        if j < j2:
            return h + w - 1
        if j < j1:
            return j1 - j + w - 1
        return w - 1 if i < i2 - 1 else 0

    def vv(x, j):
        if j < j2:
            return 2 * w - 1
        if j == j1 - 1 and x >= i2:
            return 0
        if x < i1:
            return 2 * w - 1
        return 2 * w - 1 - min(x - i1, w)

    return EdgeGrid.from_functions(s.n1, s.n2, lambda i, j: Fraction(hv(i, j), w),
                                   lambda i, j: Fraction(vv(i, j), w), s)


def regular_staircase(w: int, ell: int, i1: int, j1: int) -> Staircase:
    return staircase_from_points([(i1 + k * w, j1 - k * w) for k in range(ell)])


def construct_regular_equal(w: int, ell: int, i1: int, j1: int) -> EdgeGrid:
    """Staircase with every width and height ``w``; ``H = V = 2 - 1/w``.

    The one-step pattern is tiled along the diagonal; bands are indexed by
    the (possibly virtual) staircase points ``p_k, q_k``.
    """
    if w < 2 or ell < 1 or i1 < 0 or j1 - (ell - 1) * w < 0:
        raise PreconditionViolation(f"bad regular staircase {(w, ell, i1, j1)}")
    pts = [(i1 + k * w, j1 - k * w) for k in range(ell)]
    if not any(i >= 1 and j >= 1 for i, j in pts):
        raise PreconditionViolation("some staircase point must lie off both axes")
    s = regular_staircase(w, ell, i1, j1)

    def p(k):
        return i1 + (k - 1) * w

    def q(k):
        return j1 - (k - 1) * w

    def hv(i, J):
        k = -((J - q(1)) // w)  # ceil((q1 - J) / w)
        if i < p(k):
            return 2 * w - 1
        if i < p(k + 1):
            return w - 1 + q(k) - J
        if i < p(k + 2) - 1:
            return q(k) - 1 - J
        return 0

    def vv(X, J):
        k = (X - p(1)) // w + 1
        if J < q(k + 1):
            return 2 * w - 1
        if J < q(k):
            return w - 1 + p(k + 1) - X
        if J < q(k - 1) - 1:
            return p(k + 1) - 1 - X
        return 0

    return EdgeGrid.from_functions(s.n1, s.n2, lambda i, j: Fraction(hv(i, j), w),
                                   lambda i, j: Fraction(vv(i, j), w), s)


def height1_staircase(widths: Sequence[int], i1: int, j_last: int = 0) -> Staircase:
    ell = len(widths) + 1
    pts = [(i1, j_last + ell - 1)]
    for w in widths:
        pts.append((pts[-1][0] + w, pts[-1][1] - 1))
    return staircase_from_points(pts)


def construct_height1(widths: Sequence[int], i1: int, j_last: int = 0) -> EdgeGrid:
    """Height-one staircase with ``H = V = bound_matus(widths)``.

    Horizontal values vanish after the last point and grow leftward by
    ``(w_m - V)/(w_m - 1)`` per step plus one unit below each point; each
    vertical run under a step descends linearly from ``V`` to 1.
    """
    ws = [int(w) for w in widths]
    if not ws or any(w < 2 for w in ws) or i1 < 1 or j_last < 0:
        raise PreconditionViolation(f"need widths >= 2, i1 >= 1; got {ws}, i1={i1}")
    V = bound_matus(ws)
    if any(w < V for w in ws):
        raise PreconditionViolation(f"every width must be at least {fmt_q(V)}, got {tuple(ws)}")
    s = height1_staircase(ws, i1, j_last)
    ell = len(ws) + 1
    xs = [i for i, _ in s.points]           # xs[m-1] = i_m
    ys = [j for _, j in s.points]           # ys[m-1] = j_m
    t = [Fraction(0)] * ell                 # t[m], m = 0..ell-1
    for m in range(ell - 1, 0, -1):
        w = ws[m - 1]
        t[m - 1] = t[m] + (w - V) / (w - 1)

    def hv(i, j):
        if i < xs[0]:
            return t[0] + 1
        for m in range(1, ell):
            if xs[m - 1] <= i < xs[m]:
                if j >= ys[m - 1]:
                    return t[m] if i == xs[m] - 1 else t[m - 1]
                return t[m] + 1
        return Fraction(0)

    def vv(x, j):
        if j < j_last:
            return V
        m = ys[0] - j          # row between j_{m+1} and j_m
        lo, hi = xs[m - 1], xs[m]
        if x < lo:
            return V
        if x < hi:
            return V - (x - lo) * (V - 1) / (ws[m - 1] - 1)
        return Fraction(0)

    return EdgeGrid.from_functions(s.n1, s.n2, hv, vv, s)


def fig6_edges() -> EdgeGrid:
    """Edge table for ``[(2,4),(5,2)]`` on the 8x6 grid, in thirds."""

    def hv(i, j):
        if i < 2:
            return 5
        if i < 5 and j <= 2:
            return 4
        if i < 5 and j == 3:
            return 3
        if i < 4 and j >= 4:
            return 2
        return 0

    def vv(x, j):
        if x <= 2:
            return 5 if j <= 3 else 0
        if x <= 4:
            if j <= 1:
                return 5
            if j <= 3:
                return 4 if x == 3 else 3
            return 0
        return {0: 5, 1: 5, 2: 2}.get(j, 0)

    s = staircase_from_points([(2, 4), (5, 2)], 8, 6)
    return EdgeGrid.from_functions(8, 6, lambda i, j: Fraction(hv(i, j), 3),
                                   lambda i, j: Fraction(vv(i, j), 3), s)
