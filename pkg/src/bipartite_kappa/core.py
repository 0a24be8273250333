"""Bipartite access structures given by their staircase of minimal points.

A bipartite structure on parts of sizes ``n1`` and ``n2`` is fixed by the
lattice points ``(i_1, j_1), ..., (i_l, j_l)`` with ``i`` strictly increasing
and ``j`` strictly decreasing: a profile ``(i, j)`` is qualified iff it
dominates one of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import GridTooSmall, KappaError, NegativeCoordinate, OrderViolation, OutOfGrid

Point = tuple[int, int]
Profile = tuple[int, ...]


def fmt_q(x) -> str:
    """Render a rational as ``p/q`` (integers included, e.g. ``1/1``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


@dataclass(frozen=True)
class Staircase:
    points: tuple[Point, ...]
    n1: int
    n2: int

    @property
    def length(self) -> int:
        return len(self.points)

    @property
    def widths(self) -> tuple[int, ...]:
        p = self.points
        return tuple(p[k + 1][0] - p[k][0] for k in range(len(p) - 1))

    @property
    def heights(self) -> tuple[int, ...]:
        p = self.points
        return tuple(p[k][1] - p[k + 1][1] for k in range(len(p) - 1))

    @property
    def is_minimal_grid(self) -> bool:
        return self.n1 == self.points[-1][0] and self.n2 == self.points[0][1]

    def with_grid(self, n1: int | None = None, n2: int | None = None) -> "Staircase":
        return staircase_from_points(self.points, n1, n2)

    def enlarged(self, d1: int, d2: int | None = None) -> "Staircase":
        d2 = d1 if d2 is None else d2
        return staircase_from_points(self.points, self.n1 + d1, self.n2 + d2)

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.points], "n1": self.n1, "n2": self.n2}

    @classmethod
    def from_json(cls, doc) -> "Staircase":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if isinstance(doc, list):
            return staircase_from_points(doc)
        return staircase_from_points(doc["points"], doc.get("n1"), doc.get("n2"))


def staircase_from_points(points: Iterable[Sequence[int]], n1: int | None = None,
                          n2: int | None = None) -> Staircase:
    """Validate a minimal-point sequence and attach grid bounds.

    Default bounds are the smallest grid holding every point,
    ``n1 = i_l`` and ``n2 = j_1``.
    """
    pts: list[Point] = []
    for p in points:
        if len(p) != 2:
            raise KappaError(f"staircase point must be a pair, got {p!r}")
        i, j = p
        if int(i) != i or int(j) != j:
            raise KappaError(f"staircase coordinates must be integers, got {p!r}")
        if i < 0 or j < 0:
            raise NegativeCoordinate(f"negative coordinate in {p!r}")
        pts.append((int(i), int(j)))
    if not pts:
        raise KappaError("a staircase needs at least one point")
    for (ia, ja), (ib, jb) in zip(pts, pts[1:]):
        if not ia < ib:
            raise OrderViolation(f"first coordinates must increase strictly: {ia} then {ib}")
        if not ja > jb:
            raise OrderViolation(f"second coordinates must decrease strictly: {ja} then {jb}")
    n1 = pts[-1][0] if n1 is None else int(n1)
    n2 = pts[0][1] if n2 is None else int(n2)
    if n1 < pts[-1][0] or n2 < pts[0][1]:
        raise GridTooSmall(f"grid {n1}x{n2} does not contain every staircase point")
    return Staircase(tuple(pts), n1, n2)


def is_qualified(s: Staircase, i: int, j: int) -> bool:
    if not (0 <= i <= s.n1 and 0 <= j <= s.n2):
        raise OutOfGrid(f"({i},{j}) outside the {s.n1}x{s.n2} grid")
    return any(i >= pi and j >= pj for pi, pj in s.points)


@dataclass(frozen=True)
class QualMap:
    """Qualified/unqualified marker for every lattice point of the grid.

    ``cells[i][j]`` is the marker of ``(i, j)``.
    """

    n1: int
    n2: int
    cells: tuple[tuple[bool, ...], ...]

    def __call__(self, i: int, j: int) -> bool:
        return self.cells[i][j]

    def get(self, i: int, j: int) -> bool | None:
        """Marker, or ``None`` when the point is off the grid."""
        if 0 <= i <= self.n1 and 0 <= j <= self.n2:
            return self.cells[i][j]
        return None

    def minimal_points(self) -> tuple[Point, ...]:
        out = []
        for i in range(self.n1 + 1):
            for j in range(self.n2 + 1):
                if not self.cells[i][j]:
                    continue
                if i > 0 and self.cells[i - 1][j]:
                    continue
                if j > 0 and self.cells[i][j - 1]:
                    continue
                out.append((i, j))
        return tuple(sorted(out))

    def is_upward_closed(self) -> bool:
        for i in range(self.n1 + 1):
            for j in range(self.n2 + 1):
                if self.cells[i][j]:
                    if i < self.n1 and not self.cells[i + 1][j]:
                        return False
                    if j < self.n2 and not self.cells[i][j + 1]:
                        return False
        return True

    def render(self) -> str:
        """ASCII picture, top row first; ``#`` qualified, ``.`` not."""
        rows = []
        for j in range(self.n2, -1, -1):
            rows.append("".join("#" if self.cells[i][j] else "." for i in range(self.n1 + 1)))
        return "\n".join(rows)


def qualmap(s: Staircase) -> QualMap:
    # best[i] = lowest qualified j in column i
    cells = []
    for i in range(s.n1 + 1):
        low = min((pj for pi, pj in s.points if pi <= i), default=None)
        cells.append(tuple(low is not None and j >= low for j in range(s.n2 + 1)))
    return QualMap(s.n1, s.n2, tuple(cells))


def qualmap_from_predicate(pred, n1: int, n2: int) -> QualMap:
    return QualMap(n1, n2, tuple(tuple(bool(pred(i, j)) for j in range(n2 + 1))
                                 for i in range(n1 + 1)))


def staircase_from_qualmap(q: QualMap) -> Staircase:
    pts = q.minimal_points()
    if not pts:
        raise KappaError("no qualified point on the grid")
    return staircase_from_points(pts, q.n1, q.n2)


def check_profile(x: Sequence[int], sizes: Sequence[int] | None = None) -> Profile:
    x = tuple(int(v) for v in x)
    if not x:
        raise KappaError("a profile needs at least one part")
    if any(v < 0 for v in x):
        raise NegativeCoordinate(f"negative profile entry in {x}")
    if sizes is not None:
        if len(sizes) != len(x):
            raise KappaError("profile and part sizes differ in length")
        if any(v > n for v, n in zip(x, sizes)):
            raise OutOfGrid(f"profile {x} exceeds part sizes {tuple(sizes)}")
    return x
