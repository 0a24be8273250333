"""Linear schemes: share accounting for the combined height-one construction
and exact verification of a 7-dimensional subspace scheme for the
structure with minimal points (0,3), (1,1), (3,0).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .core import fmt_q
from .errors import PreconditionViolation

DIM = 7
PARAM_BITS = 64


def combined_complexity_height1(w: int, ell: int) -> Fraction:
    if w < 2 or ell < 2:
        raise PreconditionViolation(f"need w >= 2 and ell >= 2, got w={w}, ell={ell}")
    return 1 + Fraction((ell - 1) * (w - 1), ell + w - 2)


@dataclass(frozen=True)
class ShareTable:
    w: int
    ell: int
    n1: int
    n2: int
    mult_scheme1: int  # copies of the scheme giving N2 members w shares
    mult_scheme2: int  # copies of the scheme giving N1 members ell shares
    secret: int
    share_n1: int
    share_n2: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(max(self.share_n1, self.share_n2), self.secret)

    def to_json(self) -> dict:
        return {"w": self.w, "ell": self.ell, "n1": self.n1, "n2": self.n2,
                "copies": [self.mult_scheme1, self.mult_scheme2], "secret": self.secret,
                "share_n1": self.share_n1, "share_n2": self.share_n2,
                "ratio": fmt_q(self.ratio)}


def scheme_shares_height1(w: int, ell: int, n1: int, n2: int) -> ShareTable:
    """Share sizes when ``ell-1`` copies of the first scheme and ``w-1``
    copies of the second are run side by side."""
    combined_complexity_height1(w, ell)
    if n1 < 1 or n2 < 1:
        raise PreconditionViolation("part sizes must be positive")
    k1, k2 = ell - 1, w - 1
    return ShareTable(w, ell, n1, n2, k1, k2, secret=k1 + k2,
                      share_n1=k1 * 1 + k2 * ell, share_n2=k1 * w + k2 * 1)


# exact rank

def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = math.lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    a = _integer_rows(rows)
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((k for k in range(r, nrows) if a[k][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for k in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                a[k][j] = (a[r][c] * a[k][j] - a[k][c] * a[r][j]) // prev
            a[k][c] = 0
        prev = a[r][c]
        r += 1
        if r == nrows:
            break
    return r


# the 7-dimensional scheme

@dataclass(frozen=True)
class SubspaceScheme:
    alpha: tuple[tuple[int, int, int, int], ...]  # per N1 participant
    beta: tuple[tuple[int, int, int, int], ...]   # per N2 participant
    zeta: tuple[int, int, int, int, int, int]
    seed: int | None = None

    @property
    def dim(self) -> int:
        return DIM

    @property
    def n1(self) -> int:
        return len(self.alpha)

    @property
    def n2(self) -> int:
        return len(self.beta)

    def secret_rows(self) -> list[list[int]]:
        z = self.zeta
        return [[z[0], z[1], z[2], 0, 0, 0, 0], [z[3], z[4], z[5], 0, 0, 0, 0]]

    def rows(self, part: int, k: int) -> list[list[int]]:
        if part == 1:
            a1, a2, a3, a4 = self.alpha[k]
            return [[1, 0, a1, a3, a4, 0, 0], [1, 0, a2, 0, 0, a3, a4], [0, 1, 0, 0, 0, 0, 0]]
        b1, b2, b3, b4 = self.beta[k]
        return [[0, 1, b1, b3, 0, b4, 0], [0, 1, b2, 0, b3, 0, b4], [1, 0, 0, 0, 0, 0, 0]]

    def participants(self) -> list[tuple[int, int]]:
        return [(1, k) for k in range(self.n1)] + [(2, k) for k in range(self.n2)]

    @property
    def complexity(self) -> Fraction:
        return Fraction(3, 2)

    def registry(self) -> dict:
        return {"alpha": [list(x) for x in self.alpha], "beta": [list(x) for x in self.beta],
                "zeta": list(self.zeta), "seed": self.seed}


def build_scheme_30_11_03(seed: int, n1: int = 3, n2: int = 3) -> SubspaceScheme:
    if n1 < 3 or n2 < 3:
        raise PreconditionViolation("each part needs at least 3 participants")
    rng = random.Random(seed)

    def draw():
        return rng.randint(1, 2 ** PARAM_BITS)

    alpha = tuple(tuple(draw() for _ in range(4)) for _ in range(n1))
    beta = tuple(tuple(draw() for _ in range(4)) for _ in range(n2))
    zeta = tuple(draw() for _ in range(6))
    return SubspaceScheme(alpha, beta, zeta, seed)


def degenerate_control(s: SubspaceScheme) -> SubspaceScheme:
    """Negative control: every ``alpha3 = alpha4 = 0``."""
    return replace(s, alpha=tuple((a1, a2, 0, 0) for a1, a2, _, _ in s.alpha))


@dataclass(frozen=True)
class SchemeFailure:
    condition: str
    participants: tuple[tuple[int, int], ...]
    rank_without: int
    rank_with: int

    def to_json(self) -> dict:
        return {"condition": self.condition,
                "participants": [f"{'ab'[p - 1]}{k}" for p, k in self.participants],
                "rank": self.rank_without, "rank_with_secret": self.rank_with}


@dataclass
class SchemeReport:
    failures: list[SchemeFailure] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def conditions(self) -> set[str]:
        return {f.condition for f in self.failures}

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked,
                "failures": [f.to_json() for f in self.failures]}


def verify_scheme(s: SubspaceScheme) -> SchemeReport:
    """(a) three from one part recover the secret space; (b) any cross pair
    does; (c) two from one part meet it only in 0."""
    sec = s.secret_rows()
    rep = SchemeReport()

    def test(cond, group, want_contain):
        rows = [r for p in group for r in s.rows(*p)]
        r0, r1 = rank(rows), rank(rows + sec)
        rep.checked += 1
        good = r1 == r0 if want_contain else r1 == r0 + 2
        if not good:
            rep.failures.append(SchemeFailure(cond, tuple(group), r0, r1))

    for part, n in ((1, s.n1), (2, s.n2)):
        for trio in itertools.combinations(range(n), 3):
            test("a", [(part, k) for k in trio], True)
        for pair in itertools.combinations(range(n), 2):
            test("c", [(part, k) for k in pair], False)
    for x in range(s.n1):
        for y in range(s.n2):
            test("b", [(1, x), (2, y)], True)
    return rep


def cross_control(s: SubspaceScheme) -> SubspaceScheme:
    """Negative control for cross pairs: ``alpha1 = alpha2 = beta1 = beta2 = 0``."""
    return replace(s, alpha=tuple((0, 0, a3, a4) for _, _, a3, a4 in s.alpha),
                   beta=tuple((0, 0, b3, b4) for _, _, b3, b4 in s.beta))
