"""Continuous relaxation: structures bounded by a decreasing curve from
``(0, a)`` to ``(b, 0)``, the slope lower bound, membership checks for
sampled continuous rank functions and lattice discretizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .core import Staircase, fmt_q, staircase_from_points
from .errors import KappaError, NotDecreasing
from .shannon import kappa as shannon_kappa

Q = Fraction


@dataclass(frozen=True)
class Curve:
    """``kind`` is "linear", "piecewise-linear" or "sampled".

    Polygonal curves keep their vertices in ``points``; a sampled curve
    keeps an exact-valued callable ``fn`` on ``[0, b]``.
    """

    kind: str
    a: Fraction
    b: Fraction
    points: tuple[tuple[Fraction, Fraction], ...] = ()
    fn: Callable | None = field(default=None, compare=False)

    @classmethod
    def linear(cls, a, b) -> "Curve":
        a, b = Q(a), Q(b)
        return _checked(cls("linear", a, b, ((Q(0), a), (b, Q(0)))))

    @classmethod
    def piecewise(cls, vertices: Sequence[Sequence]) -> "Curve":
        pts = tuple((Q(x), Q(y)) for x, y in vertices)
        if len(pts) < 2 or pts[0][0] != 0 or pts[-1][1] != 0:
            raise KappaError("vertices must run from (0, a) to (b, 0)")
        return _checked(cls("piecewise-linear", pts[0][1], pts[-1][0], pts))

    @classmethod
    def sampled(cls, fn: Callable, a, b) -> "Curve":
        a, b = Q(a), Q(b)
        if Q(fn(Q(0))) != a or Q(fn(b)) != 0:
            raise KappaError("sampled curve must satisfy fn(0) = a and fn(b) = 0")
        if a <= 0 or b <= 0:
            raise NotDecreasing("endpoints must be positive")
        return cls("sampled", a, b, (), fn)

    def slopes(self) -> list[Fraction]:
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(self.points, self.points[1:])]

    def value(self, x) -> Fraction:
        x = Q(x)
        if x >= self.b:
            return Q(0)
        if self.kind == "sampled":
            return Q(self.fn(x))
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        raise KappaError(f"{x} outside [0, {self.b}]")

    def inverse(self) -> "Curve":
        """Mirror in the diagonal (swap the two parts)."""
        if self.kind == "sampled":
            raise KappaError("inverse of a sampled curve is not supported")
        return Curve.piecewise([(y, x) for x, y in reversed(self.points)]) \
            if self.kind != "linear" else Curve.linear(self.b, self.a)


def _checked(c: Curve) -> Curve:
    xs = [x for x, _ in c.points]
    if c.a <= 0 or c.b <= 0:
        raise NotDecreasing("endpoints must be positive")
    if any(x1 <= x0 for x0, x1 in zip(xs, xs[1:])):
        raise NotDecreasing("vertex abscissae must increase")
    if any(s >= 0 for s in c.slopes()):
        raise NotDecreasing("curve must be strictly decreasing")
    return c


def _slope_bound(slopes) -> Fraction:
    return max(max(-s, -1 / s) for s in slopes)


def continuous_lower_bound(c: Curve, samples: int = 64) -> Fraction:
    """``sup max(-slope, -1/slope)``; exact for polygonal curves, a
    difference-quotient lower estimate for sampled ones."""
    if samples < 2:
        raise KappaError("need at least 2 samples")
    if c.kind != "sampled":
        return _slope_bound(c.slopes())
    xs = [c.b * k / samples for k in range(samples + 1)]
    ys = [Q(c.fn(x)) for x in xs]
    slopes = [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1 in zip(xs, xs[1:], ys, ys[1:])]
    if any(s >= 0 for s in slopes):
        raise NotDecreasing("sampled curve is not strictly decreasing")
    return _slope_bound(slopes)


def bound_is_exact(c: Curve) -> bool:
    return c.kind != "sampled"


@dataclass(frozen=True)
class LinearOptimum:
    """``f(u, v) = min(c_u u + c_v v, M)``."""

    c_u: Fraction
    c_v: Fraction
    M: Fraction

    @property
    def complexity(self) -> Fraction:
        return max(self.c_u, self.c_v)

    def __call__(self, u, v) -> Fraction:
        return min(self.c_u * Q(u) + self.c_v * Q(v), self.M)

    def realizes(self, c: Curve) -> bool:
        """Level set ``f = M`` is the line and both partials drop by >= 1."""
        on_line = self.M == self.c_v * c.a == self.c_u * c.b
        return c.kind == "linear" and on_line and self.c_u >= 1 and self.c_v >= 1

    def to_json(self) -> dict:
        return {"c_u": fmt_q(self.c_u), "c_v": fmt_q(self.c_v), "M": fmt_q(self.M),
                "complexity": fmt_q(self.complexity)}


def linear_curve_optimum(a, b) -> LinearOptimum:
    a, b = Q(a), Q(b)
    if a <= 0 or b <= 0:
        raise NotDecreasing("endpoints must be positive")
    M = max(a, b)
    return LinearOptimum(M / b, M / a, M)


# sampled functions

@dataclass(frozen=True)
class SampledFunction:
    us: tuple[Fraction, ...]
    vs: tuple[Fraction, ...]
    values: tuple[tuple[Fraction, ...], ...]  # values[k][l] = f(us[k], vs[l])

    @classmethod
    def from_function(cls, fn: Callable, us: Sequence, vs: Sequence) -> "SampledFunction":
        us, vs = tuple(map(Q, us)), tuple(map(Q, vs))
        return cls(us, vs, tuple(tuple(Q(fn(u, v)) for v in vs) for u in us))

    @classmethod
    def uniform(cls, fn: Callable, umax, vmax, steps: int) -> "SampledFunction":
        us = [Q(umax) * k / steps for k in range(steps + 1)]
        vs = [Q(vmax) * k / steps for k in range(steps + 1)]
        return cls.from_function(fn, us, vs)


@dataclass(frozen=True)
class GViolation:
    condition: str
    at: tuple
    amount: Fraction

    def to_json(self) -> dict:
        return {"condition": self.condition, "at": [fmt_q(x) for x in self.at],
                "amount": fmt_q(self.amount)}


@dataclass
class GReport:
    violations: list[GViolation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def _uniform(xs: Sequence[Fraction]) -> bool:
    return len({b - a for a, b in zip(xs, xs[1:])}) <= 1


DIRECTIONS = ((1, 1), (1, 2), (2, 1))


def check_G_membership(f: SampledFunction) -> GReport:
    """Sampled checks of pointedness (a), monotonicity (b), concavity along
    rows and columns (c), submodularity on cells (d) and concavity along a
    few positive lattice directions ("direction")."""
    us, vs, F = f.us, f.vs, f.values
    out: list[GViolation] = []
    p, q = len(us), len(vs)
    if us[0] == 0 and vs[0] == 0 and F[0][0] != 0:
        out.append(GViolation("a", (us[0], vs[0]), F[0][0]))
    for k in range(p):
        for l in range(q):
            if k + 1 < p and F[k + 1][l] < F[k][l]:
                out.append(GViolation("b", (us[k], vs[l]), F[k + 1][l] - F[k][l]))
            if l + 1 < q and F[k][l + 1] < F[k][l]:
                out.append(GViolation("b", (us[k], vs[l]), F[k][l + 1] - F[k][l]))
            if 0 < k < p - 1:
                s0 = (F[k][l] - F[k - 1][l]) / (us[k] - us[k - 1])
                s1 = (F[k + 1][l] - F[k][l]) / (us[k + 1] - us[k])
                if s1 > s0:
                    out.append(GViolation("c", (us[k], vs[l]), s0 - s1))
            if 0 < l < q - 1:
                s0 = (F[k][l] - F[k][l - 1]) / (vs[l] - vs[l - 1])
                s1 = (F[k][l + 1] - F[k][l]) / (vs[l + 1] - vs[l])
                if s1 > s0:
                    out.append(GViolation("c", (us[k], vs[l]), s0 - s1))
            if k + 1 < p and l + 1 < q:
                d = F[k][l + 1] + F[k + 1][l] - F[k][l] - F[k + 1][l + 1]
                if d < 0:
                    out.append(GViolation("d", (us[k], vs[l]), d))
    if _uniform(us) and _uniform(vs):
        for dk, dl in DIRECTIONS:
            for k in range(p - 2 * dk):
                for l in range(q - 2 * dl):
                    d = 2 * F[k + dk][l + dl] - F[k][l] - F[k + 2 * dk][l + 2 * dl]
                    if d < 0:
                        out.append(GViolation("direction", (us[k], vs[l], Q(dk), Q(dl)), d))
    return GReport(out)


# discretization

def discretize(c: Curve, resolution: int) -> Staircase:
    """Minimal lattice points on or above the curve scaled by ``resolution``."""
    N = int(resolution)
    if N < 1:
        raise KappaError("resolution must be at least 1")
    last = math.ceil(N * c.b)
    pts = []
    prev = None
    for i in range(last + 1):
        x = Q(i, N)
        j = math.ceil(N * c.value(x)) if x < c.b else 0
        if prev is None or j < prev:
            pts.append((i, j))
            prev = j
    return staircase_from_points(pts)


def discretized_kappa(c: Curve, resolution: int) -> Fraction:
    return shannon_kappa(discretize(c, resolution)).kappa


def convergence_rows(c: Curve, resolutions: Sequence[int], samples: int = 64) -> list[tuple]:
    """``(N, kappa_N, continuous bound)`` triples."""
    bound = continuous_lower_bound(c, samples)
    return [(N, discretized_kappa(c, N), bound) for N in resolutions]
