"""Independent reference implementations used only by the tests.

Nothing here imports the solver or the closed-form bounds; every routine
works from first principles so agreement is a genuine cross-check.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np

from bipartite_kappa import ratlp

# Coefficients |a| <= 5 and |b| <= 30 on at most 6 variables keep every
# vertex coordinate below ~3.2e7 (Hadamard), so these boxes contain all of
# the original vertices.
BOX_SMALL = 10 ** 8
BOX_LARGE = 2 * 10 ** 8


def _exact_solve(rows, rhs):
    """Gauss-Jordan over Fractions; None when singular."""
    n = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((k for k in range(c, n) if a[k][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for k in range(n):
            if k != c and a[k][c] != 0:
                f = a[k][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[c])]
    return [a[k][n] for k in range(n)]


def _integral(a, b):
    den = math.lcm(*(v.denominator for v in a), b.denominator)
    return [v * den for v in a], b * den


def _rows(p: ratlp.LpProblem, box: int):
    """(coeffs, rhs, is_eq) with bounds and the box appended; every row is
    scaled to integers so singular bases show up as zero determinants."""
    n = p.nvars
    out = [(*_integral(c.dense(n), c.rhs), c.relation == ratlp.EQ) for c in p.constraints]
    for j in range(n):
        e = [Fraction(0)] * n
        e[j] = Fraction(1)
        neg = [-v for v in e]
        out.append((neg, Fraction(-box), False))          # x_j <= box
        out.append((e, Fraction(-box) if p.is_free(j) else Fraction(0), False))
    return out


def _feasible(rows, x) -> bool:
    for a, b, eq in rows:
        s = sum(u * v for u, v in zip(a, x)) - b
        if s < 0 or (eq and s != 0):
            return False
    return True


def _boxed_optimum(p: ratlp.LpProblem, box: int, chunk: int = 50000):
    rows = _rows(p, box)
    n = p.nvars
    A = np.array([[float(v) for v in a] for a, _, _ in rows])
    b = np.array([float(v) for _, v, _ in rows])
    eq = np.array([e for _, _, e in rows])
    best = None
    combos = itertools.combinations(range(len(rows)), n)
    while True:
        idx = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if idx.size == 0:
            break
        M = A[idx]
        det = np.linalg.det(M)
        keep = np.abs(det) > 0.5  # integer matrices: nonzero dets are >= 1
        idx, M = idx[keep], M[keep]
        if not len(idx):
            continue
        X = np.linalg.solve(M, b[idx][:, :, None])[:, :, 0]
        S = X @ A.T - b
        tol = 1e-6 * (1 + np.abs(X).max(axis=1, initial=0))
        ok = (S >= -tol[:, None]).all(axis=1) & (np.abs(S[:, eq]) <= tol[:, None]).all(axis=1)
        for k in np.nonzero(ok)[0]:
            sub = idx[k]
            x = _exact_solve([rows[i][0] for i in sub], [rows[i][1] for i in sub])
            if x is None or not _feasible(rows, x):
                continue
            val = sum(u * v for u, v in zip(p.objective, x))
            if best is None or val < best[0]:
                best = (val, x)
    return best


def brute_force_lp(p: ratlp.LpProblem):
    """Status and optimum by enumerating vertices of two nested boxes.

    An empty small box means infeasible. A box-dependent optimum means the
    objective decreases along a ray, so the problem is unbounded.
    """
    small = _boxed_optimum(p, BOX_SMALL)
    if small is None:
        return ratlp.Status.INFEASIBLE, None
    large = _boxed_optimum(p, BOX_LARGE)
    if large[0] != small[0]:
        return ratlp.Status.UNBOUNDED, None
    return ratlp.Status.OPTIMAL, small[0]


def random_lp(rng: random.Random, max_vars: int = 6, max_cons: int = 12) -> ratlp.LpProblem:
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_cons)
    free = [rng.random() < 0.15 for _ in range(n)]
    # most instances are feasible by construction around an integer point
    anchor = [rng.randint(-1 if f else 0, 1) for f in free] if rng.random() < 0.7 else None
    cons = []
    for _ in range(m):
        row = [rng.choice([0, 0] + list(range(-5, 6))) for _ in range(n)]
        rel = ratlp.EQ if rng.random() < 0.15 else ratlp.GE
        if anchor is None:
            rhs = rng.randint(-10, 10)
        else:
            rhs = sum(a * x for a, x in zip(row, anchor))
            rhs -= 0 if rel == ratlp.EQ else rng.randint(0, 4)
            rhs = max(-10, min(10, rhs)) if rel == ratlp.GE else rhs
        cons.append((row, rel, rhs))
    obj = [rng.randint(-5, 5) for _ in range(n)]
    return ratlp.lp_problem(n, cons, obj, free=free)


def beale():
    """Beale's cycling example in equality form; optimum -1/20."""
    F = Fraction
    cons = [
        ([1, 0, 0, F(1, 4), -60, F(-1, 25), 9], ratlp.EQ, 0),
        ([0, 1, 0, F(1, 2), -90, F(-1, 50), 3], ratlp.EQ, 0),
        ([0, 0, 1, 0, 0, 1, 0], ratlp.EQ, 1),
    ]
    obj = [0, 0, 0, F(-3, 4), 150, F(-1, 50), 6]
    return ratlp.lp_problem(7, cons, obj)


BEALE_OPTIMUM = Fraction(-1, 20)


# polymatroid and secret-sharing references

def profile_rank_bruteforce(rank, m, x):
    """Largest independent profile below ``x`` for a bitmask rank table."""
    best = 0
    for y in itertools.product(*(range(v + 1) for v in x)):
        if all(sum(y[t] for t in range(m) if s >> t & 1) <= rank[s] for s in range(1, 1 << m)):
            best = max(best, sum(y))
    return best


def upward_closed(pred, n1, n2) -> bool:
    return all(not pred(i, j) or (pred(min(i + 1, n1), j) and pred(i, min(j + 1, n2)))
               for i in range(n1 + 1) for j in range(n2 + 1))


def fraction_rank(rows) -> int:
    """Row reduction over Fractions, no cleverness."""
    a = [[Fraction(v) for v in r] for r in rows]
    r = 0
    for c in range(len(a[0]) if a else 0):
        piv = next((k for k in range(r, len(a)) if a[k][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for k in range(r + 1, len(a)):
            f = a[k][c] / a[r][c]
            a[k] = [x - f * y for x, y in zip(a[k], a[r])]
        r += 1
    return r
