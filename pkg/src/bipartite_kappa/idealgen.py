"""Generation of kappa-ideal multipartite structures from integer polymatroids.

An integer polymatroid on a few elements is extended by a secret element
``0`` through a modular cut of its flats; adding generic elements along each
original element then gives a matroid whose qualified sets depend only on
their profile.  Ranks of multipartite sets come from a min-formula, so the
generic extension is never built element by element.

Subsets are bitmasks over ``ground``; public helpers also accept label sets.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import Profile, Staircase, check_profile, qualmap_from_predicate, staircase_from_qualmap
from .errors import (DegenerateParameters, ElementOutOfRange, GroundSetTooLarge, InvalidCut,
                     KappaError, MissingGamma4)

MAX_CUT_GROUND = 4


@dataclass(frozen=True)
class IntPolymatroid:
    ground: tuple[int, ...]
    rank: tuple[int, ...]  # rank[mask], bit t <-> ground[t]

    @property
    def m(self) -> int:
        return len(self.ground)

    @property
    def full(self) -> int:
        return (1 << self.m) - 1

    def mask(self, labels) -> int:
        if isinstance(labels, int):
            labels = (labels,)
        out = 0
        for x in labels:
            if x not in self.ground:
                raise ElementOutOfRange(f"element {x} not in ground set {self.ground}")
            out |= 1 << self.ground.index(x)
        return out

    def labels(self, mask: int) -> frozenset[int]:
        return frozenset(x for t, x in enumerate(self.ground) if mask >> t & 1)

    def f(self, labels) -> int:
        return self.rank[self.mask(labels)]

    def violations(self) -> list[str]:
        out = []
        if self.rank[0] != 0:
            out.append("rank of the empty set is not 0")
        for s in range(1 << self.m):
            if self.rank[s] < 0:
                out.append(f"negative rank at {sorted(self.labels(s))}")
            for t in range(self.m):
                e = 1 << t
                if s & e:
                    continue
                if self.rank[s | e] < self.rank[s]:
                    out.append(f"not monotone at {sorted(self.labels(s))}+{self.ground[t]}")
                for u in range(t + 1, self.m):
                    d = 1 << u
                    if s & d:
                        continue
                    if self.rank[s | e] + self.rank[s | d] < self.rank[s | e | d] + self.rank[s]:
                        out.append(f"not submodular at {sorted(self.labels(s))}"
                                   f"+{{{self.ground[t]},{self.ground[u]}}}")
        return out

    def is_polymatroid(self) -> bool:
        return not self.violations()

    def to_json(self) -> dict:
        return {"ground": list(self.ground),
                "rank": {_key(self.labels(s)): r for s, r in enumerate(self.rank) if s}}


def _key(labels: Iterable[int]) -> str:
    return "".join(str(x) for x in sorted(labels))


def polymatroid(rank: dict, ground: Sequence[int] | None = None) -> IntPolymatroid:
    """Build from ``{"1": 2, "2": 2, "12": 3}``-style keys (single-digit
    labels) or from frozenset keys.  Missing subsets are an error."""
    parsed = {}
    for k, v in rank.items():
        labs = frozenset(int(ch) for ch in k) if isinstance(k, str) else frozenset(k)
        parsed[labs] = int(v)
    if ground is None:
        ground = sorted(set().union(*parsed)) if parsed else []
    g = tuple(ground)
    p = IntPolymatroid(g, (0,) * (1 << len(g)))
    table = [0] * (1 << len(g))
    for s in range(1, 1 << len(g)):
        labs = p.labels(s)
        if labs not in parsed:
            raise KappaError(f"rank of {_key(labs)} missing")
        table[s] = parsed[labs]
    out = IntPolymatroid(g, tuple(table))
    bad = out.violations()
    if bad:
        raise KappaError("not a polymatroid: " + bad[0])
    return out


def polymatroid_from_json(doc) -> IntPolymatroid:
    if isinstance(doc, str):
        doc = json.loads(doc)
    ground = doc.get("ground")
    if ground is None and "m" in doc:
        ground = list(range(1, int(doc["m"]) + 1))
    return polymatroid(doc["rank"], ground)


def from_function(ground: Sequence[int], fn) -> IntPolymatroid:
    """``fn`` receives a frozenset of labels."""
    g = tuple(ground)
    p = IntPolymatroid(g, ())
    return IntPolymatroid(g, tuple(int(fn(p.labels(s))) for s in range(1 << len(g))))


def free_polymatroid(m: int) -> IntPolymatroid:
    return from_function(range(1, m + 1), len)


def bipartite_seed(a: int, b: int, c: int) -> IntPolymatroid:
    if a < 1 or b < 1 or not max(a, b) <= c <= a + b:
        raise DegenerateParameters(f"need 1 <= a, b and max(a,b) <= c <= a+b; got {(a, b, c)}")
    return polymatroid({"1": a, "2": b, "12": c})


def vamos() -> IntPolymatroid:
    """The Vamos matroid on 1..8; pairs (12), (34), (56), (78)."""
    pairs = [frozenset({1, 2}), frozenset({3, 4}), frozenset({5, 6}), frozenset({7, 8})]
    dependent = {pairs[x] | pairs[y] for x, y in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]}
    return from_function(range(1, 9),
                         lambda s: 3 if s in dependent else min(len(s), 4))


# flats and modular cuts

def _closure_mask(p: IntPolymatroid, s: int) -> int:
    r = p.rank[s]
    out = s
    for t in range(p.m):
        if p.rank[s | 1 << t] == r:
            out |= 1 << t
    return out


def closure(p: IntPolymatroid, J) -> frozenset[int]:
    """Largest superset of ``J`` with the same rank."""
    return p.labels(_closure_mask(p, p.mask(J)))


def flats(p: IntPolymatroid) -> list[frozenset[int]]:
    return [p.labels(s) for s in _flat_masks(p)]


def _flat_masks(p: IntPolymatroid) -> list[int]:
    return [s for s in range(1 << p.m) if _closure_mask(p, s) == s]


def modular_defect(p: IntPolymatroid, I, J) -> int:
    a, b = p.mask(I), p.mask(J)
    return p.rank[a] + p.rank[b] - p.rank[a | b] - p.rank[a & b]


@dataclass(frozen=True)
class ModularCut:
    flats: frozenset[int]  # masks

    def __contains__(self, mask: int) -> bool:
        return mask in self.flats

    def as_labels(self, p: IntPolymatroid) -> list[frozenset[int]]:
        return sorted((p.labels(s) for s in self.flats), key=lambda x: (len(x), sorted(x)))

    def describe(self, p: IntPolymatroid) -> list[str]:
        return [_key(x) or "{}" for x in self.as_labels(p)]


def is_modular_cut(p: IntPolymatroid, family: Iterable[int]) -> bool:
    fam = set(family)
    fl = _flat_masks(p)
    if any(s not in fl for s in fam):
        return False
    for s in fam:
        for t in fl:
            if t & s == s and t not in fam:
                return False
    for s, t in itertools.combinations(fam, 2):
        if p.rank[s] + p.rank[t] == p.rank[s | t] + p.rank[s & t] and (s & t) not in fam:
            return False
    return True


def enumerate_modular_cuts(p: IntPolymatroid) -> list[ModularCut]:
    """Nonempty modular cuts not containing the closure of the empty set."""
    if p.m > MAX_CUT_GROUND:
        raise GroundSetTooLarge(f"cut enumeration supports at most {MAX_CUT_GROUND} elements")
    fl = _flat_masks(p)
    bottom = _closure_mask(p, 0)
    proper = [s for s in fl if s != bottom]
    out = []
    for bits in range(1, 1 << len(proper)):
        fam = [s for t, s in enumerate(proper) if bits >> t & 1]
        if is_modular_cut(p, fam):
            out.append(ModularCut(frozenset(fam)))
    out.sort(key=lambda c: (len(c.flats), sorted(c.flats)))
    return out


def cut_generated_by(p: IntPolymatroid, generators: Iterable) -> ModularCut:
    """Smallest up-closed flat family containing the closures of ``generators``."""
    fl = _flat_masks(p)
    seeds = {_closure_mask(p, p.mask(g)) for g in generators}
    fam = frozenset(t for t in fl if any(t & s == s for s in seeds))
    return ModularCut(fam)


@dataclass(frozen=True)
class ExtendedPolymatroid:
    seed: IntPolymatroid
    cut: ModularCut
    poly: IntPolymatroid  # ground (0,) + seed.ground

    def f(self, labels) -> int:
        return self.poly.f(labels)


def one_point_extension(p: IntPolymatroid, cut: ModularCut) -> ExtendedPolymatroid:
    if 0 in p.ground:
        raise InvalidCut("label 0 is reserved for the secret")
    if not is_modular_cut(p, cut.flats):
        raise InvalidCut("family is not a modular cut")
    g = (0,) + p.ground
    table = [0] * (1 << (p.m + 1))
    for s in range(1 << p.m):
        table[s << 1] = p.rank[s]
        table[s << 1 | 1] = p.rank[s] + (0 if _closure_mask(p, s) in cut else 1)
    ext = IntPolymatroid(g, tuple(table))
    if table[1] != 1:
        raise InvalidCut(f"secret would get rank {table[1]}, expected 1")
    bad = ext.violations()
    if bad:
        raise InvalidCut("extension is not a polymatroid: " + bad[0])
    return ExtendedPolymatroid(p, cut, ext)


# multipartite ranks

def _parts(e) -> tuple[IntPolymatroid, int]:
    """Polymatroid and the number of non-secret parts."""
    if isinstance(e, ExtendedPolymatroid):
        return e.poly, e.seed.m
    return e, e.m


def natural_rank(e, x: Sequence[int], include0: bool = False) -> int:
    """Rank of a multipartite set with profile ``x`` in the generic extension:
    ``min_I f(I) + sum_{k not in I} x_k``."""
    p, m = _parts(e)
    x = check_profile(x)
    if len(x) != m:
        raise KappaError(f"profile has {len(x)} parts, expected {m}")
    if isinstance(e, ExtendedPolymatroid):
        weights = (1 if include0 else 0,) + x
    else:
        if include0:
            raise KappaError("include0 needs an extended polymatroid")
        weights = x
    best = None
    for s in range(1 << p.m):
        v = p.rank[s] + sum(w for t, w in enumerate(weights) if not s >> t & 1)
        best = v if best is None or v < best else best
    return best


def natural_rank_bruteforce(e, x: Sequence[int], include0: bool = False) -> int:
    """Largest ``sum y`` over ``0 <= y <= x`` with ``sum_{k in I} y_k <= f(I)``."""
    p, m = _parts(e)
    x = tuple(x)
    if isinstance(e, ExtendedPolymatroid):
        caps = (1 if include0 else 0,) + x
    else:
        caps = x
    best = 0
    for y in itertools.product(*(range(c + 1) for c in caps)):
        if sum(y) <= best:
            continue
        if all(sum(v for t, v in enumerate(y) if s >> t & 1) <= p.rank[s]
               for s in range(1, 1 << p.m)):
            best = sum(y)
    return best


def is_qualified_profile(e: ExtendedPolymatroid, x: Sequence[int]) -> bool:
    return natural_rank(e, x, True) == natural_rank(e, x, False)


def generate_structure(e: ExtendedPolymatroid, sizes: Sequence[int]) -> list[Profile]:
    """Minimal qualified profiles within ``0 <= x <= sizes``."""
    sizes = check_profile(sizes)
    if len(sizes) != e.seed.m:
        raise KappaError(f"need {e.seed.m} part sizes, got {len(sizes)}")
    qual = {x for x in itertools.product(*(range(n + 1) for n in sizes))
            if is_qualified_profile(e, x)}
    out = []
    for x in qual:
        lower = (x[:k] + (x[k] - 1,) + x[k + 1:] for k in range(len(x)) if x[k])
        if not any(y in qual for y in lower):
            out.append(x)
    return sorted(out)


# the four bipartite families

def gamma_predicate(a: int, b: int, c: int, which: int):
    if a < 1 or b < 1 or not max(a, b) <= c <= a + b:
        raise DegenerateParameters(f"need 1 <= a, b and max(a,b) <= c <= a+b; got {(a, b, c)}")
    if which == 4 and c == a + b:
        raise MissingGamma4("with c = a+b the fourth family coincides with the third")
    if which == 1:
        return lambda x1, x2: x1 >= a or (x1 >= c - b and x1 + x2 >= c)
    if which == 2:
        return lambda x1, x2: x2 >= b or (x2 >= c - a and x1 + x2 >= c)
    if which == 3:
        return lambda x1, x2: x1 >= c - b and x2 >= c - a and x1 + x2 >= c
    if which == 4:
        return lambda x1, x2: x1 >= a or x2 >= b or x1 + x2 >= c
    raise DegenerateParameters(f"family index must be 1..4, got {which}")


_GENERATORS = {1: [{1}], 2: [{2}], 3: [{1, 2}], 4: [{1}, {2}]}


def bipartite_cut(p: IntPolymatroid, which: int) -> ModularCut:
    """The cut behind family ``which`` for a two-element seed."""
    if which not in _GENERATORS:
        raise DegenerateParameters(f"family index must be 1..4, got {which}")
    a, b, c = p.f(1), p.f(2), p.f({1, 2})
    if which == 4 and c == a + b:
        raise MissingGamma4("{1} and {2} form a modular pair, so this family is not a cut")
    return cut_generated_by(p, _GENERATORS[which])


def bipartite_ideal_family(a: int, b: int, c: int, which: int,
                           n1: int | None = None, n2: int | None = None) -> Staircase:
    pred = gamma_predicate(a, b, c, which)
    n1 = a if n1 is None else n1
    n2 = b if n2 is None else n2
    return staircase_from_qualmap(qualmap_from_predicate(pred, n1, n2))


# Ingleton expression and companions

def _group(p: IntPolymatroid, x) -> int:
    return p.mask(x)


def ingleton(p, a, b, c, d) -> int:
    """``-f(a)-f(b)-f(cd)-f(abc)-f(abd)+f(ab)+f(ac)+f(ad)+f(bc)+f(bd)``.

    Arguments are elements or groups of elements (a group acts as one
    element).
    """
    if isinstance(p, ExtendedPolymatroid):
        p = p.poly
    A, B, C, D = (_group(p, x) for x in (a, b, c, d))
    if len({A, B, C, D}) < 4 or any(x & y for x, y in itertools.combinations((A, B, C, D), 2)):
        raise ElementOutOfRange("Ingleton arguments must be distinct and disjoint")
    r = p.rank
    return (-r[A] - r[B] - r[C | D] - r[A | B | C] - r[A | B | D]
            + r[A | B] + r[A | C] + r[A | D] + r[B | C] + r[B | D])


def ingleton_instances(p, elements: Sequence | None = None) -> dict[tuple, int]:
    """The six instances: one per choice of the unordered first pair."""
    if isinstance(p, ExtendedPolymatroid):
        p = p.poly
    els = tuple(p.ground if elements is None else elements)
    if len(els) != 4:
        raise ElementOutOfRange("need exactly four elements")
    out = {}
    for a, b in itertools.combinations(els, 2):
        c, d = (x for x in els if x not in (a, b))
        out[(a, b, c, d)] = ingleton(p, a, b, c, d)
    return out


def auxiliary_inequalities(p, a, b, c, d) -> tuple[int, int, int]:
    """Slacks of the three companion inequalities; all are non-negative in
    every polymatroid."""
    if isinstance(p, ExtendedPolymatroid):
        p = p.poly
    ing = ingleton(p, a, b, c, d)
    A, C = p.mask(a), p.mask(c)
    fa, fc, fac = p.rank[A], p.rank[C], p.rank[A | C]
    return ing + fa + fc - fac, ing - (fa - fac), ing - (fc - fac)


# enumeration and sampling

def _order(m: int) -> list[int]:
    return sorted(range(1, 1 << m), key=lambda s: (bin(s).count("1"), s))


def _interval(table: list[int], s: int, m: int) -> tuple[int, int | None]:
    bits = [1 << t for t in range(m) if s >> t & 1]
    lo = max(table[s ^ e] for e in bits)
    hi = None
    for e, d in itertools.combinations(bits, 2):
        v = table[s ^ e] + table[s ^ d] - table[s ^ e ^ d]
        hi = v if hi is None or v < hi else hi
    return lo, hi


def enumerate_polymatroids(m: int, max_singleton: int,
                           max_rank: int | None = None) -> Iterator[IntPolymatroid]:
    """Every integer polymatroid on ``1..m`` with singleton ranks at most
    ``max_singleton`` (and all ranks at most ``max_rank`` if given)."""
    order = _order(m)
    ground = tuple(range(1, m + 1))
    table = [0] * (1 << m)

    def rec(pos):
        if pos == len(order):
            yield IntPolymatroid(ground, tuple(table))
            return
        s = order[pos]
        lo, hi = _interval(table, s, m)
        if hi is None:
            hi = max_singleton
        if max_rank is not None:
            hi = min(hi, max_rank)
        for v in range(lo, hi + 1):
            table[s] = v
            yield from rec(pos + 1)
        table[s] = 0

    yield from rec(0)


def random_polymatroid(m: int, rng: random.Random, max_singleton: int = 3,
                       spread: int = 3) -> IntPolymatroid:
    """Sequential sampling in cardinality order; each rank is uniform on its
    feasible interval (capped ``spread`` above the lower end)."""
    order = _order(m)
    while True:
        table = [0] * (1 << m)
        for s in order:
            lo, hi = _interval(table, s, m)
            hi = max_singleton if hi is None else min(hi, lo + spread)
            if hi < lo:
                break
            table[s] = rng.randint(lo, hi)
        else:
            return IntPolymatroid(tuple(range(1, m + 1)), tuple(table))
