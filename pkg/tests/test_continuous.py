from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bipartite_kappa import continuous as ct
from bipartite_kappa.errors import KappaError, NotDecreasing
from bipartite_kappa.shannon import bound_matus

F = Fraction


def test_bound_examples():
    assert ct.continuous_lower_bound(ct.Curve.linear(2, 1)) == 2
    assert ct.continuous_lower_bound(ct.Curve.linear(1, 1)) == 1
    c = ct.Curve.piecewise([(0, 3), (1, 1), (5, 0)])  # slopes -2 then -1/4
    assert c.slopes() == [-2, F(-1, 4)]
    assert ct.continuous_lower_bound(c) == 4
    kink = ct.Curve.piecewise([(0, 3), (1, 1), (3, 0)])  # slopes -2 then -1/2
    assert ct.continuous_lower_bound(kink) == 2


def test_sampled_curve_bound_is_a_lower_estimate():
    # slope -1/2 - 3x/2 runs from -1/2 to -2, so the supremum is 2
    c = ct.Curve.sampled(lambda x: F(5, 4) - x / 2 - 3 * x * x / 4, F(5, 4), 1)
    est = ct.continuous_lower_bound(c, samples=16)
    assert F(3, 2) < est < 2 and not ct.bound_is_exact(c)
    assert est < ct.continuous_lower_bound(c, samples=64) < 2
    flat_start = ct.Curve.sampled(lambda x: 1 - x * x, 1, 1)
    assert ct.continuous_lower_bound(flat_start, samples=64) > 50
    with pytest.raises(KappaError):
        ct.continuous_lower_bound(c, samples=1)


def test_curve_validation():
    with pytest.raises(NotDecreasing):
        ct.Curve.linear(0, 1)
    with pytest.raises(NotDecreasing):
        ct.Curve.piecewise([(0, 2), (1, 2), (2, 0)])
    with pytest.raises(KappaError):
        ct.Curve.piecewise([(1, 2), (2, 0)])
    with pytest.raises(KappaError):
        ct.Curve.sampled(lambda x: 1 - x, 2, 1)


@pytest.mark.parametrize("a,b,want", [(2, 1, 2), (3, 3, 1), (3, 2, F(3, 2))])
def test_linear_optimum(a, b, want):
    opt = ct.linear_curve_optimum(a, b)
    c = ct.Curve.linear(a, b)
    assert opt.complexity == want == ct.continuous_lower_bound(c)
    assert opt.realizes(c)
    assert opt(0, a) == opt(b, 0) == opt.M


def test_membership_examples():
    good = ct.SampledFunction.uniform(ct.LinearOptimum(F(2), F(1, 2), F(3)), 4, 4, 8)
    assert ct.check_G_membership(good).ok
    zero = ct.SampledFunction.uniform(lambda u, v: 0, 1, 1, 4)
    assert ct.check_G_membership(zero).ok
    prod = ct.SampledFunction.uniform(lambda u, v: min(u, 1) * min(v, 1), 2, 2, 8)
    rep = ct.check_G_membership(prod)
    assert "d" in rep.conditions() and "direction" in rep.conditions()
    assert not ({"a", "b", "c"} & rep.conditions())


def test_membership_flags_pointedness_and_monotonicity():
    rep = ct.check_G_membership(ct.SampledFunction.uniform(lambda u, v: 1 - u, 1, 1, 2))
    assert {"a", "b"} <= rep.conditions()


def test_discretize_examples():
    s = ct.discretize(ct.Curve.linear(1, 2), 3)
    assert s.widths == (2, 2, 2) and s.heights == (1, 1, 1)
    # the first point sits on the axis, so only the last N-1 steps count
    assert s.points[0] == (0, 3)
    assert ct.discretized_kappa(ct.Curve.linear(1, 2), 3) == F(5, 3) == bound_matus((2, 2))
    assert ct.discretized_kappa(ct.Curve.linear(1, 2), 1) == 1
    assert ct.discretize(ct.Curve.linear(1, 1), 4).points == tuple((i, 4 - i) for i in range(5))
    with pytest.raises(KappaError):
        ct.discretize(ct.Curve.linear(1, 1), 0)


def test_convergence_rows_increase_toward_bound():
    rows = ct.convergence_rows(ct.Curve.linear(1, 2), range(2, 5))
    ks = [k for _, k, _ in rows]
    assert ks == sorted(ks) and all(k < b for _, k, b in rows)


@st.composite
def polygons(draw):
    n = draw(st.integers(1, 4))
    xs = sorted(set(draw(st.lists(st.integers(1, 20), min_size=n, max_size=n))))
    ys = sorted(set(draw(st.lists(st.integers(1, 20), min_size=len(xs), max_size=len(xs)))),
                reverse=True)
    k = min(len(xs), len(ys))
    pts = [(0, ys[0] + 1)] + list(zip(xs[:k - 1], ys[1:k])) + [(xs[k - 1] + 1, 0)] \
        if k > 1 else [(0, ys[0]), (xs[0], 0)]
    return ct.Curve.piecewise([(F(x), F(y, 3)) for x, y in pts])


@settings(max_examples=100, deadline=None)
@given(polygons())
def test_bound_symmetric_under_axis_swap(c):
    assert ct.continuous_lower_bound(c) == ct.continuous_lower_bound(c.inverse())
    assert ct.continuous_lower_bound(c) >= 1


@settings(max_examples=40, deadline=None)
@given(st.fractions(F(1, 4), 4, max_denominator=6), st.fractions(F(1, 4), 4, max_denominator=6),
       st.fractions(F(1, 2), 4, max_denominator=6))
def test_min_affine_functions_are_members(cu, cv, M):
    f = ct.SampledFunction.uniform(ct.LinearOptimum(cu, cv, M), 3, 3, 6)
    assert ct.check_G_membership(f).ok
