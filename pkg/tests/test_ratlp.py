import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bipartite_kappa import ratlp
from bipartite_kappa.errors import DimensionMismatch
from oracles import BEALE_OPTIMUM, beale, brute_force_lp, random_lp

GE, EQ = ratlp.GE, ratlp.EQ


def test_small_textbook_problem():
    # min x + y  s.t.  x + 2y >= 4, 3x + y >= 6
    p = ratlp.lp_problem(2, [([1, 2], GE, 4), ([3, 1], GE, 6)], [1, 1])
    s = ratlp.solve(p)
    assert s.optimal and s.value == Fraction(14, 5)
    assert s.assignment == (Fraction(8, 5), Fraction(6, 5))
    assert ratlp.check_solution(p, s)


def test_equality_and_free_variable():
    # min x subject to x = y - 3 with y >= 0 and x free
    p = ratlp.lp_problem(2, [({0: 1, 1: -1}, EQ, -3)], [1, 0], free=[True, False])
    s = ratlp.solve(p)
    assert s.value == -3 and ratlp.check_solution(p, s)


def test_infeasible_and_unbounded():
    p = ratlp.lp_problem(1, [([1], GE, 2), ([-1], GE, -1)], [1])
    assert ratlp.solve(p).status is ratlp.Status.INFEASIBLE
    q = ratlp.lp_problem(2, [([1, -1], GE, 0)], [0, -1])
    assert ratlp.solve(q).status is ratlp.Status.UNBOUNDED


def test_duals_certify_and_tampering_is_caught():
    p = ratlp.lp_problem(2, [([1, 2], GE, 4), ([3, 1], GE, 6)], [1, 1])
    s = ratlp.solve(p)
    assert len(s.duals) == 2 and all(y >= 0 for y in s.duals)
    bad = ratlp.LpSolution(s.status, s.value - 1, s.assignment, s.basis, s.bounds, s.duals)
    assert not ratlp.check_solution(p, bad)
    off = ratlp.LpSolution(s.status, Fraction(4), (Fraction(4), Fraction(0)), s.basis,
                           s.bounds, s.duals)
    assert not ratlp.check_solution(p, off)


def test_dimension_errors():
    with pytest.raises(DimensionMismatch):
        ratlp.lp_problem(2, [([1, 2, 3], GE, 0)], [1, 1])
    with pytest.raises(DimensionMismatch):
        ratlp.lp_problem(2, [], [1])
    with pytest.raises(ValueError):
        ratlp.make_constraint([1], "<=", 0, 1)


def test_beale_terminates_at_optimum():
    p = beale()
    s = ratlp.solve(p)
    assert s.optimal and s.value == BEALE_OPTIMUM
    assert ratlp.check_solution(p, s)


def test_dump_lists_every_constraint():
    p = ratlp.lp_problem(2, [([1, 2], GE, 4, "a"), ([3, 1], EQ, 6, "b")], [1, 1],
                         free=[False, True])
    text = p.dump()
    assert text.count("\n") == 3 and "free x1" in text


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_agrees_with_vertex_enumeration(seed):
    p = random_lp(random.Random(seed), max_vars=4, max_cons=8)
    status, value = brute_force_lp(p)
    s = ratlp.solve(p)
    assert s.status is status
    if status is ratlp.Status.OPTIMAL:
        assert s.value == value and ratlp.check_solution(p, s)
