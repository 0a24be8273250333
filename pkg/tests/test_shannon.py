from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bipartite_kappa import ratlp
from bipartite_kappa.core import qualmap, staircase_from_points
from bipartite_kappa.errors import DimensionMismatch, NonPositiveWidth, WidthTooSmall
from bipartite_kappa.shannon import (
    KappaResult, RankGrid, applicable_bounds, bound_matus, bound_matus_improved,
    bound_single_step, build_shannon_lp, kappa, shannon_constraints, verify_rankgrid,
)

F = Fraction


def test_lp_size_for_fig6_grid():
    lp = build_shannon_lp(staircase_from_points([(2, 4), (5, 2)], 8, 6))
    assert lp.nvars == 63 + 1


def test_smallest_threshold_has_one_strong_constraint():
    cons = list(shannon_constraints(qualmap(staircase_from_points([(1, 0)]))))
    strong = [c for c in cons if c.rhs]
    assert len(strong) == 1
    assert strong[0].coeffs == (((1, 0), 1), ((0, 0), -1))


def test_constraints_on_3x3_grid_match_hand_count():
    # q(i, j) = i >= 1 and j >= 1 on 0..2 x 0..2, listed by hand
    cons = list(shannon_constraints(qualmap(staircase_from_points([(1, 1)], 2, 2))))
    kinds = Counter(c.kind for c in cons)
    assert kinds == Counter({"mono-h": 4, "strong-mono-h": 2, "mono-v": 4, "strong-mono-v": 2,
                             "sub1-h": 1, "strong-sub1-h": 2, "sub1-v": 1, "strong-sub1-v": 2,
                             "sub2": 4})
    strong = {(c.kind, c.at) for c in cons if c.rhs}
    assert strong == {("strong-mono-h", (0, 1)), ("strong-mono-h", (0, 2)),
                      ("strong-mono-v", (1, 0)), ("strong-mono-v", (2, 0)),
                      ("strong-sub1-h", (1, 1)), ("strong-sub1-h", (1, 2)),
                      ("strong-sub1-v", (1, 1)), ("strong-sub1-v", (2, 1))}


@pytest.mark.parametrize("pts,grid,want", [
    ([(2, 4), (5, 2)], (8, 6), F(5, 3)),
    ([(0, 3), (1, 1), (3, 0)], None, F(3, 2)),
    ([(1, 0)], None, F(1)),
    ([(0, 2), (1, 1), (2, 0)], None, F(1)),
])
def test_kappa_examples(pts, grid, want):
    s = staircase_from_points(pts, *(grid or ()))
    r = kappa(s)
    assert r.kappa == want
    assert r.witness.complexity == want
    assert verify_rankgrid(s, r.witness) == []


def test_kappa_result_json_round_trip():
    r = kappa(staircase_from_points([(0, 3), (1, 1), (3, 0)]))
    back = KappaResult.from_json(r.to_json(witness=True))
    assert back.kappa == r.kappa and back.staircase == r.staircase
    assert back.witness == r.witness
    assert r.to_json()["kappa"] == "3/2"


def test_rankgrid_csv_round_trip_puts_top_row_first():
    g = RankGrid.from_function(lambda i, j: F(i + 2 * j, 3), 2, 1)
    assert g.to_csv().splitlines()[0] == "2/3,1/1,4/3"
    assert RankGrid.from_csv(g.to_csv()) == g


def test_zero_grid_violates_strong_monotonicity():
    s = staircase_from_points([(1, 1)], 2, 2)
    bad = verify_rankgrid(s, RankGrid.from_function(lambda i, j: 0, 2, 2))
    assert {v.kind for v in bad} >= {"strong-mono-h", "strong-mono-v"}
    with pytest.raises(DimensionMismatch):
        verify_rankgrid(s, RankGrid.from_function(lambda i, j: 0, 3, 2))


def test_origin_and_negativity_reported():
    s = staircase_from_points([(1, 0)])
    g = RankGrid(1, 0, ((F(1),), (F(-1),)))
    kinds = {v.kind for v in verify_rankgrid(s, g)}
    assert "origin" in kinds and "nonneg" in kinds


@pytest.mark.parametrize("w,want", [(3, F(5, 3)), (1, F(1)), (5, F(9, 5))])
def test_bound_single_step(w, want):
    assert bound_single_step(w) == want


def test_bound_errors():
    with pytest.raises(NonPositiveWidth):
        bound_single_step(0)
    with pytest.raises(WidthTooSmall):
        bound_matus([3, 1])
    with pytest.raises(WidthTooSmall):
        bound_matus([])


def test_bound_matus_examples():
    assert bound_matus((3, 3, 2, 3)) == F(15, 7)
    assert bound_matus((3,)) == F(5, 3)
    for w in (2, 3, 5):
        for ell in (2, 3, 4):
            assert bound_matus((w,) * (ell - 1)) == 1 + F(ell - 1) / (1 + F(ell - 1, w - 1))


def test_bound_matus_improved_examples():
    assert F(15, 7) < bound_matus_improved((3, 3, 2, 3))
    assert bound_matus_improved((3, 3, 3)) == bound_matus((3, 3, 3))
    assert bound_matus_improved((4, 2, 4)) > bound_matus((4, 2, 4))


def test_applicable_bounds_flags_hypotheses():
    b = applicable_bounds(staircase_from_points([(1, 4), (4, 3), (7, 2), (9, 1), (12, 0)]))
    assert b["matus"] == F(15, 7) and "matus_improved" in b
    assert "matus" not in applicable_bounds(staircase_from_points([(0, 3), (1, 1), (3, 0)]))
    assert applicable_bounds(staircase_from_points([(1, 3), (6, 0)]))["single_step"] == F(9, 5)


@st.composite
def small_staircases(draw, max_side=5):
    i0 = draw(st.integers(0, 2))
    j = draw(st.integers(1, 4))
    pts = [(i0, j)]
    while pts[-1][1] > 0 and pts[-1][0] < max_side - 1 and draw(st.booleans()):
        i, j = pts[-1]
        pts.append((i + draw(st.integers(1, 3)), j - draw(st.integers(1, j))))
    pts = [p for p in pts if p[0] <= max_side]
    return staircase_from_points(pts)


@settings(max_examples=40, deadline=None)
@given(small_staircases())
def test_witness_verifies_and_bounds_are_sound(s):
    r = kappa(s)
    assert verify_rankgrid(s, r.witness) == []
    assert r.kappa >= 1  # the origin is never qualified here
    for name, b in applicable_bounds(s).items():
        assert b <= r.kappa, name


@settings(max_examples=15, deadline=None)
@given(small_staircases(max_side=3))
def test_kappa_grid_stable_under_enlargement(s):
    assert kappa(s.enlarged(1)).kappa == kappa(s).kappa


def test_lp_certificate_of_shannon_problem():
    lp = build_shannon_lp(staircase_from_points([(2, 4), (5, 2)], 8, 6))
    sol = ratlp.solve(lp)
    assert ratlp.check_solution(lp, sol)


ACCEPTANCE = [([(2, 4), (5, 2)], (8, 6)), ([(1, 4), (4, 3), (7, 2), (9, 1), (12, 0)], None),
              ([(0, 3), (1, 1), (3, 0)], None)]


@pytest.mark.parametrize("pts,grid", ACCEPTANCE)
def test_acceptance_instances_are_grid_stable(pts, grid):
    s = staircase_from_points(pts, *(grid or ()))
    base = kappa(s).kappa
    assert kappa(s.enlarged(1)).kappa == base
    assert kappa(s.enlarged(2)).kappa == base


def test_widths_3323_cross_checked_in_floating_point():
    # The exact optimum here is 81/37, which also equals the improved
    # bound. A second solver in floating point agrees.
    optimize = pytest.importorskip("scipy.optimize")
    import numpy as np

    s = staircase_from_points([(1, 4), (4, 3), (7, 2), (9, 1), (12, 0)])
    lp = build_shannon_lp(s)
    ge = [c for c in lp.constraints if c.relation == ratlp.GE]
    eq = [c for c in lp.constraints if c.relation == ratlp.EQ]
    A = np.array([[float(v) for v in c.dense(lp.nvars)] for c in ge])
    res = optimize.linprog(
        [float(v) for v in lp.objective],
        A_ub=-A, b_ub=[-float(c.rhs) for c in ge],
        A_eq=[[float(v) for v in c.dense(lp.nvars)] for c in eq], b_eq=[float(c.rhs) for c in eq],
        bounds=[(0, None)] * lp.nvars, method="highs")
    assert res.status == 0
    assert abs(res.fun - 81 / 37) < 1e-9
    assert kappa(s).kappa == F(81, 37) == bound_matus_improved((3, 3, 2, 3))
