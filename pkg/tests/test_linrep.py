from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bipartite_kappa import linrep
from bipartite_kappa.errors import PreconditionViolation
from bipartite_kappa.shannon import bound_matus
from oracles import fraction_rank

F = Fraction


@pytest.mark.parametrize("w,ell,want", [(3, 2, F(5, 3)), (2, 4, F(7, 4)), (2, 6, F(11, 6))])
def test_combined_complexity_examples(w, ell, want):
    assert linrep.combined_complexity_height1(w, ell) == want


def test_combined_complexity_matches_kappa0():
    for w in range(2, 7):
        for ell in range(2, 7):
            assert linrep.combined_complexity_height1(w, ell) == bound_matus((w,) * (ell - 1))


@pytest.mark.parametrize("w,ell,secret,share", [(3, 2, 3, 5), (2, 2, 2, 3)])
def test_share_table(w, ell, secret, share):
    t = linrep.scheme_shares_height1(w, ell, 4, 4)
    assert t.secret == secret and t.share_n1 == t.share_n2 == share
    assert t.ratio == linrep.combined_complexity_height1(w, ell)
    assert t.to_json()["ratio"] == f"{share}/{secret}"


def test_share_table_preconditions():
    with pytest.raises(PreconditionViolation):
        linrep.combined_complexity_height1(1, 3)
    with pytest.raises(PreconditionViolation):
        linrep.scheme_shares_height1(3, 2, 0, 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=6))
def test_rank_matches_plain_elimination(rows):
    assert linrep.rank(rows) == fraction_rank(rows)


def test_rank_with_fractions():
    assert linrep.rank([[F(1, 2), 1], [1, 2]]) == 1
    assert linrep.rank([]) == 0


def test_scheme_shapes_and_registry():
    s = linrep.build_scheme_30_11_03(1)
    assert linrep.rank(s.secret_rows()) == 2
    assert all(linrep.rank(s.rows(*p)) == 3 for p in s.participants())
    assert s.complexity == F(3, 2)
    assert s.registry() != linrep.build_scheme_30_11_03(2).registry()
    with pytest.raises(PreconditionViolation):
        linrep.build_scheme_30_11_03(1, n1=2)


@pytest.mark.parametrize("seed", range(5))
def test_generic_schemes_verify(seed):
    rep = linrep.verify_scheme(linrep.build_scheme_30_11_03(seed))
    assert rep.ok and rep.checked == 1 + 3 + 1 + 3 + 9


def test_larger_parts_verify():
    assert linrep.verify_scheme(linrep.build_scheme_30_11_03(7, 4, 3)).ok


def test_negative_controls():
    s = linrep.build_scheme_30_11_03(3)
    # dropping alpha3, alpha4 makes pairs inside the first part learn the secret
    assert linrep.verify_scheme(linrep.degenerate_control(s)).conditions() == {"c"}
    assert linrep.verify_scheme(linrep.cross_control(s)).conditions() >= {"b"}
