from fractions import Fraction

import pytest

from chabauty_bounds.bounds import (
    RANK_CAVEAT, annulus_report, annulus_zero_bound, case2_feasible, e_const,
    exact_forms_dim_lb, gsp_order, h1_wide_open, n_g_1, rational_point_bound, replay,
    stoll_cover, stoll_weighted, torsion_bound_intro, torsion_bound_theorem,
    wide_open_report, wide_open_zero_bound,
)
from chabauty_bounds.errors import PreconditionError
from chabauty_bounds.exact import np_value

F = Fraction


def gsp_oracle(g, ell):
    # |Sp_2g| * (ell - 1), Sp order written as ell^{g^2} prod (ell^{2i} - 1)
    out = ell - 1
    out *= ell ** (g * g)
    for i in range(1, g + 1):
        out *= ell ** (2 * i) - 1
    return out


@pytest.mark.parametrize("g,ell,expected", [(1, 5, 480), (1, 2, 6), (2, 5, 37440000)])
def test_gsp_examples(g, ell, expected):
    assert gsp_order(g, ell) == expected


def test_gsp_inequality_grid():
    for g in range(1, 11):
        for ell in (2, 3, 5, 7):
            assert gsp_order(g, ell) < ell ** (2 * g * g + g + 1)


def test_gsp_matches_gl2():
    # GSp_2 = GL_2
    for ell in (2, 3, 5, 7, 11):
        assert gsp_order(1, ell) == (ell**2 - 1) * (ell**2 - ell)


def test_e_const():
    assert e_const(2, 3) == gsp_order(2, 5)
    assert e_const(2, 5) == gsp_order(2, 7)
    assert e_const(1, 2) == 480
    with pytest.raises(PreconditionError):
        e_const(2, 4)


def test_stoll_cover_examples():
    assert stoll_cover(3, 3, 0) == (43, 3)
    assert stoll_cover(2, 2, 2) == (6, 3)
    with pytest.raises(PreconditionError):
        stoll_cover(3, 3, 4)
    with pytest.raises(PreconditionError):
        stoll_cover(6, 3, 0)


def test_stoll_weighted_max_at_zero():
    for q in (2, 3, 4, 5, 7, 8, 9, 25, 27):
        for g in range(2, 11):
            ws = [stoll_weighted(q, g, t) for t in range(g + 1)]
            assert max(ws) == ws[0] and ws == sorted(ws, reverse=True)


def test_rational_point_bound():
    rep = rational_point_bound(3, 1, 3, 3)
    assert rep.final_bound == 343 and rep.step("coefficient") == 49 and rep.step("N_p") == 7
    assert RANK_CAVEAT in rep.caveats
    assert replay(rep)
    assert rational_point_bound(3, 1, 3, 3, use_remark=True).final_bound == 490
    rep2 = rational_point_bound(2, 1, 2, 3)
    assert rep2.step("coefficient") == 36
    assert rep2.final_bound == 36 * np_value(2, F(1), 5)
    for g in range(3, 21):
        assert rational_point_bound(3, 1, 3, g).final_bound <= n_g_1(g)
        assert rational_point_bound(3, 1, 3, g, use_remark=True).final_bound == n_g_1(g)


@pytest.mark.parametrize("args", [(3, 1, 3, 2), (4, 1, 3, 3), (3, 0, 3, 3)])
def test_rational_point_preconditions(args):
    with pytest.raises(PreconditionError):
        rational_point_bound(*args)


def test_n_g_1():
    assert n_g_1(3) == 490 and n_g_1(4) == 980
    for g in range(3, 51):
        assert (21 * g - 14) * (4 * g - 2) == n_g_1(g)


def test_torsion_theorem():
    one = torsion_bound_theorem(2, 3, 1, "one")
    two = torsion_bound_theorem(2, 3, 1, "two")
    N = np_value(3, F(1, 4 * gsp_order(2, 5)), 2)
    assert one.final_bound == 40 * N and two.final_bound == 10 * N
    assert replay(one) and replay(two)
    with pytest.raises(PreconditionError):
        torsion_bound_theorem(2, 3, 1, 3)


def test_torsion_intro_dominance():
    intro = torsion_bound_intro(4, 1)
    assert replay(intro)
    for p in (2, 3, 5, 7):
        assert torsion_bound_theorem(4, p, 1, "one").final_bound <= intro.final_bound
    assert torsion_bound_intro(4, 2).final_bound >= intro.final_bound
    with pytest.raises(PreconditionError):
        torsion_bound_intro(3, 1)


def test_wide_open_and_annulus():
    assert wide_open_zero_bound(3, 1, 2, 3) == 15
    assert wide_open_zero_bound(1, 1, 2, 5) == 4
    assert annulus_zero_bound(1, 2, 3) == 10
    assert annulus_zero_bound(1, 3, 3) == 14
    for r in (F(1, 7), F(1, 2), F(3)):
        assert wide_open_zero_bound(2, r, 3, 3) == annulus_zero_bound(r, 3, 3)
    assert wide_open_zero_bound(3, 1, 2, 3, leaf_free=True) == 3 * np_value(3, F(1), 2)
    rs = [F(1, 9), F(1, 3), F(1), F(2)]
    vals = [annulus_zero_bound(r, 3, 2) for r in rs]
    assert vals == sorted(vals, reverse=True)
    assert replay(wide_open_report(3, 1, 2, 3)) and replay(annulus_report(1, 2, 3))


def test_replay_detects_tampering():
    rep = rational_point_bound(3, 1, 3, 3)
    rep.final_bound += 1
    assert not replay(rep)


def test_dimension_counts():
    assert h1_wide_open(2, 3) == 6 and h1_wide_open(3, 1) == 6
    with pytest.raises(PreconditionError):
        h1_wide_open(0, 1)
    assert exact_forms_dim_lb(5, 0, 3) == 3 and exact_forms_dim_lb(4, 0, 3) == 2
    assert case2_feasible(6, 0, 3) and case2_feasible(5, 0, 3) and not case2_feasible(4, 0, 3)
    for g in range(21):
        for w in range(21):
            for d in range(21):
                assert case2_feasible(g, w, d) == (g > 2 * w + 2 * d - 2)
                assert (exact_forms_dim_lb(g, w, d) >= 2) == (g > 2 * w + d)


def test_report_json_shape():
    js = torsion_bound_intro(4, 1).to_json()
    assert js["final_bound"] == torsion_bound_intro(4, 1).final_bound
    assert js["np_calls"][0]["r"].startswith("1/")


def test_torsion_intro_golden_value():
    rep = torsion_bound_intro(4, 1)
    assert rep.final_bound == 1729692209984101643799795603537754544
    r, N = rep.np_calls[0].r, rep.step("N_p")
    assert rep.step("coefficient") == 208 and r == F(1, 4 * 7**37)
    # definition check: N - 1 violates, N and every later block start satisfy
    from chabauty_bounds.exact import floor_log
    assert not r * (N - 1 - 6) > floor_log(2, N - 1)
    assert r * (N - 6) > floor_log(2, N)
    for j in range(floor_log(2, N) + 1, 400):
        assert r * (2**j - 6) > j
