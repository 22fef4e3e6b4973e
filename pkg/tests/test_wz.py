from fractions import Fraction

import pytest

from supercong.congruences import get_spec
from supercong.dsl import parse_term, serialize_term
from supercong.exact import ord
from supercong.polyratio import BiPoly, RatFunc, ratfunc_equal
from supercong.terms import TermEvaluator, eval_term, shift_quotient, term_ratio
from supercong.wz import (
    WzPair,
    boundary_orders,
    check_wz_identity,
    check_wz_numeric,
    f_only_certificates,
    perturb,
    telescope_check,
    wz_pairs,
)

PAIRS = wz_pairs()
n, k = BiPoly.var("n"), BiPoly.var("k")
half = Fraction(1, 2)
PRINTED_THM3_G = (
    "sign(n+k) * poch(1/2,n) * poch(1/2,2*n+k-1) / pow(2,4*n-6) / fact(n-1)^2 / fact(n-k) / poch(1/2,k)^2"
)


@pytest.mark.parametrize("pid", ["thm1", "thm2", "thm3"])
def test_certificates_hold(pid):
    rep = check_wz_identity(PAIRS[pid])
    assert rep.symbolic_identity_holds
    assert rep.residual.is_zero()
    assert rep.numeric_grid_ok


@pytest.mark.parametrize("pid", ["thm1", "thm2", "thm3"])
def test_perturbed_certificates_fail(pid):
    rep = check_wz_identity(perturb(PAIRS[pid]))
    assert not rep.symbolic_identity_holds
    assert not rep.residual.is_zero()
    assert not rep.numeric_grid_ok


def test_thm1_linear_factor_corruption():
    p = PAIRS["thm1"]
    bad = WzPair("bad", parse_term(serialize_term(p.F).replace("(4*n+1)", "(4*n+3)")), p.G, True, 3, "A01")
    assert not check_wz_identity(bad).symbolic_identity_holds
    assert not check_wz_numeric(bad, 8)


def test_numeric_grids():
    assert check_wz_numeric(PAIRS["thm1"], 8)
    assert check_wz_numeric(PAIRS["thm3"], 6)


def test_thm2_divided_identity_matches_display():
    F, G = PAIRS["thm2"].F, PAIRS["thm2"].G
    r2 = term_ratio(F, G)
    r1 = shift_quotient(F, "k", -1) * r2
    assert ratfunc_equal(r2, RatFunc((120 * n**2 - 84 * n * k + 34 * n - 10 * k + 3) * (2 * n + k - half), 256 * n**3))
    assert ratfunc_equal(
        r1, RatFunc((120 * n**2 - 84 * n * k + 118 * n - 10 * k + 13) * (k - half) ** 3, 256 * n**3 * (n - k + 1) ** 2)
    )
    assert ratfunc_equal(
        shift_quotient(G, "n", 1),
        RatFunc((2 * n + k - half) * (2 * n + k + half) * (n + half) ** 3, 64 * n**3 * (n - k + 1) ** 2),
    )


def test_printed_thm3_mate_is_twice_the_working_one():
    printed = parse_term(PRINTED_THM3_G)
    pair = PAIRS["thm3"]
    assert not check_wz_identity(WzPair("printed", pair.F, printed, False, 3, "x01")).symbolic_identity_holds
    for nn in range(1, 6):
        for kk in range(1, 6):
            assert eval_term(printed, nn, kk) == 2 * eval_term(pair.G, nn, kk)


@pytest.mark.parametrize("pid", ["thm1", "thm2", "thm3"])
def test_telescoping(pid):
    for N in range(13):
        for kk in range(1, 7):
            assert telescope_check(PAIRS[pid], N, kk)


def test_telescoping_examples():
    assert telescope_check(PAIRS["thm1"], 2, 1)
    assert telescope_check(PAIRS["thm2"], 4, 2)
    for pair in PAIRS.values():
        assert eval_term(pair.F, 0, 0) - eval_term(pair.F, 0, 1) == eval_term(pair.G, 1, 1)


def test_boundary_thm1_p5():
    orders, low = boundary_orders(PAIRS["thm1"], 5)
    assert orders == [(1, 3), (2, 3)]
    assert low == 3
    assert ord(eval_term(PAIRS["thm1"].G, 3, 1), 5) == 3


@pytest.mark.parametrize("pid,e", [("thm1", 3), ("thm2", 5), ("thm3", 3)])
@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_boundary_orders(pid, e, p):
    orders, low = boundary_orders(PAIRS[pid], p)
    assert len(orders) == (p - 1) // 2
    assert low >= e


@pytest.mark.parametrize("p", [5, 7, 11])
def test_thm2_tail_vanishes(p):
    ev = TermEvaluator(PAIRS["thm2"].F, (p - 1) // 2)
    for nn in range((p + 1) // 2, p):
        assert ord(ev.at(nn), p) >= 5


def test_f_only_members_match_bodies():
    certs = f_only_certificates()
    assert set(certs) == {"A02b", "A03b", "A04b", "B01b", "B02b"}
    for cid in ("A02b", "A03b", "B01b"):
        body = get_spec(cid).lhs.body
        for nn in range(8):
            assert eval_term(certs[cid].F, nn, 0) == eval_term(body, nn)
