import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybridsum.acceptance import curated_sweep, degenerate_item
from hybridsum.algebra import RationalMap, Tri
from hybridsum.bounds import (BOUND_CSV_HEADER, SweepItem, bound_ratio_sweep, bound_report,
                              complete_hybrid_sum, complete_shifted_sum, incomplete_direct,
                              incomplete_via_completion, max_ratio, tail_bound_check,
                              tail_bound_grid, weil_bound)
from hybridsum.characters import AddChar, MultChar
from hybridsum.field import is_prime
from hybridsum.oracles import brute_term
from hybridsum.polyparse import parse_poly, parse_rational

from conftest import field, polys


def setup(p, curve, g, f, a, k):
    F = field(p)
    return (parse_poly(curve, F), parse_rational(g, F), parse_rational(f, F), MultChar(F, a),
            AddChar(F, k))


def test_complete_sum_examples():
    p = 101
    assert abs(complete_hybrid_sum(*setup(p, "y", "x", "0", 2, 0))) < 1e-9
    assert abs(complete_hybrid_sum(*setup(p, "y - x", "1", "x", 1, 1))) < 1e-9
    gauss = complete_hybrid_sum(*setup(p, "y", "x", "x", 2, 1))
    assert abs(abs(gauss) - math.sqrt(p)) < 1e-6


def test_complete_sum_order_independent():
    P, g, f, chi, psi = setup(53, "y^2 - x^3 - 1", "x + 2", "x*y", 2, 1)
    pts = [(x, y) for x in range(53) for y in range(53) if P.eval(x, y) == 0]
    rng = np.random.default_rng(0)
    rng.shuffle(pts)
    total = 0j
    for x, y in pts:
        t = brute_term(g, f, 2, 1, 1, field(53).generator, x, y, 53)
        total += t if t is not None else 0
    assert abs(total - complete_hybrid_sum(P, g, f, chi, psi)) < 1e-10


def test_complete_shifted_sum_matches_product_structure():
    # on the diagonal each shifted point is determined by x, so the sum is explicit
    P, g, f, chi, psi = setup(31, "y - x", "x", "x*y", 3, 1)
    h = (1, 4)
    got = complete_shifted_sum(P, h, 1, g, f, chi, psi)
    want = 0j
    for x in range(31):
        a, b = (x + 1) % 31, (x + 4) % 31
        if a and b:
            want += chi(a * pow(b, -1, 31) % 31) * psi((a * a - b * b) % 31)
    assert abs(got - want) < 1e-10


@pytest.mark.parametrize("p", [101, 199])
def test_completion_examples(p):
    P, g, f, chi, psi = setup(p, "y^2 - x^3 - x - 1", "x + 1", "x*y", 2, 1)
    assert abs(incomplete_via_completion(P, g, f, chi, psi, (0, p), None)
               - complete_hybrid_sum(P, g, f, chi, psi)) < 1e-7 * p
    d = incomplete_direct(P, g, f, chi, psi, None, (0, 50))
    assert abs(incomplete_via_completion(P, g, f, chi, psi, None, (0, 50)) - d) < 1e-7 * p
    assert incomplete_via_completion(P, g, f, chi, psi, (7, 7), None) == 0
    assert incomplete_direct(P, g, f, chi, psi, (7, 7), None) == 0


@settings(max_examples=25)
@given(polys(53), polys(53), polys(53), st.sampled_from([1, 2, 4, 13]), st.integers(0, 52),
       st.integers(0, 52), st.integers(1, 53), st.integers(0, 52), st.integers(1, 53))
def test_completion_identity(P, g, f, a, k, xlo, xw, ylo, yw):
    if P.deg_y < 1 or g.is_zero():
        return
    F = field(53)
    g, f = RationalMap.from_poly(g), RationalMap.from_poly(f)
    chi, psi = MultChar(F, a), AddChar(F, k)
    xr, yr = (xlo, min(53, xlo + xw)), (ylo, min(53, ylo + yw))
    for ranges in ((xr, None), (None, yr), (xr, yr)):
        d = incomplete_direct(P, g, f, chi, psi, *ranges)
        v = incomplete_via_completion(P, g, f, chi, psi, *ranges)
        assert abs(d - v) < 1e-7 * 53


def test_tail_examples():
    lhs, rhs = tail_bound_check(101, 0, 50)
    assert lhs <= rhs == 2 * 101 * math.log(101) + 50
    lhs, _ = tail_bound_check(101, 17, 18)
    assert abs(lhs - 101) < 1e-9
    lhs, _ = tail_bound_check(101, 0, 101)
    assert abs(lhs - 101) < 1e-8
    with pytest.raises(ValueError):
        tail_bound_check(101, 0, 5, k=0)


def test_tail_grid_matches_direct():
    p = 61
    for lo, hi, lhs, rhs in tail_bound_grid(p, [0, 5, 30, 61], k=2):
        d_lhs, d_rhs = tail_bound_check(p, lo, hi, k=2)
        assert abs(lhs - d_lhs) < 1e-8 and rhs == d_rhs


def test_tail_bound_all_small_primes():
    for p in (q for q in range(11, 500) if is_prime(q)):
        grid = [round(i * p / 5) for i in range(6)]
        assert all(lhs <= rhs for _, _, lhs, rhs in tail_bound_grid(p, grid))


def test_weil_bound_positive():
    for D in range(1, 6):
        for dg in range(0, 4):
            for df in range(0, 4):
                if dg + df == 0:
                    with pytest.raises(ValueError):
                        weil_bound(101, D, dg, df, 2)
                else:
                    assert weil_bound(101, D, dg, df, 2) > 0
    assert weil_bound(101, 1, 1, 2, 0, c_slack=3) == pytest.approx(4 * math.sqrt(101) + 4)


def test_curated_sweep_ratio():
    reports = bound_ratio_sweep(curated_sweep())
    assert max_ratio(reports) <= 1
    assert [r.config_id for r in reports] == sorted(r.config_id for r in reports)
    assert all(r.ratio >= 0 and r.bound > 0 for r in reports)


def test_diagonal_sweep_up_to_499():
    items = []
    for p in (101, 199, 499):
        P, g, f, _, _ = setup(p, "y - x", "x", "x*y", 1, 0)
        for a in (2, 3):
            if (p - 1) % a:
                continue
            for k in (1, 2):
                items.append(SweepItem(P, g, f, MultChar(P.field, a), AddChar(P.field, k),
                                       (0, (p + 1) // 2), (p // 4, p)))
    assert max_ratio(bound_ratio_sweep(items)) <= 1


@pytest.mark.parametrize("p", [101, 199])
def test_degenerate_config(p):
    rep = bound_report(degenerate_item(p))
    assert rep.degenerate is Tri.HOLDS
    assert rep.abs_S >= 0.4 * p
    assert abs(rep.abs_S - p / 2) <= 2 * math.sqrt(p)
    assert max_ratio([rep]) == 0.0


def test_empty_window_and_row():
    P, g, f, chi, psi = setup(101, "y - x", "x", "x*y", 2, 1)
    rep = bound_report(SweepItem(P, g, f, chi, psi, (5, 5), (0, 101)))
    assert rep.abs_S == 0 and rep.ratio == 0 and rep.m == 1
    assert len(rep.row()) == len(BOUND_CSV_HEADER)
