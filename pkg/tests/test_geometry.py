import math
from math import factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hybridsum.geometry import (Rectangle, ShiftedCurve, count_matching_tuples, count_rectangle,
                                enumerate_points, enumerate_shifted, window_positions)
from hybridsum.oracles import brute_matching_tuples, brute_points
from hybridsum.polyparse import parse_poly

from conftest import field, polys


def P(text, p):
    return parse_poly(text, field(p))


def pairs(pt):
    return sorted(zip(pt.xs.tolist(), pt.ys.tolist()))


def test_diagonal():
    pt = enumerate_points(P("y - x", 101), 0, 101)
    assert pt.r == 101 and np.all(pt.counts == 1) and not pt.duplicate_x
    assert enumerate_points(P("y - x", 101), 0, 51).r == 51


def test_circle_f5():
    pt = enumerate_points(P("x^2 + y^2 - 1", 5), 0, 5)
    assert pairs(pt) == [(0, 1), (0, 4), (1, 0), (4, 0)]
    assert pt.r == 4 and pt.duplicate_x
    assert pt.to_csv() == "x,y\n0,1\n0,4\n1,0\n4,0\n"


@pytest.mark.parametrize("text", ["y - x", "x^2 + y^2 - 1", "y^2 - x^3 - x - 1", "x*y - 1",
                                  "y^3 - x", "3*y^2 + x*y + 2", "x*y", "x^2*y - x"])
@pytest.mark.parametrize("J", [(0, 31), (0, 1), (5, 19)])
def test_fast_paths_match_exhaustive_scan(text, J):
    Q = P(text, 31)
    fast = enumerate_points(Q, *J)
    assert pairs(fast) == brute_points(Q, *J)
    assert pairs(enumerate_points(Q, *J, method="scan")) == pairs(fast)


@given(polys(13), st.integers(0, 12), st.data())
def test_membership_and_bookkeeping(q, lo, data):
    if q.deg_y < 1:
        return
    hi = data.draw(st.integers(lo + 1, 13))
    pt = enumerate_points(q, lo, hi)
    assert pairs(pt) == brute_points(q, lo, hi)
    assert pt.r == int(pt.counts.sum()) == len(pt)
    assert pt.duplicate_x == bool(np.any(pt.counts >= 2))
    for x in range(13):
        b = pt.bucket(x).tolist()
        assert b == sorted(b)


def test_membership_sampled_large_p():
    Q = P("x^2 + y^2 - 1", 10007)
    pt = enumerate_points(Q, 0, 10007)
    rng = np.random.default_rng(0)
    for i in rng.integers(0, pt.r, size=1000):
        x, y = int(pt.xs[i]), int(pt.ys[i])
        assert Q.eval(x, y) == 0


def test_rectangle_validation():
    r = Rectangle(11, 0, 10, 2, 7, 3)
    assert r.width == pytest.approx(5 / 11) and r.size_I == 11 and r.size_J == 5
    for bad in [(11, 3, 2, 0, 5, 1), (11, 0, 11, 0, 5, 1), (11, 0, 5, 5, 5, 1),
                (11, 0, 5, 0, 12, 1), (11, 0, 5, 0, 5, 0), (11, 0, 5, 0, 5, 12)]:
        with pytest.raises(ValueError):
            Rectangle(*bad)


def test_window_positions():
    assert window_positions(8, 4, 11).tolist() == [9, 10, 0, 1]
    assert window_positions(8, 4, 11, wrap=False).tolist() == [9, 10]


def test_count_rectangle():
    p = 101
    diag = enumerate_points(P("y - x", p), 0, p)
    assert all(count_rectangle(diag, n, 17) == 17 for n in range(p))
    circ = enumerate_points(P("x^2 + y^2 - 1", p), 0, p)
    assert count_rectangle(circ, 40, p) == circ.r


def test_count_rectangle_circle_large():
    p = 10007
    circ = enumerate_points(P("x^2 + y^2 - 1", p), 0, p)
    N = count_rectangle(circ, 0, 1000)
    # the circle has about one point per x on average, and never more than two
    assert abs(N - 1000) <= 10 * math.sqrt(p) * math.log(p) ** 2


def test_shifted_single_shift_is_base():
    Q = P("x^2 + y^2 - 1", 13)
    pt = enumerate_points(Q, 0, 13)
    got = enumerate_shifted(ShiftedCurve(Q, (0,)), pt, range(13))
    assert sorted(got) == pairs(pt)


def test_shifted_diagonal_one_per_x():
    Q = P("y - x", 13)
    pt = enumerate_points(Q, 0, 13)
    got = enumerate_shifted(ShiftedCurve(Q, (2, 5)), pt, range(13))
    assert len(got) == 13
    assert all(t == (x, (x + 2) % 13, (x + 5) % 13) for x, t in zip(range(13), got))


def test_shifted_circle_f5_against_pairing():
    Q = P("x^2 + y^2 - 1", 5)
    pt = enumerate_points(Q, 0, 5)
    sc = ShiftedCurve(Q, (0, 1))
    got = sorted(enumerate_shifted(sc, pt, range(5)))
    base = brute_points(Q, 0, 5)
    want = sorted((x1, y1, y2) for x1, y1 in base for x2, y2 in base if x2 == (x1 + 1) % 5)
    assert got == want
    assert all(sc.contains(t[0], t[1:]) for t in got)
    # bijection: count at each x is the product of the shifted bucket sizes
    for x in range(5):
        assert sum(t[0] == x for t in got) == pt.counts[x] * pt.counts[(x + 1) % 5]


def test_shifted_rejects_repeats():
    with pytest.raises(ValueError):
        ShiftedCurve(P("y", 5), (1, 1))


def test_shifted_equations():
    Q = P("y - x^2", 7)
    eqs = ShiftedCurve(Q, (0, 3)).equations()
    assert eqs[1] == P("y - (x + 3)^2", 7)


def test_tuple_examples():
    assert count_matching_tuples(2, 1) == 2
    assert count_matching_tuples(3, 2) == 15
    assert all(count_matching_tuples(H, 1) == H for H in range(1, 30))


@pytest.mark.parametrize("H", range(1, 7))
@pytest.mark.parametrize("j", range(0, 4))
def test_tuples_match_brute_force(H, j):
    assert count_matching_tuples(H, j) == brute_matching_tuples(H, j)


@given(st.integers(1, 200), st.integers(1, 6))
def test_tuple_sandwich(H, j):
    c = count_matching_tuples(H, j)
    falling = math.prod(range(H - j + 1, H + 1)) if j <= H else 0
    assert factorial(j) * falling <= c
    assert c <= factorial(j) * H ** j * (1 + j * j / H)


def test_tuple_upper_constant_reported():
    """Smallest c with count <= j! H^j (1 + c j^2 / H) over a grid; printed for the record."""
    worst = max((count_matching_tuples(H, j) / (factorial(j) * H ** j) - 1) * H / j ** 2
                for H in range(1, 80) for j in range(1, 5))
    print(f"empirical sandwich constant c = {worst:.4f}")
    assert worst <= 1.0


def test_tuples_big_integers():
    H = 10**7
    want = 6 * H * (H - 1) * (H - 2) + 9 * H * (H - 1) + H
    assert count_matching_tuples(H, 3) == want > 2**63
