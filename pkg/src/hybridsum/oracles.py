"""Slow, independent reference computations used to check the fast paths.

Nothing here shares code with the production routes beyond the field
arithmetic: points are found by evaluating P at every (x, y), window sums loop
over those points, tuples are enumerated outright, and Gaussian moments come
from numerical quadrature.
"""
from __future__ import annotations

import cmath
import itertools
import math
from collections import Counter

from scipy import integrate

from .algebra import BivarPoly, RationalMap


def _peval(q: BivarPoly, x: int, y: int) -> int:
    p = q.field.p
    return sum(c * pow(x, i, p) * pow(y, j, p) for (i, j), c in q.coeffs.items()) % p


def brute_points(P: BivarPoly, j_lo: int, j_hi: int) -> list[tuple[int, int]]:
    p = P.field.p
    return [(x, y) for x in range(p) for y in range(j_lo, j_hi) if _peval(P, x, y) == 0]


def brute_matching_tuples(H: int, j: int) -> int:
    """Count (h_1..h_2j) in [1,H]^2j whose halves agree as multisets, one tuple at a time."""
    n = 0
    for h in itertools.product(range(1, H + 1), repeat=2 * j):
        if Counter(h[:j]) == Counter(h[j:]):
            n += 1
    return n


def _rat(r: RationalMap, x: int, y: int):
    p = r.field.p
    den = _peval(r.denominator, x, y)
    if den == 0:
        return None
    return _peval(r.numerator, x, y) * pow(den, p - 2, p) % p


def brute_term(g, f, chi_order, chi_power, psi_k, generator, x, y, p):
    """chi(g) psi(f) at one point from scratch: discrete log by search, e(.) by cmath."""
    gv, fv = _rat(g, x, y), _rat(f, x, y)
    if gv is None or fv is None:
        return None
    if chi_order == 1:
        c = 1.0
    elif gv == 0:
        c = 0.0
    else:
        e = next(k for k in range(p - 1) if pow(generator, k, p) == gv)
        c = cmath.exp(2j * math.pi * chi_power * e / chi_order)
    return c * cmath.exp(2j * math.pi * psi_k * fv / p)


def brute_window_sum(P, g, f, chi_order, chi_power, psi_k, j_lo, j_hi, n, H, wrap=True):
    p = P.field.p
    gen = P.field.generator
    xs = [(n + h) % p for h in range(1, H + 1)] if wrap \
        else [n + h for h in range(1, H + 1) if n + h <= p - 1]
    total = 0j
    for x in xs:
        for y in range(j_lo, j_hi):
            if _peval(P, x, y) != 0:
                continue
            t = brute_term(g, f, chi_order, chi_power, psi_k, gen, x, y, p)
            if t is not None:
                total += t
    return total


def quad_gaussian_moment(k: int, variance: float) -> float:
    """E[T^k] for a centred normal with the given variance, by quadrature."""
    s2 = variance

    def integrand(t):
        return t ** k * math.exp(-t * t / (2 * s2)) / math.sqrt(2 * math.pi * s2)

    val, _ = integrate.quad(integrand, -math.inf, math.inf, epsabs=1e-12, epsrel=1e-12)
    return val
