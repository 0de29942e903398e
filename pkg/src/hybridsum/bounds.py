"""Complete sums, the completion identity, and ratios against the Weil-type bound."""
from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .algebra import POLE, BivarPoly, RationalMap, Tri, degeneracy_flag
from .characters import AddChar, MultChar
from .geometry import PointTable, ShiftedCurve, enumerate_points, enumerate_shifted


def _terms(P, g, f, chi, psi, pt: PointTable):
    gv, gpole = g.eval_array(pt.xs, pt.ys)
    fv, fpole = f.eval_array(pt.xs, pt.ys)
    pole = gpole | fpole
    return np.where(pole, 0j, chi.eval_array(gv) * psi.eval_array(fv))


def complete_hybrid_sum(P: BivarPoly, g: RationalMap, f: RationalMap,
                        chi: MultChar, psi: AddChar) -> complex:
    """Sum of chi(g) psi(f) over every F_p-point of P = 0, poles skipped."""
    pt = enumerate_points(P, 0, P.field.p)
    return complex(_terms(P, g, f, chi, psi, pt).sum())


def complete_shifted_sum(P: BivarPoly, h: tuple[int, ...], j1: int, g: RationalMap,
                         f: RationalMap, chi: MultChar, psi: AddChar) -> complex:
    """Complete sum over the x-shifted curve by the distinct entries of h.

    The summand is chi(g~_h) psi(f~_h) with g~_h the quotient of the first j1
    shifted g-values by the rest and f~_h the matching difference of f-values.
    """
    F = P.field
    p = F.p
    U = tuple(sorted(set(h)))
    slot = {u: i for i, u in enumerate(U)}
    pt = enumerate_points(P, 0, p)
    total = 0j
    for pnt in enumerate_shifted(ShiftedCurve(P, U), pt, range(p)):
        x, ys = pnt[0], pnt[1:]
        gs, fs = [], []
        for hl in h:
            gv = g.eval(x + hl, ys[slot[hl]])
            fv = f.eval(x + hl, ys[slot[hl]])
            if gv is POLE or fv is POLE:
                break
            gs.append(gv)
            fs.append(fv)
        else:
            if chi.trivial:
                c = 1.0
            elif any(v == 0 for v in gs):
                continue
            else:
                c = chi(math.prod(gs[:j1]) * F.inv_mod(math.prod(gs[j1:]) % p) % p)
            total += c * psi((sum(fs[:j1]) - sum(fs[j1:])) % p)
    return total


def _interval_sums(p: int, lo: int, hi: int) -> np.ndarray:
    """sum_{m in [lo, hi)} e(t m / p) for every t mod p."""
    t = np.arange(p)[:, None]
    m = np.arange(lo, hi)[None, :]
    if m.size == 0:
        return np.zeros(p, dtype=complex)
    return np.exp(2j * np.pi * (t * m % p) / p).sum(axis=1)


def incomplete_direct(P, g, f, chi, psi, x_range=None, y_range=None) -> complex:
    """Sum over points with x in x_range and y in y_range (half-open, None = all)."""
    p = P.field.p
    pt = enumerate_points(P, 0, p)
    vals = _terms(P, g, f, chi, psi, pt)
    keep = np.ones(pt.r, dtype=bool)
    if x_range is not None:
        keep &= (pt.xs >= x_range[0]) & (pt.xs < x_range[1])
    if y_range is not None:
        keep &= (pt.ys >= y_range[0]) & (pt.ys < y_range[1])
    return complex(vals[keep].sum())


def incomplete_via_completion(P, g, f, chi, psi, x_range=None, y_range=None) -> complex:
    """The same incomplete sum rebuilt from twisted complete sums.

    Each restricted coordinate contributes (1/p) sum_t (sum_{m in J} e(t m/p))
    times a twist e(-t * coordinate) inside the complete sum.
    """
    p = P.field.p
    pt = enumerate_points(P, 0, p)
    v = _terms(P, g, f, chi, psi, pt)
    t = np.arange(p)[:, None]
    restricted = [(rng, coord) for rng, coord in ((x_range, pt.xs), (y_range, pt.ys))
                  if rng is not None]
    if not restricted:
        return complex(v.sum())
    if len(restricted) == 1:
        (lo, hi), c = restricted[0]
        twist = np.exp(-2j * np.pi * (t * c[None, :] % p) / p)   # (p, r)
        inner = twist @ v
        return complex((_interval_sums(p, lo, hi) * inner).sum() / p)
    ((xlo, xhi), cx), ((ylo, yhi), cy) = restricted
    A = np.exp(-2j * np.pi * (t * cx[None, :] % p) / p) * v[None, :]
    B = np.exp(-2j * np.pi * (t * cy[None, :] % p) / p)
    inner = A @ B.T                                              # inner[t1, t2]
    outer = np.outer(_interval_sums(p, xlo, xhi), _interval_sums(p, ylo, yhi))
    return complex((outer * inner).sum() / p ** 2)


def tail_bound_check(p: int, j_lo: int, j_hi: int, k: int = 1) -> tuple[float, float]:
    """(sum_t |sum_{m in J} e(k t m / p)|, 2 p log p + |J|), natural log."""
    if k % p == 0:
        raise ValueError("the additive character must be nontrivial")
    t = np.arange(p)[:, None]
    m = np.arange(j_lo, j_hi)[None, :]
    inner = np.exp(2j * np.pi * (k * t * m % p) / p).sum(axis=1) if m.size else np.zeros(p)
    lhs = float(np.abs(inner).sum())
    return lhs, 2 * p * math.log(p) + (j_hi - j_lo)


def tail_bound_grid(p: int, endpoints, k: int = 1) -> list[tuple[int, int, float, float]]:
    """tail_bound_check for every pair lo < hi of ``endpoints`` via prefix sums over m."""
    if k % p == 0:
        raise ValueError("the additive character must be nontrivial")
    t = np.arange(p)[:, None]
    m = np.arange(p)[None, :]
    E = np.exp(2j * np.pi * (k * t * m % p) / p)
    C = np.concatenate([np.zeros((p, 1), dtype=complex), np.cumsum(E, axis=1)], axis=1)
    pts = sorted(set(int(e) for e in endpoints))
    out = []
    for lo, hi in itertools.combinations(pts, 2):
        lhs = float(np.abs(C[:, hi] - C[:, lo]).sum())
        out.append((lo, hi, lhs, 2 * p * math.log(p) + (hi - lo)))
    return out


def weil_bound(p: int, D: int, d_g: int, d_f: int, m: int, c_slack: float = 3.0) -> float:
    """((D^2 - 3D + 2D d_g + 2D d_f) sqrt(p) + D^2 + c_slack D) (2 log p + 1)^m.

    Positive whenever D >= 1 and d_g + d_f >= 1.  With both functions constant
    the sum is a point count, the bracket can go negative, and we refuse.
    """
    if D < 1:
        raise ValueError("curve degree must be at least 1")
    if d_g + d_f < 1:
        raise ValueError("g and f both constant: the sum counts points and has no such bound")
    return ((D * D - 3 * D + 2 * D * d_g + 2 * D * d_f) * math.sqrt(p) + D * D + c_slack * D) \
        * (2 * math.log(p) + 1) ** m


@dataclass
class SweepItem:
    P: BivarPoly
    g: RationalMap
    f: RationalMap
    chi: MultChar
    psi: AddChar
    x_range: tuple[int, int]
    y_range: tuple[int, int]
    label: str = ""

    @property
    def config_id(self) -> str:
        key = "|".join(map(str, (self.P.field.p, self.P, self.g, self.f, self.chi.order,
                                 self.chi.power, self.psi.k, self.x_range, self.y_range)))
        return hashlib.sha256(key.encode()).hexdigest()[:12]


@dataclass
class BoundReport:
    config_id: str
    label: str
    p: int
    D: int
    d_g: int
    d_f: int
    m: int
    abs_S: float
    bound: float
    ratio: float
    degenerate: Tri

    def row(self):
        return [self.config_id, self.p, self.D, self.d_g, self.d_f, self.m,
                self.abs_S, self.bound, self.ratio, self.degenerate.value]


BOUND_CSV_HEADER = ["config_id", "p", "D", "d_g", "d_f", "m", "abs_S", "bound", "ratio",
                    "degenerate"]


def bound_report(item: SweepItem, c_slack: float = 3.0) -> BoundReport:
    P = item.P
    p = P.field.p
    S = incomplete_direct(P, item.g, item.f, item.chi, item.psi, item.x_range, item.y_range)
    m = sum(1 for lo, hi in (item.x_range, item.y_range) if (lo, hi) != (0, p))
    # pole divisors measured projectively, so polynomials count their degree
    d_g, d_f = item.g.pole_degree, item.f.pole_degree
    B = weil_bound(p, P.degree, d_g, d_f, m, c_slack)
    degenerate = degeneracy_flag(item.g, None if item.psi.trivial else item.f, item.chi.order)
    return BoundReport(item.config_id, item.label, p, P.degree, d_g, d_f, m, abs(S), B,
                       abs(S) / B, degenerate)


def bound_ratio_sweep(items, c_slack: float = 3.0) -> list[BoundReport]:
    """Bound reports ordered by config id; degenerate items are kept but flagged."""
    reports = [bound_report(it, c_slack) for it in items]
    return sorted(reports, key=lambda r: r.config_id)


def max_ratio(reports) -> float:
    """Largest ratio over reports not flagged degenerate."""
    return max((r.ratio for r in reports if r.degenerate is not Tri.HOLDS), default=0.0)
