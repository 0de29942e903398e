"""Quick invariant checks for ``hybridsum verify``.

Each check takes a context dict and returns (passed, detail).  The context
carries fault-injection switches so the driver itself can be tested.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, replace

import numpy as np

from . import acceptance
from .algebra import BivarPoly, RationalMap, is_perfect_power
from .bounds import incomplete_direct, incomplete_via_completion, tail_bound_check
from .characters import AddChar, MultChar
from .field import check_field, make_field
from .geometry import count_matching_tuples, enumerate_points
from .oracles import brute_matching_tuples, brute_points, brute_window_sum
from .polyparse import parse_poly
from .stats import DistributionReport, GaussianModel
from .sums import compute_series, pair_sum, window_sum

FAULTS = ("field-table",)

CHECKS: dict[str, callable] = {}


def check(name):
    def deco(fn):
        CHECKS[name] = fn
        return fn
    return deco


def corrupt_field(F):
    """Copy of F with two log-table entries swapped."""
    log = F.log_table.copy()
    log[[1, 2]] = log[[2, 1]]
    log.setflags(write=False)
    return replace(F, log_table=log)


def _field(p, ctx):
    F = make_field(p)
    return corrupt_field(F) if "field-table" in ctx.get("faults", ()) else F


@check("field.tables")
def _field_tables(ctx):
    bad = {p: check_field(_field(p, ctx)) for p in (3, 7, 101, 10007)}
    bad = {p: v for p, v in bad.items() if v}
    return not bad, str(bad) if bad else "log/exp tables sound for p in {3,7,101,10007}"


@check("field.inverses")
def _field_inverses(ctx):
    F = _field(101, ctx)
    xs = np.arange(1, 101)
    ok = bool(np.all(xs * F.inv_array(xs) % 101 == 1))
    ok &= all(x * F.inv_mod(x) % 101 == 1 for x in range(1, 101))
    return ok, "x * x^-1 = 1 over F_101"


@check("polyparse.roundtrip")
def _parse_roundtrip(ctx):
    rng = np.random.default_rng(1)
    F = make_field(31)
    bad = 0
    for _ in range(50):
        q = acceptance.random_poly(F, rng, max_deg=4)
        bad += parse_poly(str(q), F) != q
    return bad == 0, f"{bad}/50 printed polynomials failed to re-parse"


@check("algebra.ring_axioms")
def _ring(ctx):
    rng = np.random.default_rng(2)
    F = make_field(7)
    for _ in range(30):
        a, b, c = (acceptance.random_poly(F, rng, 2) for _ in range(3))
        if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c or a - a != 0 * a:
            return False, f"axiom failed for {a}, {b}, {c}"
    return True, "associativity and distributivity over F_7"


@check("algebra.perfect_powers")
def _powers(ctx):
    F = make_field(5)
    x, y = BivarPoly.x(F), BivarPoly.y(F)
    # every c * h^2 with h of degree <= 1 must be detected; x^2 + y must not
    for c, u, v, w in itertools.product(range(1, 5), range(5), range(5), range(5)):
        h = u * x + v * y + w
        if h.is_zero():
            continue
        if not is_perfect_power(c * h ** 2, 2):
            return False, f"missed {c}*({h})^2"
    return not is_perfect_power(x ** 2 + y, 2), "all c*h^2 (deg h <= 1) over F_5 detected"


@check("characters.homomorphism")
def _chars(ctx):
    F = make_field(31)
    chi, psi = MultChar(F, 3), AddChar(F, 2)
    for s, t in itertools.product(range(31), repeat=2):
        if abs(chi(s * t % 31) - chi(s) * chi(t)) > 1e-12:
            return False, f"chi({s}*{t})"
        if abs(psi((s + t) % 31) - psi(s) * psi(t)) > 1e-12:
            return False, f"psi({s}+{t})"
    orth = abs(sum(chi(s) for s in range(31))) + abs(sum(psi(s) for s in range(31)))
    return orth < 1e-9, f"orthogonality residue {orth:.2e}"


@check("geometry.points")
def _points(ctx):
    F = make_field(31)
    for text in ("y - x", "x^2 + y^2 - 1", "y^2 - x^3 - x - 1", "y^3 + x*y + 2", "x*y - 1"):
        P = parse_poly(text, F)
        for lo, hi in ((0, 31), (3, 17)):
            got = sorted(zip(*(a.tolist() for a in (enumerate_points(P, lo, hi).xs,
                                                    enumerate_points(P, lo, hi).ys))))
            if got != brute_points(P, lo, hi):
                return False, f"{text} J=[{lo},{hi})"
    return True, "fast root paths agree with exhaustive evaluation"


@check("geometry.tuples")
def _tuples(ctx):
    bad = [(H, j) for H in range(1, 6) for j in range(3)
           if count_matching_tuples(H, j) != brute_matching_tuples(H, j)]
    return not bad, f"mismatches {bad}" if bad else "closed form = enumeration"


def _small_cfg(theta=0.3, a=3):
    return acceptance.experiment(61, "y^2 - x^3 - 2", "x + 1", "x*y", a, 1, (0, 40),
                                 (0, 60), 7, theta)


@check("sums.incremental_vs_direct")
def _inc_direct(ctx):
    cfg = _small_cfg()
    pt = enumerate_points(cfg.P, cfg.rect)
    a, b = compute_series(cfg, pt), compute_series(cfg, pt, "direct", workers=2)
    err = float(np.abs(a.S - b.S).max())
    return err < 1e-9, f"max |diff| {err:.2e}"


@check("sums.window_oracle")
def _window(ctx):
    cfg = _small_cfg()
    pt = enumerate_points(cfg.P, cfg.rect)
    err = max(abs(window_sum(cfg, pt, n) - brute_window_sum(
        cfg.P, cfg.g, cfg.f, 3, 1, 1, 0, 40, n, 7)) for n in range(0, 61, 6))
    return err < 1e-9, f"max |diff| {err:.2e}"


@check("moments.binomial_identity")
def _mom_binom(ctx):
    r = acceptance.c1_moment_identity(n_configs=5)
    return r.passed, f"max rel err {r.measured['max_rel_err']:.2e}"


@check("moments.pair_sum_zero")
def _mom_zero(ctx):
    cfg = _small_cfg()
    s = compute_series(cfg, enumerate_points(cfg.P, cfg.rect))
    return pair_sum(s, 0, 0) == s.size_I, "S(0,0) = |I|"


@check("moments.gaussian_targets")
def _mom_targets(ctx):
    r = acceptance.c10_gaussian_targets()
    return r.passed, f"max quadrature err {r.measured['max_quad_err']:.2e}"


@check("stats.ks")
def _ks(ctx):
    rng = np.random.default_rng(3)
    rep = DistributionReport(rng.standard_normal(20000))
    near = rep.ks(GaussianModel.STANDARD)
    far = rep.ks(GaussianModel.STANDARD, shift=1.0)
    return near < 0.02 and far > 0.3, f"ks(normal)={near:.4f}, ks(shifted)={far:.4f}"


@check("bounds.completion")
def _completion(ctx):
    F = make_field(53)
    P = parse_poly("y^2 - x^3 - 1", F)
    g = RationalMap.from_poly(parse_poly("x + 2", F))
    f = RationalMap.from_poly(parse_poly("x*y", F))
    chi, psi = MultChar(F, 2), AddChar(F, 1)
    err = max(abs(incomplete_direct(P, g, f, chi, psi, xr, yr)
                  - incomplete_via_completion(P, g, f, chi, psi, xr, yr))
              for xr, yr in (((3, 30), None), (None, (5, 20)), ((0, 26), (10, 40))))
    return err < 1e-7 * 53, f"max |diff| {err:.2e}"


@check("bounds.tail")
def _tail(ctx):
    for p in (3, 5, 7, 11, 101):
        for lo, hi in ((0, p), (0, 1), (1, p // 2 + 1)):
            lhs, rhs = tail_bound_check(p, lo, hi)
            if lhs > rhs:
                return False, f"p={p} J=[{lo},{hi})"
    return True, "lhs <= 2 p log p + |J|"


for _cid, _fn in acceptance.CRITERIA.items():
    def _make(fn):
        def run(ctx):
            r = fn()
            return r.passed, r.line()
        return run
    CHECKS[f"acceptance.{_cid}"] = _make(_fn)


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    detail: str
    seconds: float


def run_checks(pattern: str | None = None, faults=()) -> list[CheckOutcome]:
    ctx = {"faults": tuple(faults)}
    out = []
    for name, fn in CHECKS.items():
        if pattern and pattern not in name:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn(ctx)
        except Exception as exc:     # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckOutcome(name, bool(ok), detail, time.perf_counter() - t0))
    return out
