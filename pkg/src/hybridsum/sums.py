"""Windowed hybrid sums S_n, their projections u_n and moments M_k."""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

import numpy as np

from .algebra import POLE, BivarPoly, RationalMap
from .characters import AddChar, MultChar
from .errors import DuplicateX
from .field import PrimeField
from .geometry import PointTable, Rectangle, ShiftedCurve, enumerate_shifted, window_positions

SCALES = ("density", "points")


@dataclass(frozen=True)
class ExperimentConfig:
    field: PrimeField
    P: BivarPoly
    g: RationalMap
    f: RationalMap
    chi: MultChar
    psi: AddChar
    rect: Rectangle
    theta: float = 0.0
    wrap: bool = True
    # "density" divides by sqrt((beta - alpha) H); "points" uses the observed
    # points-per-x r/p in place of beta - alpha
    scale: str = "density"

    def __post_init__(self):
        if self.P.deg_y < 1:
            raise ValueError("curve polynomial must have positive degree in y")
        if not (self.chi.field == self.psi.field == self.field):
            raise ValueError("characters must live over the configured field")
        if self.scale not in SCALES:
            raise ValueError(f"scale must be one of {SCALES}")

    @property
    def regime(self) -> str:
        if self.chi.trivial:
            return "trivial_chi"
        if self.psi.trivial:
            return "trivial_psi"
        return "mainthm"

    @property
    def standard_model(self) -> bool:
        """Quadratic chi, trivial psi, projection on the real axis."""
        return self.chi.order == 2 and self.psi.trivial and self.theta == 0


def point_terms(cfg: ExperimentConfig, pt: PointTable):
    """chi(g(P)) psi(f(P)) for every point of the table, and the pole mask."""
    gv, gpole = cfg.g.eval_array(pt.xs, pt.ys)
    fv, fpole = cfg.f.eval_array(pt.xs, pt.ys)
    pole = gpole | fpole
    vals = cfg.chi.eval_array(gv) * cfg.psi.eval_array(fv)
    return np.where(pole, 0j, vals), pole


def normalizer(cfg: ExperimentConfig, pt: PointTable | None = None) -> float:
    """sqrt(density * H), with the density kept as an exact fraction until the root."""
    if cfg.scale == "density":
        dens = cfg.rect.width
    else:
        if pt is None:
            raise ValueError("the 'points' scale needs the point table")
        dens = Fraction(pt.r, cfg.field.p)
    return math.sqrt(dens * cfg.rect.H)


@dataclass
class SumSeries:
    ns: np.ndarray
    S: np.ndarray
    u: np.ndarray
    terms: np.ndarray
    poles_skipped: np.ndarray
    scale: float
    theta: float
    meta: dict = dc_field(default_factory=dict)

    @property
    def size_I(self) -> int:
        return int(self.ns.size)

    def to_csv(self, fmt) -> str:
        lines = ["n,re_S,im_S,u,terms,poles_skipped"]
        for n, s, u, t, q in zip(self.ns.tolist(), self.S.tolist(), self.u.tolist(),
                                 self.terms.tolist(), self.poles_skipped.tolist()):
            lines.append(f"{n},{fmt(s.real)},{fmt(s.imag)},{fmt(u)},{t},{q}")
        return "\n".join(lines) + "\n"


def projections(S: np.ndarray, theta: float, scale: float) -> np.ndarray:
    return (S * np.exp(-1j * theta)).real / scale


def _per_x(values, xs, p):
    re = np.bincount(xs, weights=values.real, minlength=p)
    im = np.bincount(xs, weights=values.imag, minlength=p)
    return re + 1j * im


def _incremental(Tx: np.ndarray, ns: np.ndarray, H: int, p: int, wrap: bool) -> np.ndarray:
    T = Tx.tolist()
    n0 = int(ns[0])
    s = complex(sum(T[x] for x in window_positions(n0, H, p, wrap).tolist()))
    out = [s]
    for n in range(n0, int(ns[-1])):
        leave = (n + 1) % p
        enter = n + 1 + H
        s -= T[leave]
        if wrap:
            s += T[enter % p]
        elif enter <= p - 1:
            s += T[enter]
        out.append(s)
    return np.array(out, dtype=complex)


def _direct_chunk(vals, pt: PointTable, ns, H, wrap):
    p = pt.p
    starts = pt.starts
    out = np.empty(len(ns), dtype=complex)
    for k, n in enumerate(ns):
        lo = n + 1
        hi = n + H  # inclusive
        if wrap and hi > p - 1:
            pieces = [(lo, p - 1), (0, hi - p)] if lo <= p - 1 else [(lo - p, hi - p)]
        else:
            pieces = [(lo, min(hi, p - 1))] if lo <= p - 1 else []
        acc = 0j
        for a, b in pieces:
            if a <= b:
                acc += vals[starts[a]:starts[b + 1]].sum()
        out[k] = acc
    return out


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HYBRIDSUM_THREADS", "1")))
    except ValueError:
        return 1


def compute_series(cfg: ExperimentConfig, pt: PointTable, method: str = "incremental",
                   workers: int | None = None) -> SumSeries:
    """S_n for every n in I over the window (n, n + H].

    ``incremental`` slides the window using per-x totals; ``direct`` re-sums
    the point terms of every window (optionally across threads).
    """
    p = cfg.field.p
    H = cfg.rect.H
    ns = cfg.rect.ns()
    vals, pole = point_terms(cfg, pt)
    live = (~pole).astype(np.int64)
    cnt_x = np.bincount(pt.xs, weights=live, minlength=p).astype(np.int64)
    pole_x = np.bincount(pt.xs, weights=pole.astype(np.int64), minlength=p).astype(np.int64)
    if method == "incremental":
        S = _incremental(_per_x(vals, pt.xs, p), ns, H, p, cfg.wrap)
    elif method == "direct":
        workers = workers or _threads()
        chunks = np.array_split(ns.tolist(), max(1, min(workers, len(ns))))
        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                parts = list(ex.map(lambda c: _direct_chunk(vals, pt, c.tolist(), H, cfg.wrap),
                                    chunks))
        else:
            parts = [_direct_chunk(vals, pt, c.tolist(), H, cfg.wrap) for c in chunks]
        S = np.concatenate(parts)
    else:
        raise ValueError(f"unknown method {method!r}")
    # window counts via prefix sums over x (two copies cover wrap-around)
    terms = np.empty(len(ns), dtype=np.int64)
    poles = np.empty(len(ns), dtype=np.int64)
    for arr, src in ((terms, cnt_x), (poles, pole_x)):
        ext = np.concatenate([[0], np.cumsum(np.concatenate([src, src]))])
        lo = ns + 1
        hi = ns + H if cfg.wrap else np.minimum(ns + H, p - 1)
        arr[:] = np.where(hi >= lo, ext[np.maximum(hi, lo - 1) + 1] - ext[lo], 0)
    scale = normalizer(cfg, pt)
    u = projections(S, cfg.theta, scale)
    meta = {"r": pt.r, "duplicate_x": pt.duplicate_x, "method": method}
    return SumSeries(ns, S, u, terms, poles, scale, cfg.theta, meta)


def gaussian_mu(k: int) -> int:
    """1*3*...*(k-1) for even k, 0 for odd k."""
    if k % 2:
        return 0
    return math.prod(range(1, k, 2))


@dataclass
class MomentRow:
    k: int
    re_M: float
    im_M: float
    normalized: float
    mu_k: int
    deviation: float

    def to_dict(self):
        return {"k": self.k, "re_M": self.re_M, "im_M": self.im_M,
                "normalized": self.normalized, "mu_k": self.mu_k, "deviation": self.deviation}


@dataclass
class MomentReport:
    rows: list[MomentRow]
    size_I: int
    standard: bool

    def __getitem__(self, k) -> MomentRow:
        return self.rows[k]

    def to_list(self):
        return [r.to_dict() for r in self.rows]


def raw_moment(u: np.ndarray, k: int) -> float:
    return math.fsum((u ** k).tolist())


def moments(series: SumSeries, k_max: int = 8, standard: bool = False) -> MomentReport:
    """M_k = sum_n u_n^k for k = 0..k_max with the normalized comparison to mu_k.

    ``standard`` selects M_k/|I| (quadratic chi, trivial psi, theta = 0);
    otherwise 2^(k/2) M_k/|I|.  ``im_M`` is the imaginary residue of the
    binomial evaluation, a sanity check that should be ~0.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    N = series.size_I
    rows = []
    for k in range(k_max + 1):
        M = raw_moment(series.u, k)
        im = moments_via_binomial(series, k).imag if k else 0.0
        norm = M / N if standard else 2 ** (k / 2) * M / N
        mu = gaussian_mu(k)
        rows.append(MomentRow(k, M, im, norm, mu, norm - mu))
    return MomentReport(rows, N, standard)


def pair_sum(series: SumSeries | np.ndarray, j1: int, j2: int) -> complex:
    """S(j1, j2) = sum_n S_n^j1 conj(S_n)^j2."""
    if j1 < 0 or j2 < 0:
        raise ValueError("exponents must be nonnegative")
    S = series.S if isinstance(series, SumSeries) else np.asarray(series)
    vals = S ** j1 * np.conj(S) ** j2
    return complex(math.fsum(vals.real.tolist()), math.fsum(vals.imag.tolist()))


def moments_via_binomial(series: SumSeries, k: int) -> complex:
    """M_k through the pair sums: sum_j C(k,j) e^{(k-2j) i theta} S(j, k-j) / (2 scale)^k."""
    theta = series.theta
    total = 0j
    for j in range(k + 1):
        total += comb(k, j) * complex(math.cos((k - 2 * j) * theta),
                                      math.sin((k - 2 * j) * theta)) * pair_sum(series, j, k - j)
    return total / (2 * series.scale) ** k


def window_sum(cfg: ExperimentConfig, pt: PointTable, n: int) -> complex:
    """S_n straight from the points in the window (no per-x aggregation)."""
    vals, _ = point_terms(cfg, pt)
    return complex(_direct_chunk(vals, pt, [n], cfg.rect.H, cfg.wrap)[0])


def shifted_expansion_check(cfg: ExperimentConfig, pt: PointTable, n: int, j: int):
    """Return (|S_n|^2j computed directly, the same via shifted-curve tuples).

    The second path loops over shift tuples h in [1, H]^2j, enumerates the
    points of the x-shifted curve by the distinct shifts at x = n, and
    evaluates chi(g~_h) psi(f~_h) with all quotient and difference arithmetic
    done in F_p.
    """
    if pt.duplicate_x:
        raise DuplicateX("a y-interval with two points over one x breaks the tuple correspondence")
    F = cfg.field
    p = F.p
    H = cfg.rect.H
    direct = abs(window_sum(cfg, pt, n)) ** (2 * j)

    total = 0j
    for h in itertools.product(range(1, H + 1), repeat=2 * j):
        if not cfg.wrap and any(n + hi > p - 1 for hi in h):
            continue
        U = tuple(sorted(set(h)))
        slot = {u: i for i, u in enumerate(U)}
        for pnt in enumerate_shifted(ShiftedCurve(cfg.P, U), pt, [n]):
            x, ys = pnt[0], pnt[1:]
            gs, fs = [], []
            bad = False
            for hl in h:
                y = ys[slot[hl]]
                gv = cfg.g.eval(x + hl, y)
                fv = cfg.f.eval(x + hl, y)
                if gv is POLE or fv is POLE:
                    bad = True
                    break
                gs.append(gv)
                fs.append(fv)
            if bad:
                continue
            if cfg.chi.trivial:
                chi_val = 1.0 + 0j
            elif 0 in gs:
                chi_val = 0j
            else:
                num = math.prod(gs[:j]) % p
                den = math.prod(gs[j:]) % p
                chi_val = cfg.chi(num * F.inv_mod(den) % p)
            fsum = (sum(fs[:j]) - sum(fs[j:])) % p
            total += chi_val * cfg.psi(fsum)
    return direct, total.real
