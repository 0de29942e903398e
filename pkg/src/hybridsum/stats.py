"""Empirical distribution of the projections u_n against the two Gaussian laws."""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import erf


class GaussianModel(str, enum.Enum):
    VAR_HALF = "var_half"   # density exp(-t^2)/sqrt(pi)
    STANDARD = "standard"   # density exp(-t^2/2)/sqrt(2 pi)


def gaussian_cdf(model: GaussianModel, t):
    """CDF of the model; accepts scalars or arrays (including +-inf)."""
    t = np.asarray(t, dtype=float)
    z = t if model is GaussianModel.VAR_HALF else t / math.sqrt(2.0)
    out = 0.5 * (1.0 + erf(z))
    return float(out) if out.ndim == 0 else out


def gaussian_density(model: GaussianModel, t):
    t = np.asarray(t, dtype=float)
    if model is GaussianModel.VAR_HALF:
        return np.exp(-t * t) / math.sqrt(math.pi)
    return np.exp(-t * t / 2) / math.sqrt(2 * math.pi)


def gaussian_scaled_moment(model: GaussianModel, k: int) -> float:
    """E[(sqrt(2) T)^k] under VAR_HALF, E[T^k] under STANDARD; both equal mu_k.

    Closed form 2^(k/2) * ((1 + (-1)^k)/2) * Gamma((k+1)/2) / sqrt(pi).  For even
    k = 2m, Gamma(m + 1/2)/sqrt(pi) = (2m-1)!!/2^m, evaluated in exact rationals.
    VAR_HALF picks up its 2^(k/2) from the sqrt(2) scaling, STANDARD from the
    variance; the two derivations land on the same number.
    """
    if not 0 <= k <= 20:
        raise ValueError("k must lie in 0..20")
    if k % 2:
        return 0.0
    m = k // 2
    gamma_ratio = Fraction(math.prod(range(1, 2 * m, 2)), 2 ** m)
    return float(2 ** m * gamma_ratio)


def select_model(chi_order: int, psi_k: int, theta: float) -> GaussianModel:
    if chi_order == 2 and psi_k == 0 and theta == 0:
        return GaussianModel.STANDARD
    return GaussianModel.VAR_HALF


class DistributionReport:
    """Sorted sample with the counting function G(lambda) = #{n : u_n <= lambda}."""

    def __init__(self, values):
        self.values = np.sort(np.asarray(values, dtype=float))
        self._list = self.values.tolist()
        if not self._list:
            raise ValueError("empty sample")

    @property
    def n(self) -> int:
        return len(self._list)

    def counting(self, lam: float) -> int:
        return bisect.bisect_right(self._list, lam)

    def ecdf(self, lam: float) -> float:
        return self.counting(lam) / self.n

    def ks(self, model: GaussianModel, shift: float = 0.0) -> float:
        return ks_distance(self, model, shift)

    def histogram(self):
        """Freedman-Diaconis bins as (count, left edge, width) triples."""
        v = self.values
        q75, q25 = np.percentile(v, [75, 25])
        if q75 - q25 <= 0 or v[-1] == v[0]:
            edges = np.array([v[0], v[0] + 1.0]) if v[-1] == v[0] else np.array([v[0], v[-1]])
        else:
            edges = np.histogram_bin_edges(v, bins="fd")
        counts, edges = np.histogram(v, bins=edges)
        return [(int(c), float(edges[i]), float(edges[i + 1] - edges[i]))
                for i, c in enumerate(counts)]

    def to_dict(self, model: GaussianModel):
        return {
            "n": self.n,
            "ks_var_half": self.ks(GaussianModel.VAR_HALF),
            "ks_standard": self.ks(GaussianModel.STANDARD),
            "model_selected": model.value,
            "histogram": [{"count": c, "left": l, "width": w} for c, l, w in self.histogram()],
        }


def ks_distance(report: DistributionReport, model: GaussianModel, shift: float = 0.0) -> float:
    """sup_i max(|i/N - F(u_(i))|, |(i-1)/N - F(u_(i))|) with F the model CDF (shifted)."""
    u = report.values
    N = u.size
    F = gaussian_cdf(model, u - shift)
    i = np.arange(1, N + 1)
    return float(max(np.max(np.abs(i / N - F)), np.max(np.abs((i - 1) / N - F))))


def ks_threshold(n: int, allowance: float = 0.02) -> float:
    """Asymptotic 99% Kolmogorov quantile plus a fixed finite-p allowance."""
    return 1.63 / math.sqrt(n) + allowance
