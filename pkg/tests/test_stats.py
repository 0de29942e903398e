import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats as sps

from hybridsum.oracles import quad_gaussian_moment
from hybridsum.stats import (DistributionReport, GaussianModel, gaussian_cdf, gaussian_density,
                             gaussian_scaled_moment, ks_distance, ks_threshold, select_model)

VH, ST = GaussianModel.VAR_HALF, GaussianModel.STANDARD


def test_cdf_examples():
    assert gaussian_cdf(VH, 0.0) == 0.5 and gaussian_cdf(ST, 0.0) == 0.5
    assert gaussian_cdf(ST, math.inf) == 1.0 and gaussian_cdf(VH, -math.inf) == 0.0
    quad, _ = integrate.quad(lambda t: math.exp(-t * t) / math.sqrt(math.pi), -math.inf, 1.0)
    assert abs(gaussian_cdf(VH, 1.0) - quad) < 1e-10
    assert gaussian_cdf(VH, 1.0) == pytest.approx((1 + math.erf(1)) / 2, abs=1e-15)


@given(st.floats(-8, 8), st.floats(-8, 8))
def test_cdf_monotone_and_matches_reference(a, b):
    lo, hi = min(a, b), max(a, b)
    for m in (VH, ST):
        assert gaussian_cdf(m, lo) <= gaussian_cdf(m, hi)
    assert abs(gaussian_cdf(ST, a) - sps.norm.cdf(a)) < 1e-12
    assert abs(gaussian_cdf(VH, a) - sps.norm.cdf(a, scale=math.sqrt(0.5))) < 1e-12


def test_densities_integrate_to_one():
    for m in (VH, ST):
        val, _ = integrate.quad(lambda t: float(gaussian_density(m, t)), -math.inf, math.inf)
        assert abs(val - 1) < 1e-10


def test_scaled_moment_examples():
    for m in (VH, ST):
        assert gaussian_scaled_moment(m, 3) == 0
        assert [gaussian_scaled_moment(m, k) for k in (2, 4, 6, 8)] == [1, 3, 15, 105]
    assert abs(gaussian_scaled_moment(VH, 8) - 2 ** 4 * quad_gaussian_moment(8, 0.5)) < 1e-6
    with pytest.raises(ValueError):
        gaussian_scaled_moment(VH, 21)


@pytest.mark.parametrize("k", range(2, 21))
def test_scaled_moment_recurrence(k):
    for m in (VH, ST):
        assert gaussian_scaled_moment(m, k) == (k - 1) * gaussian_scaled_moment(m, k - 2)


def test_model_selection():
    assert select_model(2, 0, 0.0) is ST
    assert select_model(2, 0, 0.5) is VH
    assert select_model(2, 1, 0.0) is VH
    assert select_model(1, 0, 0.0) is VH


def test_ks_quantile_sample():
    N = 1000
    q = sps.norm.ppf((np.arange(1, N + 1) - 0.5) / N, scale=math.sqrt(0.5))
    assert ks_distance(DistributionReport(q), VH) <= 1 / (2 * N) + 1e-9


def test_ks_constant_sample():
    assert ks_distance(DistributionReport(np.zeros(50)), VH) == 0.5


def test_ks_gaussian_sample():
    rng = np.random.default_rng(12345)
    rep = DistributionReport(rng.standard_normal(10_000))
    assert rep.ks(ST) < 0.02
    ref = sps.kstest(rep.values, "norm").statistic
    assert abs(rep.ks(ST) - ref) < 1e-12


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=60), st.floats(-2, 2))
def test_ks_shift_invariance(xs, c):
    a = DistributionReport(xs).ks(VH)
    b = DistributionReport(np.asarray(xs) + c).ks(VH, shift=c)
    assert abs(a - b) < 1e-9


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=60), st.floats(-6, 6), st.floats(-6, 6))
def test_counting(xs, l1, l2):
    rep = DistributionReport(xs)
    lo, hi = min(l1, l2), max(l1, l2)
    assert rep.counting(lo) <= rep.counting(hi)
    assert rep.counting(-math.inf) == 0 and rep.counting(math.inf) == rep.n
    assert rep.ecdf(lo) == rep.counting(lo) / rep.n
    assert rep.counting(min(xs) - 1) == 0 and rep.counting(max(xs)) == rep.n


def test_counting_median():
    rep = DistributionReport([5.0, -1.0, 2.0, 0.5, 3.0])
    assert rep.counting(2.0) == 3


def test_histogram_and_report():
    rng = np.random.default_rng(1)
    rep = DistributionReport(rng.standard_normal(500))
    h = rep.histogram()
    assert sum(c for c, _, _ in h) == 500
    assert all(w > 0 for _, _, w in h)
    d = rep.to_dict(ST)
    assert set(d) == {"n", "ks_var_half", "ks_standard", "model_selected", "histogram"}
    assert d["model_selected"] == "standard"
    assert DistributionReport([1.0, 1.0]).histogram() == [(2, 1.0, 1.0)]


def test_threshold():
    assert ks_threshold(10007) == pytest.approx(0.0362943, abs=1e-6)
    with pytest.raises(ValueError):
        DistributionReport([])
