import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hybridsum.acceptance import experiment
from hybridsum.characters import AddChar, MultChar
from hybridsum.errors import DuplicateX
from hybridsum.geometry import enumerate_points
from hybridsum.io import fmt_float
from hybridsum.oracles import brute_window_sum
from hybridsum.sums import (ExperimentConfig, compute_series, gaussian_mu, moments,
                            moments_via_binomial, pair_sum, raw_moment,
                            shifted_expansion_check, window_sum)

from conftest import field


def build(p, curve="y - x", g="x", f="x*y", a=2, k=1, J=None, I=None, H=5, theta=0.0,
          wrap=True, scale="density"):
    cfg = experiment(p, curve, g, f, a, k, J or (0, p), I or (0, p - 1), H, theta, scale,
                     F=field(p))
    if not wrap:
        cfg = ExperimentConfig(cfg.field, cfg.P, cfg.g, cfg.f, cfg.chi, cfg.psi, cfg.rect,
                               theta, False, scale)
    return cfg, enumerate_points(cfg.P, cfg.rect)


def series_of(*args, **kw):
    cfg, pt = build(*args, **kw)
    return cfg, pt, compute_series(cfg, pt)


def test_full_window_orthogonality():
    p = 101
    _, _, s = series_of(p, f="0", k=0, H=p)
    assert np.all(np.abs(s.S) < 1e-9 * p)


def test_unit_window_bounded():
    _, _, s = series_of(101, curve="x^2 + y^2 - 1", J=(0, 51), H=1, a=5)
    assert np.all(np.abs(s.S) <= 1 + 1e-12)


def test_first_window_against_oracle():
    cfg, pt, s = series_of(31, H=5)
    want = brute_window_sum(cfg.P, cfg.g, cfg.f, 2, 1, 1, 0, 31, 0, 5)
    assert abs(s.S[0] - want) < 1e-12
    manual = sum((1 if pow(x, 15, 31) == 1 else -1) * cmath.exp(2j * math.pi * x * x / 31)
                 for x in range(1, 6))
    assert abs(s.S[0] - manual) < 1e-12


@pytest.mark.parametrize("wrap", [True, False])
def test_windows_against_oracle_with_poles(wrap):
    cfg, pt, s = series_of(31, curve="y^2 - x^3 - 3", g="(x + 1) / (x - 4)", f="x*y / y",
                           a=3, k=2, J=(2, 25), H=6, wrap=wrap)
    for n in range(31):
        want = brute_window_sum(cfg.P, cfg.g, cfg.f, 3, 1, 2, 2, 25, n, 6, wrap)
        assert abs(s.S[n] - want) < 1e-12
    assert s.poles_skipped.sum() > 0
    assert np.all(np.abs(s.S) <= s.terms + 1e-9)


def _configs():
    return st.fixed_dictionaries({
        "p": st.sampled_from([31, 61]),
        "curve": st.sampled_from(["y - x", "x^2 + y^2 - 1", "y^2 - x^3 - 2", "x*y - 1", "y^3 - x"]),
        "g": st.sampled_from(["x", "x + y", "1 / x", "x^2 + 1"]),
        "f": st.sampled_from(["x*y", "x^3", "y / (x + 1)", "0"]),
        "a": st.sampled_from([1, 2, 3, 5]),
        "k": st.integers(0, 4),
        "H": st.integers(1, 25),
        "theta": st.sampled_from([0.0, 0.4, math.pi / 2, 2.0]),
        "wrap": st.booleans(),
        "jlo": st.integers(0, 20),
        "jw": st.integers(1, 40),
        "ilo": st.integers(0, 20),
        "iw": st.integers(0, 30),
    })


def _from(d):
    p = d["p"]
    J = (d["jlo"], min(p, d["jlo"] + d["jw"]))
    I = (d["ilo"], min(p - 1, d["ilo"] + d["iw"]))
    return build(p, d["curve"], d["g"], d["f"], d["a"], d["k"], J, I, d["H"], d["theta"],
                 d["wrap"])


@given(_configs())
def test_incremental_equals_direct(d):
    cfg, pt = _from(d)
    a = compute_series(cfg, pt)
    b = compute_series(cfg, pt, "direct")
    assert np.max(np.abs(a.S - b.S)) <= 1e-9 * cfg.rect.H
    assert np.array_equal(a.terms, b.terms)
    assert np.all(np.abs(a.S) <= a.terms + 1e-9)
    for n, S in zip(a.ns.tolist()[:4], a.S.tolist()[:4]):
        assert abs(window_sum(cfg, pt, n) - S) < 1e-9


@given(_configs())
def test_moment_identity(d):
    cfg, pt = _from(d)
    s = compute_series(cfg, pt)
    for k in range(1, 9):
        via = moments_via_binomial(s, k)
        scale = math.fsum(((np.abs(s.S) / s.scale) ** k).tolist())
        assert abs(raw_moment(s.u, k) - via.real) <= 1e-8 * scale + 1e-300
        assert abs(via.imag) <= 1e-8 * scale + 1e-300


def test_threads_match_sequential(monkeypatch):
    cfg, pt = build(101, curve="x^2 + y^2 - 1", J=(0, 51), a=5, H=13, theta=0.7)
    seq = compute_series(cfg, pt, "direct", workers=1)
    monkeypatch.setenv("HYBRIDSUM_THREADS", "4")
    par = compute_series(cfg, pt, "direct")
    assert np.max(np.abs(seq.S - par.S)) <= 1e-12


def test_projection_formula():
    cfg, pt, s = series_of(101, J=(10, 60), H=9, theta=0.3)
    scale = math.sqrt(50 / 101 * 9)
    assert s.scale == scale
    assert np.array_equal(s.u, (s.S * np.exp(-0.3j)).real / scale)


def test_points_scale_uses_point_density():
    cfg, pt, s = series_of(101, curve="y", f="0", k=0, J=(0, 1), H=9, scale="points")
    assert pt.r == 101
    assert s.scale == pytest.approx(3.0)


def test_moment_conventions():
    _, _, s = series_of(31, H=4)
    rep = moments(s, 8)
    assert rep[0].re_M == s.size_I
    assert [r.mu_k for r in rep.rows] == [1, 0, 1, 0, 3, 0, 15, 0, 105]
    s.u = np.zeros_like(s.u)
    assert all(r.re_M == 0 for r in moments(s, 8).rows[1:])
    assert set(rep.to_list()[2]) == {"k", "re_M", "im_M", "normalized", "mu_k", "deviation"}


def test_normalization_modes():
    _, _, s = series_of(31, H=4)
    M2 = raw_moment(s.u, 2)
    assert moments(s, 2)[2].normalized == pytest.approx(2 * M2 / 31)
    assert moments(s, 2, standard=True)[2].normalized == pytest.approx(M2 / 31)
    assert gaussian_mu(8) == 105 and gaussian_mu(7) == 0


def test_pair_sums():
    _, _, s = series_of(101, curve="x^2 + y^2 - 1", J=(0, 51), a=5, H=7, theta=0.9)
    assert pair_sum(s, 0, 0) == s.size_I
    s11 = pair_sum(s, 1, 1)
    assert abs(s11.imag) < 1e-9 and s11.real >= 0
    for j in range(4):
        assert abs(pair_sum(s, j, j).imag) < 1e-9 * max(1, abs(pair_sum(s, j, j)))
    acc = 0j
    for v in reversed(s.S.tolist()):
        acc += v
    assert abs(pair_sum(s, 1, 0) - acc) < 1e-9
    with pytest.raises(ValueError):
        pair_sum(s, -1, 0)


def test_binomial_low_orders():
    _, _, s = series_of(101, J=(0, 70), a=5, H=7)
    k1 = (pair_sum(s, 1, 0) + pair_sum(s, 0, 1)) / (2 * s.scale)
    assert abs(moments_via_binomial(s, 1) - k1) < 1e-12
    assert abs(k1 - s.u.sum()) < 1e-9
    _, _, s = series_of(101, J=(0, 70), a=5, H=7, theta=math.pi / 2)
    assert abs(moments_via_binomial(s, 2).real - raw_moment(s.u, 2)) < 1e-9


def test_conjugation_symmetry():
    cfg, pt, s = series_of(61, curve="y^2 - x^3 - 2", g="x + 1", a=5, k=3, J=(0, 40), H=8,
                           theta=0.8)
    conj_cfg = ExperimentConfig(cfg.field, cfg.P, cfg.g, cfg.f, cfg.chi.conj(), cfg.psi.conj(),
                                cfg.rect, -0.8)
    c = compute_series(conj_cfg, pt)
    assert np.max(np.abs(c.S - np.conj(s.S))) < 1e-12
    assert np.max(np.abs(c.u - s.u)) < 1e-12


def test_quadratic_trivial_psi_is_real():
    _, _, s = series_of(101, curve="x^2 + y^2 - 1", g="x + y", f="x*y", a=2, k=0, J=(0, 51),
                        H=20)
    assert np.max(np.abs(s.S.imag)) < 1e-9


def test_phase_covariance():
    p = 61
    a_cfg, pt = build(p, f="x*y + 3*x", k=4, H=9, a=3)
    b_cfg, _ = build(p, f="4*(x*y + 3*x)", k=1, H=9, a=3)
    a, b = compute_series(a_cfg, pt), compute_series(b_cfg, pt)
    assert np.max(np.abs(a.S - b.S)) < 1e-9


def test_series_csv():
    _, _, s = series_of(31, H=3)
    lines = s.to_csv(fmt_float).splitlines()
    assert lines[0] == "n,re_S,im_S,u,terms,poles_skipped"
    assert len(lines) == 32
    n, re, im, u, t, q = lines[1].split(",")
    assert float(re) == s.S[0].real and float(u) == s.u[0] and int(t) == 3


@pytest.mark.parametrize("curve,J", [("y - x", (0, 31)), ("x^2 + y^2 - 1", (0, 16))])
@pytest.mark.parametrize("j,H", [(1, 2), (1, 4), (2, 3)])
def test_shifted_expansion(curve, J, j, H):
    cfg, pt = build(31, curve=curve, J=J, a=3, H=H, theta=0.2)
    for n in (0, 7, 29):
        direct, via = shifted_expansion_check(cfg, pt, n, j)
        assert abs(direct - via) < 1e-9
        assert direct == pytest.approx(abs(window_sum(cfg, pt, n)) ** (2 * j))


def test_shifted_expansion_unit_window():
    cfg, pt = build(31, g="x - 3", a=2, H=1)
    for n in range(31):
        direct, via = shifted_expansion_check(cfg, pt, n, 3)
        assert abs(direct - via) < 1e-12
        assert round(direct) in (0, 1)


def test_shifted_expansion_needs_single_valued_x():
    cfg, pt = build(31, curve="x^2 + y^2 - 1", H=2)
    with pytest.raises(DuplicateX):
        shifted_expansion_check(cfg, pt, 0, 1)
