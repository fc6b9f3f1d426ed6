import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from msforecast import (
    SimSetup,
    build_candidate_sets,
    gen_setup,
    lag_set_from_period,
    periodogram,
    top_candidates,
)
from msforecast.core import DetectionError, DomainError
from msforecast.spectrum import Periodogram, SeasonalLagSet


def _pg(powers):
    j = np.arange(1, len(powers) + 1)
    p = np.asarray(powers, dtype=float)
    return Periodogram(n=2 * len(powers), freq=j, a=np.sqrt(p), b=np.zeros_like(p), power=p)


def test_single_fourier_mode():
    t = np.arange(1, 101)
    pg = periodogram(np.cos(2 * np.pi * 5 * t / 100))
    assert len(pg) == 50
    assert pg.power[4] == pytest.approx(1.0, abs=1e-10)
    assert np.all(np.delete(pg.power, 4) < 1e-10)


def test_constant_series_has_no_power():
    pg = periodogram(np.full(64, 3.7))
    assert np.all(pg.power < 1e-12)


@pytest.mark.parametrize("n", [4, 7, 64, 101, 250])
def test_fft_matches_direct_sums(n):
    x = np.random.default_rng(n).normal(size=n)
    fast, slow = periodogram(x), periodogram(x, method="direct")
    np.testing.assert_allclose(fast.a, slow.a, atol=1e-9)
    np.testing.assert_allclose(fast.b, slow.b, atol=1e-9)


@pytest.mark.parametrize("n", [8, 9, 100, 101])
def test_reconstruction(n):
    x = np.random.default_rng(1).normal(size=n) * 5 + 2
    pg = periodogram(x)
    t = np.arange(1, n + 1)
    recon = np.full(n, x.mean())
    for j, a, b in zip(pg.freq, pg.a, pg.b):
        w = 0.5 if (n % 2 == 0 and j == n // 2) else 1.0
        recon += w * (a * np.cos(2 * np.pi * t * j / n) + b * np.sin(2 * np.pi * t * j / n))
    np.testing.assert_allclose(recon, x, atol=1e-8 * np.abs(x).max())


def test_periodogram_needs_four_points():
    with pytest.raises(DomainError):
        periodogram([1.0, 2.0, 3.0])


def test_trig_single_peak_at_period_50():
    x = gen_setup(SimSetup("trig-single", 1000, seed=2)).series
    pg = periodogram(x)
    assert int(pg.freq[np.argmax(pg.power)]) == 20


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(4, 200), elements=st.floats(-100, 100)))
def test_energy_bound(x):
    pg = periodogram(x)
    bound = (2 / x.size) * 2 * np.sum((x - x.mean()) ** 2)
    assert np.all(pg.power >= 0)
    assert pg.power.sum() <= bound + 1e-9 * (1 + bound)


def test_top_candidates_order_and_ties():
    assert top_candidates(_pg([0.1, 5.0, 2.0]), 2) == [2, 3]
    powers = np.zeros(8)
    powers[[3, 6]] = 1.0
    assert top_candidates(_pg(powers), 1) == [4]


@pytest.mark.parametrize("count", [0, 4])
def test_top_candidates_range(count):
    with pytest.raises(DomainError):
        top_candidates(_pg([1.0, 2.0, 3.0]), count)


def test_top_candidates_trig_double_contains_both_periods():
    x = gen_setup(SimSetup("trig-double", 1000, seed=4)).series
    js = top_candidates(periodogram(x), 4)
    assert 20 in js and 67 in js


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.integers(8, 300), elements=st.floats(-10, 10)))
def test_top_candidates_non_increasing(x):
    pg = periodogram(x)
    js = top_candidates(pg, len(pg))
    p = pg.power[np.array(js) - 1]
    assert np.all(np.diff(p) <= 0)


@pytest.mark.parametrize(
    "s,tau,min_lag,expected",
    [
        (122, 13, 4, range(116, 129)),
        (366, 13, 4, range(360, 373)),
        (24, 6, 3, range(22, 28)),
        (3, 6, 3, range(4, 10)),
    ],
)
def test_lag_set_from_period(s, tau, min_lag, expected):
    ls = lag_set_from_period(s, tau, min_lag)
    assert ls.lags == tuple(expected)
    assert ls.center == s


@given(st.integers(1, 500), st.integers(1, 15), st.integers(0, 20))
def test_lag_set_invariants(s, tau, min_lag):
    ls = lag_set_from_period(s, tau, min_lag)
    assert ls.tau == tau
    assert ls.lo > min_lag
    assert list(ls.lags) == list(range(ls.lo, ls.lo + tau))
    if s - (tau - 1) // 2 > min_lag:
        assert sorted(ls.lags)[(tau + 1) // 2 - 1] == s


def test_lag_set_validation():
    with pytest.raises(DomainError):
        SeasonalLagSet(5, (5, 7))
    with pytest.raises(DomainError):
        lag_set_from_period(0, 3)


def test_candidates_trig_double():
    x = gen_setup(SimSetup("trig-double", 1000, seed=8)).series
    sets = build_candidate_sets(x, r=2, tau=6, min_lag=3)
    assert len(sets) == 4
    centers = [s.center for s in sets]
    assert any(abs(c - 50) <= 1 for c in centers)
    assert any(abs(c - 15) <= 1 for c in centers)


def test_candidates_pure_sine():
    t = np.arange(1, 1001)
    sets = build_candidate_sets(np.sin(2 * np.pi * t / 50), r=1, tau=6)
    assert sets[0].center == 50


def test_candidates_white_noise():
    x = np.random.default_rng(0).normal(size=200)
    sets = build_candidate_sets(x, r=1, tau=6, min_lag=3)
    assert len(sets) == 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 8), st.integers(0, 5))
def test_candidates_disjoint_and_above_min_lag(seed, r, tau, min_lag):
    x = np.random.default_rng(seed).normal(size=300)
    sets = build_candidate_sets(x, r=r, tau=tau, min_lag=min_lag)
    assert 1 <= len(sets) <= r + 2
    for i, a in enumerate(sets):
        assert a.lo > min_lag and a.hi <= 150
        for b in sets[i + 1 :]:
            assert not a.overlaps(b)


def test_candidates_detection_error():
    x = np.random.default_rng(0).normal(size=40)
    with pytest.raises(DetectionError, match="shorter tau"):
        build_candidate_sets(x, r=1, tau=15, min_lag=10)


def test_candidates_max_lag_validation():
    with pytest.raises(DomainError):
        build_candidate_sets(np.ones(100), r=1, tau=3, max_lag=60)
