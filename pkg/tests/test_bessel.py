import math

import numpy as np
import pytest

from anisorobin import bessel_i0, bessel_i1, bessel_k0, bessel_k1

# Frozen from the 60-term ascending series evaluated at 30 decimal digits
# (oracle reproduced in test_oracle_series below).
I_SERIES_REFERENCE = {
    0.5: (1.06348337074132352, 0.257894305390896316),
    1.0: (1.26606587775200834, 0.565159103992485027),
    2.0: (2.27958530233606727, 1.59063685463732906),
    5.0: (27.2398718236044469, 24.3356421424505272),
}


def _i_series_highprec(x, nu, terms=60):
    mp = pytest.importorskip("mpmath").mp
    mpf = pytest.importorskip("mpmath").mpf
    mp.dps = 30
    x = mpf(x)
    if nu == 0:
        t, s, den = mpf(1), mpf(1), lambda m: m * m
    else:
        t = x / 2
        s = t
        den = lambda m: m * (m + 1)
    for m in range(1, terms):
        t *= (x * x / 4) / den(m)
        s += t
    return float(s)


def test_series_constants():
    assert bessel_i0(0.0) == 1.0
    assert bessel_i1(0.0) == 0.0


def test_oracle_series():
    for x, (ref0, ref1) in I_SERIES_REFERENCE.items():
        assert _i_series_highprec(x, 0) == pytest.approx(ref0, rel=1e-15)
        assert _i_series_highprec(x, 1) == pytest.approx(ref1, rel=1e-15)
        assert bessel_i0(x) == pytest.approx(ref0, rel=1e-13)
        assert bessel_i1(x) == pytest.approx(ref1, rel=1e-13)


def test_wronskian_spot_values():
    for x in (0.5, 1.0, 5.0, 20.0):
        w = bessel_i0(x) * bessel_k1(x) + bessel_i1(x) * bessel_k0(x)
        assert abs(w - 1.0 / x) <= 1e-11


def test_wronskian_grid():
    for x in np.geomspace(1e-3, 50.0, 1000):
        w = bessel_i0(x) * bessel_k1(x) + bessel_i1(x) * bessel_k0(x)
        assert abs(w - 1.0 / x) <= 1e-11 * max(1.0, 1.0 / x)


def test_derivative_relations():
    h = 1e-6
    for x in np.linspace(0.1, 20.0, 120):
        di0 = (bessel_i0(x + h) - bessel_i0(x - h)) / (2.0 * h)
        assert di0 == pytest.approx(bessel_i1(x), rel=1e-6)
        dk0 = (bessel_k0(x + h) - bessel_k0(x - h)) / (2.0 * h)
        assert dk0 == pytest.approx(-bessel_k1(x), rel=1e-6)


def test_monotonicity():
    xs = np.geomspace(1e-3, 50.0, 300)
    i0v = [bessel_i0(x) for x in xs]
    i1v = [bessel_i1(x) for x in xs]
    k0v = [bessel_k0(x) for x in xs]
    k1v = [bessel_k1(x) for x in xs]
    assert np.all(np.diff(i0v) >= 0.0)
    assert np.all(np.diff(i1v) >= 0.0)
    assert np.all(np.diff(k0v) < 0.0)
    assert np.all(np.diff(k1v) < 0.0)
    assert min(i0v) >= 1.0
    assert min(k0v) > 0.0 and min(k1v) > 0.0


def test_scipy_crosscheck():
    sp = pytest.importorskip("scipy.special")
    for x in np.geomspace(1e-6, 300.0, 200):
        assert bessel_i0(x) == pytest.approx(float(sp.i0(x)), rel=1e-12)
        assert bessel_i1(x) == pytest.approx(float(sp.i1(x)), rel=1e-12)
        assert bessel_k0(x) == pytest.approx(float(sp.k0(x)), rel=1e-12)
        assert bessel_k1(x) == pytest.approx(float(sp.k1(x)), rel=1e-12)


def test_domain_errors():
    with pytest.raises(ValueError):
        bessel_k0(0.0)
    with pytest.raises(ValueError):
        bessel_k1(-1.0)
    with pytest.raises(ValueError):
        bessel_i0(-0.5)
    with pytest.raises(ValueError):
        bessel_i1(math.nan)


def test_range_guard():
    with pytest.raises(OverflowError):
        bessel_i0(601.0)
    with pytest.raises(OverflowError):
        bessel_k1(1e4)
    assert bessel_i0(600.0) > 0.0
