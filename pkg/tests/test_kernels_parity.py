"""Compiled extension vs pure-Python kernel agreement."""

import numpy as np
import pytest

from anisorobin import _kernels_py
from anisorobin.backend import backend_name

try:
    from anisorobin import _kernels_c
except ImportError:
    _kernels_c = None

needs_ext = pytest.mark.skipif(_kernels_c is None,
                               reason="compiled extension not built")


def test_backend_identifies():
    assert backend_name() in ("cython", "python")


@needs_ext
def test_bessel_parity():
    for x in np.geomspace(1e-8, 600.0, 400):
        for name in ("i0e", "i1e", "k0e", "k1e"):
            a = getattr(_kernels_c, name)(x)
            b = getattr(_kernels_py, name)(x)
            assert a == pytest.approx(b, rel=5e-15), (name, x)


def _random_spd_pencil(rng, n):
    da = rng.normal(size=n) * 2.0
    ea = rng.normal(size=n - 1)
    dm = rng.uniform(1.0, 2.0, size=n)
    em = rng.uniform(-0.2, 0.2, size=n - 1)
    return da, ea, dm, em


def _dense_count(da, ea, dm, em, lam):
    import scipy.linalg as sla
    n = len(da)
    a = np.diag(da) + np.diag(ea, 1) + np.diag(ea, -1)
    m = np.diag(dm) + np.diag(em, 1) + np.diag(em, -1)
    return int((sla.eigh(a, m, eigvals_only=True) < lam).sum())


@needs_ext
def test_sturm_count_parity_and_truth():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(5, 40))
        da, ea, dm, em = _random_spd_pencil(rng, n)
        for lam in (-5.0, -1.0, 0.0, 1.0, 5.0):
            cc = _kernels_c.sturm_count(da, ea, dm, em, lam)
            cp = _kernels_py.sturm_count(da, ea, dm, em, lam)
            assert cc == cp
            assert cc == _dense_count(da, ea, dm, em, lam)


@needs_ext
def test_tridiag_solve_parity():
    rng = np.random.default_rng(11)
    for _ in range(10):
        n = int(rng.integers(5, 60))
        d = rng.uniform(2.0, 4.0, n)
        e = rng.uniform(-0.5, 0.5, n - 1)
        b = rng.normal(size=n)
        t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        x_ref = np.linalg.solve(t, b)

        dc, ec, xc = d.copy(), e.copy(), b.copy()
        _kernels_c.tridiag_solve_inplace(dc, ec, xc)
        np.testing.assert_allclose(xc, x_ref, rtol=1e-12, atol=1e-14)

        dp, ep, xp = d.copy(), e.copy(), b.copy()
        _kernels_py.tridiag_solve_inplace(dp, ep, xp)
        np.testing.assert_allclose(xp, x_ref, rtol=1e-12, atol=1e-14)
