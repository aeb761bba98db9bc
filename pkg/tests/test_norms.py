import math

import numpy as np
import pytest

from anisorobin import FinslerNorm
from anisorobin.cli import run_norm_identity_suite

from conftest import norm_trio


def fd_grad(f, v, h=1e-6):
    return np.array([
        (f(v + [h, 0.0]) - f(v - [h, 0.0])) / (2 * h),
        (f(v + [0.0, h]) - f(v - [0.0, h])) / (2 * h),
    ])


# --- closed-form spot values -------------------------------------------------

def test_eval_spot_values():
    eu, qd, l4 = norm_trio()
    assert eu.eval([3.0, 4.0]) == pytest.approx(5.0, abs=1e-15)
    assert qd.eval([1.0, 0.0]) == pytest.approx(2.0, abs=1e-15)
    assert l4.eval([1.0, 1.0]) == pytest.approx(2.0 ** 0.25, rel=1e-15)
    for n in norm_trio():
        assert n.eval([0.0, 0.0]) == 0.0


def test_grad_spot_values():
    eu, qd, l4 = norm_trio()
    np.testing.assert_allclose(eu.grad([0.0, 2.0]), [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(qd.grad([1.0, 0.0]), [2.0, 0.0], atol=1e-15)
    # derived: finite-difference oracle at step 1e-6
    for n in norm_trio():
        for v in ([1.0, 1.0], [0.3, -0.8], [-2.0, 0.5]):
            v = np.asarray(v)
            np.testing.assert_allclose(n.grad(v), fd_grad(n.eval, v),
                                       rtol=1e-5, atol=1e-7)
    np.testing.assert_allclose(l4.grad([1.0, 1.0]),
                               [2.0 ** 0.25 / 2.0] * 2, rtol=1e-12)


def test_polar_spot_values():
    eu, qd, l4 = norm_trio()
    assert qd.polar_eval([2.0, 0.0]) == pytest.approx(1.0, abs=1e-14)
    assert l4.polar_eval([1.0, 0.0]) == pytest.approx(1.0, abs=1e-14)
    assert eu.polar_eval([3.0, 4.0]) == pytest.approx(5.0, abs=1e-13)
    assert l4.polar().p == pytest.approx(4.0 / 3.0)


def test_polar_grad_spot_values():
    eu, qd, l4 = norm_trio()
    np.testing.assert_allclose(eu.polar_grad([1.0, 0.0]), [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(qd.polar_grad([0.0, 1.0]), [0.0, 1.0], atol=1e-14)
    # derived: finite-difference oracle on polar_eval
    for n in norm_trio():
        for v in ([1.0, 1.0], [0.7, -0.2]):
            v = np.asarray(v)
            np.testing.assert_allclose(n.polar_grad(v), fd_grad(n.polar_eval, v),
                                       rtol=1e-5, atol=1e-7)


def test_grad_rejects_origin():
    for n in norm_trio():
        with pytest.raises(ValueError):
            n.grad([0.0, 0.0])
        with pytest.raises(ValueError):
            n.grad([1e-15, 0.0])


# --- wulff data ---------------------------------------------------------------

def test_wulff_area_closed_forms():
    eu, qd, l4 = norm_trio()
    assert eu.wulff_area() == pytest.approx(math.pi, rel=1e-15)
    assert qd.wulff_area() == pytest.approx(2.0 * math.pi, rel=1e-15)
    assert l4.wulff_area() == pytest.approx(
        4.0 * math.gamma(1.75) ** 2 / math.gamma(2.5), rel=1e-15)


def test_wulff_area_quadrature_oracle():
    # independent oracle: area of the dual-exponent unit ball by quadrature
    from scipy.integrate import quad
    l4 = FinslerNorm.lp(4.0)
    q = 4.0 / 3.0
    val, err = quad(lambda x: (1.0 - x ** q) ** (1.0 / q), 0.0, 1.0,
                    epsabs=1e-13, epsrel=1e-13)
    assert 4.0 * val == pytest.approx(l4.wulff_area(), abs=1e-10)
    # frozen value of the oracle
    assert l4.wulff_area() == pytest.approx(2.5416392543819373, rel=1e-14)


def test_wulff_area_polygonal_fallback():
    for n in norm_trio():
        approx = n.wulff_boundary(1.0, 8192)
        v = approx.vertices
        w = np.roll(v, -1, axis=0)
        shoelace = 0.5 * float(np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))
        assert shoelace == pytest.approx(n.wulff_area(), rel=1e-6)


def test_wulff_boundary_on_level_set():
    eu, qd, l4 = norm_trio()
    w = eu.wulff_boundary(1.0, 16)
    np.testing.assert_allclose(np.hypot(w.vertices[:, 0], w.vertices[:, 1]),
                               1.0, atol=1e-12)
    w = qd.wulff_boundary(1.0, 64)
    np.testing.assert_allclose(w.vertices[:, 0] ** 2 / 4.0 + w.vertices[:, 1] ** 2,
                               1.0, atol=1e-12)
    w = l4.wulff_boundary(2.0, 1024)
    assert np.max(np.abs(l4.polar_eval(w.vertices) - 2.0)) <= 1e-8
    # convex and CCW
    e = np.roll(w.vertices, -1, axis=0) - w.vertices
    cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
    assert np.all(cross > 0.0)


def test_norm_bounds():
    eu, qd, l4 = norm_trio()
    assert eu.norm_bounds() == pytest.approx((1.0, 1.0), abs=1e-12)
    assert qd.norm_bounds() == pytest.approx((1.0, 2.0), abs=1e-10)
    assert l4.norm_bounds() == pytest.approx((2.0 ** -0.25, 1.0), abs=1e-10)


# --- randomized identity suite -------------------------------------------------

def test_identity_suite_all_families():
    for n in norm_trio():
        report = run_norm_identity_suite(n, n_samples=1000, seed=123)
        assert report["all_pass"], report


def test_polar_numeric_matches_closed_form(norm):
    rng = np.random.default_rng(5)
    for _ in range(25):
        v = rng.normal(size=2)
        if np.hypot(*v) < 1e-3:
            continue
        assert norm.polar_eval_numeric(v) == pytest.approx(
            norm.polar_eval(v), abs=1e-8 * max(1.0, np.hypot(*v)))


# --- validation / serialization -------------------------------------------------

def test_invalid_specs():
    with pytest.raises(ValueError):
        FinslerNorm.lp(1.0)
    with pytest.raises(ValueError):
        FinslerNorm.lp(math.inf)
    with pytest.raises(ValueError):
        FinslerNorm.quadratic([[1.0, 2.0], [0.0, 1.0]])  # unsymmetric
    with pytest.raises(ValueError):
        FinslerNorm.quadratic([[1.0, 0.0], [0.0, -1.0]])  # indefinite
    with pytest.raises(ValueError):
        FinslerNorm("taxicab")


def test_json_round_trip():
    for n in norm_trio():
        again = FinslerNorm.from_json(n.to_json())
        assert again.to_json() == n.to_json()
        assert again.eval([0.3, 0.7]) == n.eval([0.3, 0.7])
