import math

import numpy as np
import pytest

from anisorobin import (ConvexPolygon, FinslerNorm, anis_distance,
                        anis_perimeter, area, eikonal_check, inner_parallel,
                        inradius, isoperimetric_deficit, parallel_radii,
                        profile, r_transform, steiner_check)
from anisorobin.errors import (InvalidPolygonError, IsoperimetricViolationError,
                               OutsideDomainError)

from conftest import coarea_max_rel, norm_trio, random_convex_polygon

EU = FinslerNorm.euclidean()
QD = FinslerNorm.quadratic([[4.0, 0.0], [0.0, 1.0]])


def wulff_polygon(norm, radius=1.0, n=8192):
    return ConvexPolygon(norm.wulff_boundary(radius, n).vertices)


# --- area / perimeter ---------------------------------------------------------

def test_area_basics(unit_square):
    assert area(unit_square) == 1.0
    tri = ConvexPolygon([[0, 0], [1, 0], [0, 1]])
    assert area(tri) == 0.5
    assert area(ConvexPolygon.regular(4096)) == pytest.approx(math.pi, rel=1e-5)


def test_anis_perimeter(unit_square):
    assert anis_perimeter(unit_square, EU) == pytest.approx(4.0, abs=1e-14)
    assert anis_perimeter(unit_square, QD) == pytest.approx(6.0, abs=1e-14)
    w = wulff_polygon(QD)
    assert anis_perimeter(w, QD) == pytest.approx(4.0 * math.pi, rel=1e-3)


def test_invalid_polygons():
    with pytest.raises(InvalidPolygonError):
        ConvexPolygon([[0, 0], [1, 0]])
    with pytest.raises(InvalidPolygonError):
        ConvexPolygon([[0, 0], [1, 0], [1, 1], [0, 1]][::-1])  # CW
    with pytest.raises(InvalidPolygonError):
        ConvexPolygon([[0, 0], [1, 0], [2, 0], [1, 1]])  # collinear
    with pytest.raises(InvalidPolygonError):
        ConvexPolygon([[0, 0], [1, 0], [1.0, 1e-14], [0, 1]])  # repeated


# --- anisotropic distance -------------------------------------------------------

def test_anis_distance_center(unit_square):
    c = [0.5, 0.5]
    assert anis_distance(c, unit_square, EU) == pytest.approx(0.5, abs=1e-14)
    assert anis_distance(c, unit_square, QD) == pytest.approx(0.25, abs=1e-14)
    with pytest.raises(OutsideDomainError):
        anis_distance([2.0, 0.5], unit_square, EU)


def boundary_points(poly, n):
    lengths = poly.edge_len
    total = lengths.sum()
    out = []
    per_edge = np.maximum((lengths / total * n).astype(int), 2)
    for i in range(poly.n_vertices):
        a = poly.vertices[i]
        b = poly.vertices[(i + 1) % poly.n_vertices]
        s = np.linspace(0.0, 1.0, per_edge[i], endpoint=False)
        out.append(a[None, :] + s[:, None] * (b - a)[None, :])
    return np.vstack(out)


def test_anis_distance_bruteforce_oracle():
    # oracle: min over dense boundary sampling of F°(x - y)
    rng = np.random.default_rng(42)
    for norm in norm_trio():
        poly = random_convex_polygon(rng)
        bpts = boundary_points(poly, 100000)
        for _ in range(3):
            x = poly.vertices.mean(axis=0) + rng.normal(scale=0.05, size=2)
            diffs = x[None, :] - bpts
            brute = float(np.min(norm.polar_eval(diffs)))
            assert anis_distance(x, poly, norm) == pytest.approx(brute, abs=1e-6)


# --- inner parallel / inradius ---------------------------------------------------

def test_inner_parallel_square(unit_square):
    inner = inner_parallel(unit_square, EU, 0.25)
    assert area(inner) == pytest.approx(0.25, abs=1e-12)
    assert inner_parallel(unit_square, EU, 0.5) is None
    inner = inner_parallel(unit_square, QD, 0.2)
    expect = {(0.4, 0.2), (0.6, 0.2), (0.6, 0.8), (0.4, 0.8)}
    got = {tuple(np.round(v, 12)) for v in inner.vertices}
    assert got == expect


def test_inradius(unit_square):
    assert inradius(unit_square, EU) == pytest.approx(0.5, abs=1e-9)
    assert inradius(unit_square, QD) == pytest.approx(0.25, abs=1e-9)
    rng = np.random.default_rng(3)
    for norm in norm_trio():
        poly = random_convex_polygon(rng)
        r_f, x = inradius(poly, norm, return_point=True)
        assert anis_distance(x, poly, norm) == pytest.approx(r_f, abs=1e-8)


# --- profile ---------------------------------------------------------------------

def test_profile_square_closed_form(unit_square):
    prof = profile(unit_square, EU, 128)
    mask = prof.t < 0.5 - 1e-9
    np.testing.assert_allclose(prof.a[mask], 1.0 - (1.0 - 2.0 * prof.t[mask]) ** 2,
                               atol=1e-10)
    np.testing.assert_allclose(prof.l[mask], 4.0 * (1.0 - 2.0 * prof.t[mask]),
                               atol=1e-9)
    assert prof.a[-1] == pytest.approx(prof.a0, abs=1e-9)
    assert prof.l0 == pytest.approx(4.0, abs=1e-14)


def test_profile_monotonicity_and_coarea(unit_square, pentagon):
    rng = np.random.default_rng(8)
    domains = [unit_square, pentagon, random_convex_polygon(rng)]
    for poly in domains:
        for norm in norm_trio():
            prof = profile(poly, norm, 512)
            assert np.all(np.diff(prof.a) >= -1e-12)
            assert np.all(np.diff(prof.l) <= 1e-9)
            # coarea: central difference of A matches L away from the
            # (measure-zero) edge-vanishing events
            assert coarea_max_rel(poly, norm, prof) <= 1e-3, \
                (poly.vertices, norm.family)


def test_r_prime_bound(unit_square, pentagon):
    rng = np.random.default_rng(9)
    for poly in [unit_square, pentagon, random_convex_polygon(rng)]:
        for norm in norm_trio():
            prof = profile(poly, norm, 512)
            dr = np.diff(prof.r) / np.diff(prof.t)
            assert np.max(np.abs(dr)) <= 1.0 + 1e-6


def test_r_transform_endpoints(unit_square):
    kappa = math.pi
    prof = profile(unit_square, EU, 64)
    assert prof.r[0] == pytest.approx(prof.l0 / (2.0 * kappa), rel=1e-12)
    expect_end = math.sqrt(prof.l0 ** 2 - 4.0 * kappa * prof.a0) / (2.0 * kappa)
    assert prof.r[-1] == pytest.approx(expect_end, abs=1e-8)
    # Wulff polygon: isoperimetric equality, R(r_F) ~ 0
    w = wulff_polygon(EU, 1.0, 4096)
    prof_w = profile(w, EU, 64)
    assert prof_w.r[-1] <= 2e-3


def test_r_transform_violation_raises(unit_square):
    prof = profile(unit_square, EU, 64)
    prof.a = prof.a + 1.0  # corrupt the area data
    with pytest.raises(IsoperimetricViolationError):
        r_transform(prof, math.pi)


# --- radii and deficits -----------------------------------------------------------

def test_parallel_radii_square(unit_square):
    r1, r2, r3 = parallel_radii(unit_square, EU)
    assert r2 == pytest.approx(2.0 / math.pi, rel=1e-14)
    assert r1 == pytest.approx(math.sqrt(16.0 - 4.0 * math.pi) / (2.0 * math.pi),
                               rel=1e-14)
    assert r3 == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-14)


def test_parallel_radii_identity():
    rng = np.random.default_rng(10)
    for norm in norm_trio():
        kappa = norm.wulff_area()
        for _ in range(5):
            poly = random_convex_polygon(rng)
            r1, r2, r3 = parallel_radii(poly, norm)
            assert r2 >= r3 >= r1 >= 0.0
            assert kappa * (r2 ** 2 - r1 ** 2) == pytest.approx(area(poly), abs=1e-9)
            assert r3 ** 2 == pytest.approx(area(poly) / kappa, rel=1e-12)


def test_parallel_radii_wulff_equality():
    for norm in norm_trio():
        w = wulff_polygon(norm, 1.5, 8192)
        r1, r2, r3 = parallel_radii(w, norm)
        assert r1 <= 2e-3
        assert r2 == pytest.approx(1.5, rel=1e-4)
        assert r3 == pytest.approx(1.5, rel=1e-4)


def test_isoperimetric_deficit(unit_square):
    assert isoperimetric_deficit(unit_square, EU) == pytest.approx(
        16.0 - 4.0 * math.pi, rel=1e-14)
    for norm in norm_trio():
        w = wulff_polygon(norm, 1.0, 8192)
        deficit = isoperimetric_deficit(w, norm)
        assert 0.0 <= deficit <= 1e-3 * anis_perimeter(w, norm) ** 2
    rng = np.random.default_rng(11)
    for norm in norm_trio():
        for _ in range(100):
            assert isoperimetric_deficit(random_convex_polygon(rng), norm) >= 0.0


# --- Steiner ----------------------------------------------------------------------

def test_steiner_formula_values(unit_square):
    vm, vf, pm, pf = steiner_check(unit_square, EU, 1.0)
    assert vf == pytest.approx(1.0 + 4.0 + math.pi, rel=1e-14)
    vm, vf, pm, pf = steiner_check(unit_square, QD, 0.5)
    assert vf == pytest.approx(1.0 + 6.0 * 0.5 + 2.0 * math.pi * 0.25, rel=1e-14)
    assert pf == pytest.approx(6.0 + 2.0 * 2.0 * math.pi * 0.5, rel=1e-14)


def test_steiner_measured_convergence(unit_square, pentagon):
    for poly in (unit_square, pentagon):
        for norm in norm_trio():
            vm, vf, pm, pf = steiner_check(poly, norm, 0.7, 4096)
            assert vm == pytest.approx(vf, rel=1e-3)
            assert pm == pytest.approx(pf, rel=1e-3)
            # error at least halves when the arc sampling doubles
            vm1, _, pm1, _ = steiner_check(poly, norm, 0.7, 1024)
            vm2, _, pm2, _ = steiner_check(poly, norm, 0.7, 2048)
            assert abs(vm2 - vf) <= 0.5 * abs(vm1 - vf) + 1e-14
            assert abs(pm2 - pf) <= 0.5 * abs(pm1 - pf) + 1e-12


# --- eikonal ----------------------------------------------------------------------

def test_eikonal(unit_square):
    assert eikonal_check(unit_square, EU, 100) <= 1e-5
    assert eikonal_check(unit_square, QD, 100) <= 1e-5
    rng = np.random.default_rng(13)
    for norm in norm_trio():
        poly = random_convex_polygon(rng)
        assert eikonal_check(poly, norm, 100, seed=17) <= 1e-4


# --- serialization ----------------------------------------------------------------

def test_polygon_json_round_trip(pentagon):
    again = ConvexPolygon.from_json(pentagon.to_json())
    np.testing.assert_array_equal(again.vertices, pentagon.vertices)


def test_profile_csv(tmp_path, unit_square):
    prof = profile(unit_square, EU, 64)
    path = tmp_path / "profile.csv"
    prof.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,A,L,R"
    assert len(lines) == 65
