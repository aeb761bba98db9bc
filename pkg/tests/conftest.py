import math

import numpy as np
import pytest

from anisorobin import ConvexPolygon, FinslerNorm


def norm_trio():
    """The three families exercised throughout the suite."""
    return [FinslerNorm.euclidean(),
            FinslerNorm.quadratic([[4.0, 0.0], [0.0, 1.0]]),
            FinslerNorm.lp(4.0)]


@pytest.fixture(params=["euclidean", "quadratic", "lp"])
def norm(request):
    return {n.family: n for n in norm_trio()}[request.param]


@pytest.fixture
def unit_square():
    return ConvexPolygon([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.fixture
def rect_3_1():
    return ConvexPolygon([[0.0, 0.0], [3.0, 0.0], [3.0, 1.0], [0.0, 1.0]])


@pytest.fixture
def pentagon():
    return ConvexPolygon.regular(5)


def _monotone_chain(pts):
    pts = sorted(map(tuple, pts))

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                u = np.subtract(out[-1], out[-2])
                v = np.subtract(p, out[-1])
                if u[0] * v[1] - u[1] * v[0] > 1e-9:
                    break
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return np.array(lower[:-1] + upper[:-1])


def random_convex_polygon(rng, n_min=5, n_max=10):
    """Well-conditioned random convex polygon (bounded angular gaps)."""
    n = int(rng.integers(n_min, n_max + 1))
    for _ in range(100):
        th = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        gaps = np.diff(np.concatenate([th, [th[0] + 2.0 * math.pi]]))
        if gaps.min() > 0.35 * 2.0 * math.pi / n:
            break
    r = rng.uniform(0.5, 1.5, n)
    pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
    hull = _monotone_chain(pts)
    return ConvexPolygon(hull)


def coarea_max_rel(poly, norm, prof):
    """max relative deviation of central dA/dt from L over the profile grid.

    The identity A' = L holds for a.e. t; grid points whose stencil straddles
    an edge-vanishing event of the inner parallel body (where L' jumps) are
    excluded, as are collapsed samples with L = 0.
    """
    from anisorobin import inner_parallel

    counts = []
    for t in prof.t:
        inner = inner_parallel(poly, norm, float(t))
        counts.append(0 if inner is None else inner.n_vertices)
    counts = np.asarray(counts)
    dt = prof.t[1] - prof.t[0]
    da = (prof.a[2:] - prof.a[:-2]) / (2.0 * dt)
    mid = prof.l[1:-1]
    smooth = (counts[2:] == counts[:-2]) & (mid > 0.0)
    return float(np.max(np.abs(da[smooth] - mid[smooth]) / mid[smooth]))
