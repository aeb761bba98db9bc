"""Convex polygonal domains and anisotropic parallel-set geometry.

Domains are strictly convex CCW polygons, for which the inner parallel set
at anisotropic distance t is exactly the intersection of the edge
half-planes pushed inward by t·F(ν_i). Area and anisotropic perimeter of
the parallel bodies are therefore exact per sample, which isolates all
discretization error in the eigenvalue solvers downstream.

Provides: area / anisotropic perimeter / anisotropic distance / inradius,
inner parallel bodies, the (A_F, L_F, R) parallel-coordinate profile, the
annulus radii (r1, r2, r3), Minkowski-sum Steiner checks, the isoperimetric
deficit, and an eikonal |F(∇d_F)| = 1 spot check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPolygonError, IsoperimetricViolationError, OutsideDomainError
from .norms import FinslerNorm

_DEDUP_TOL = 1e-12
_EMPTY_AREA = 1e-14


class ConvexPolygon:
    """Strictly convex planar polygon, CCW vertex order.

    Derived per-edge data: outward unit (euclidean) normals ``nu``, edge
    lengths ``edge_len``, and offsets ``c`` with edge i contained in
    {<x, nu_i> = c_i}.
    """

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise InvalidPolygonError("need at least 3 planar vertices")
        e = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(e[:, 0], e[:, 1])
        if np.any(lengths <= _DEDUP_TOL):
            raise InvalidPolygonError("repeated or near-repeated vertices")
        cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        if np.any(cross <= 0.0):
            raise InvalidPolygonError("vertices must make strictly convex CCW turns")
        self.vertices = v
        self.edge_len = lengths
        # outward normal of a CCW edge is the edge direction rotated -90 deg
        self.nu = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
        self.c = np.einsum("ij,ij->i", v, self.nu)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def contains(self, x, tol=1e-12) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.nu @ x <= self.c + tol))

    def to_json(self) -> dict:
        return {"vertices": [[float(a), float(b)] for a, b in self.vertices]}

    @classmethod
    def from_json(cls, obj: dict) -> "ConvexPolygon":
        return cls(obj["vertices"])

    @classmethod
    def regular(cls, n: int, circumradius: float = 1.0, center=(0.0, 0.0)) -> "ConvexPolygon":
        th = 2.0 * math.pi * np.arange(n) / n
        return cls(np.column_stack([center[0] + circumradius * np.cos(th),
                                    center[1] + circumradius * np.sin(th)]))


def _clean_chain(v):
    """Drop duplicate and non-left-turn vertices from a closed CCW chain."""
    v = np.asarray(v, dtype=float)
    if len(v) == 0:
        return v
    scale = max(1.0, float(np.abs(v).max()))
    keep = [v[0]]
    for p in v[1:]:
        if np.hypot(*(p - keep[-1])) > 10.0 * _DEDUP_TOL * scale:
            keep.append(p)
    while len(keep) > 1 and np.hypot(*(keep[0] - keep[-1])) <= 10.0 * _DEDUP_TOL * scale:
        keep.pop()
    out = []
    n = len(keep)
    for i in range(n):
        a, b, c = keep[i - 1], keep[i], keep[(i + 1) % n]
        u, v = b - a, c - b
        if u[0] * v[1] - u[1] * v[0] > (_DEDUP_TOL * scale) ** 2:
            out.append(b)
    return np.array(out) if out else np.empty((0, 2))


def _clip_halfplane(pts, nu, c):
    """Sutherland-Hodgman clip of a convex CCW chain against {<x,nu> <= c}."""
    if len(pts) == 0:
        return pts
    margin = c - pts @ nu
    inside = margin >= 0.0
    if np.all(inside):
        return pts
    if not np.any(inside):
        return np.empty((0, 2))
    out = []
    n = len(pts)
    for i in range(n):
        j = (i + 1) % n
        if inside[i]:
            out.append(pts[i])
        if inside[i] != inside[j]:
            s = margin[i] / (margin[i] - margin[j])
            out.append(pts[i] + s * (pts[j] - pts[i]))
    return np.array(out)


def area(poly: ConvexPolygon) -> float:
    """Euclidean area by the shoelace formula."""
    v = poly.vertices
    w = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))


def anis_perimeter(poly: ConvexPolygon, norm: FinslerNorm) -> float:
    """P_F = sum_i F(nu_i) |e_i| over the polygon edges."""
    return float(np.sum(norm.eval(poly.nu) * poly.edge_len))


def anis_distance(x, poly: ConvexPolygon, norm: FinslerNorm) -> float:
    """Anisotropic distance d_F(x, boundary) = min_i (c_i - <x,nu_i>)/F(nu_i).

    Valid on convex polygons, where the half-plane formula coincides with
    inf over boundary points y of F°(x - y). Raises for points outside.
    """
    x = np.asarray(x, dtype=float)
    d = float(np.min((poly.c - poly.nu @ x) / norm.eval(poly.nu)))
    if d < -1e-12:
        raise OutsideDomainError(f"point {x.tolist()} lies outside the polygon")
    return max(d, 0.0)


def anis_distance_batch(points, poly: ConvexPolygon, norm: FinslerNorm):
    """Vectorized anis_distance for points assumed inside (clamped at 0)."""
    pts = np.asarray(points, dtype=float)
    margins = (poly.c[None, :] - pts @ poly.nu.T) / norm.eval(poly.nu)[None, :]
    return np.maximum(margins.min(axis=1), 0.0)


def _shrunk_chain(poly: ConvexPolygon, norm: FinslerNorm, t: float):
    """Raw half-plane intersection chain at inward offset t (no area cutoff)."""
    weights = norm.eval(poly.nu)
    pts = poly.vertices
    for i in range(len(poly.c)):
        pts = _clip_halfplane(pts, poly.nu[i], poly.c[i] - t * weights[i])
        if len(pts) == 0:
            return pts
    return pts


def inner_parallel(poly: ConvexPolygon, norm: FinslerNorm, t: float):
    """Inner parallel body {x : d_F(x, boundary) > t}, or None when empty.

    Degenerate intersections below area 1e-14 are reported as empty.
    """
    if t < 0.0:
        raise ValueError("offset t must be non-negative")
    if t == 0.0:
        return poly
    chain = _clean_chain(_shrunk_chain(poly, norm, t))
    if len(chain) < 3:
        return None
    w = np.roll(chain, -1, axis=0)
    a = 0.5 * float(np.sum(chain[:, 0] * w[:, 1] - w[:, 0] * chain[:, 1]))
    if a < _EMPTY_AREA:
        return None
    return ConvexPolygon(chain)


def inradius(poly: ConvexPolygon, norm: FinslerNorm, return_point: bool = False):
    """Anisotropic inradius r_F = sup d_F by bisection on nonemptiness.

    Absolute tolerance 1e-10 on t. With return_point=True also returns an
    interior point achieving d_F within the same tolerance.
    """
    lo = 0.0
    hi = anis_distance(poly.vertices.mean(axis=0), poly, norm) + 1e-12
    while len(_shrunk_chain(poly, norm, hi)) > 0:
        lo = hi
        hi *= 2.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if len(_shrunk_chain(poly, norm, mid)) > 0:
            lo = mid
        else:
            hi = mid
    if not return_point:
        return lo
    chain = _shrunk_chain(poly, norm, lo)
    return lo, chain.mean(axis=0)


@dataclass
class ParallelProfile:
    """Sampled t -> (A_F(t), L_F(t), R(t)) data for the parallel-coordinate map."""

    t: np.ndarray
    a: np.ndarray
    l: np.ndarray
    r: np.ndarray
    l0: float
    a0: float
    r_f: float

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("t,A,L,R\n")
            for row in zip(self.t, self.a, self.l, self.r):
                fh.write(",".join(repr(float(x)) for x in row) + "\n")


def r_transform(profile: ParallelProfile, kappa: float):
    """R(t) = sqrt(L0^2 - 4*kappa*A_F(t)) / (2*kappa), clamping tiny negatives.

    A radicand below -1e-9 means the isoperimetric inequality failed on
    computed data, i.e. broken geometry code; that raises.
    """
    rad = profile.l0 ** 2 - 4.0 * kappa * profile.a
    if np.min(rad) < -1e-9:
        raise IsoperimetricViolationError(
            f"L0^2 - 4*kappa*A = {np.min(rad):.3e} < -1e-9")
    return np.sqrt(np.maximum(rad, 0.0)) / (2.0 * kappa)


def profile(poly: ConvexPolygon, norm: FinslerNorm, n_samples: int) -> ParallelProfile:
    """Exact parallel-coordinate profile on a uniform t grid up to r_F."""
    if n_samples < 64:
        raise ValueError("need at least 64 profile samples")
    a0 = area(poly)
    l0 = anis_perimeter(poly, norm)
    r_f = inradius(poly, norm)
    ts = np.linspace(0.0, r_f, n_samples)
    a_vals = np.empty(n_samples)
    l_vals = np.empty(n_samples)
    for i, t in enumerate(ts):
        inner = inner_parallel(poly, norm, float(t))
        if inner is None:
            a_vals[i] = a0
            l_vals[i] = 0.0
        else:
            a_vals[i] = a0 - area(inner)
            l_vals[i] = anis_perimeter(inner, norm)
    prof = ParallelProfile(t=ts, a=a_vals, l=l_vals, r=np.empty(n_samples),
                           l0=l0, a0=a0, r_f=r_f)
    prof.r = r_transform(prof, norm.wulff_area())
    return prof


def parallel_radii(poly: ConvexPolygon, norm: FinslerNorm):
    """(r1, r2, r3): annulus radii of equal area/perimeter and the equal-area
    Wulff radius; r2^2 - r1^2 = A0/kappa = r3^2."""
    kappa = norm.wulff_area()
    a0 = area(poly)
    l0 = anis_perimeter(poly, norm)
    rad = l0 * l0 - 4.0 * kappa * a0
    if rad < -1e-9 * max(l0 * l0, 1.0):
        raise IsoperimetricViolationError(f"P_F^2 - 4*kappa*A = {rad:.3e}")
    r1 = math.sqrt(max(rad, 0.0)) / (2.0 * kappa)
    r2 = l0 / (2.0 * kappa)
    r3 = math.sqrt(a0 / kappa)
    return r1, r2, r3


def isoperimetric_deficit(poly: ConvexPolygon, norm: FinslerNorm) -> float:
    """P_F(poly)^2 - 4*kappa*V(poly); non-negative, zero only for Wulff shapes."""
    return anis_perimeter(poly, norm) ** 2 - 4.0 * norm.wulff_area() * area(poly)


def minkowski_sum_wulff(poly: ConvexPolygon, norm: FinslerNorm, delta: float,
                        n_wulff: int = 4096) -> ConvexPolygon:
    """Polygonal approximation of poly + delta*W.

    Edges translate by delta*∇F(nu_i); at each vertex the Wulff boundary arc
    between the adjacent edge normals is inserted, sampled from a global
    n_wulff-direction grid (inscribed approximation, O(1/n^2) deficit).
    """
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    nu = poly.nu
    v = poly.vertices
    n = len(v)
    theta = np.arctan2(nu[:, 1], nu[:, 0])
    for i in range(1, n):
        while theta[i] < theta[i - 1]:
            theta[i] += 2.0 * math.pi
    dphi = 2.0 * math.pi / n_wulff
    out = []
    for i in range(n):
        j = (i + 1) % n
        shift = delta * norm.grad(nu[i])
        out.append(v[i] + shift)
        out.append(v[j] + shift)
        # arc at vertex v[j] between normals of edges i and j
        th_a = theta[i]
        th_b = theta[j] if j > i else theta[0] + 2.0 * math.pi
        k_lo = int(math.floor(th_a / dphi)) + 1
        k_hi = int(math.ceil(th_b / dphi)) - 1
        for k in range(k_lo, k_hi + 1):
            phi = k * dphi
            u = np.array([math.cos(phi), math.sin(phi)])
            out.append(v[j] + delta * norm.grad(u))
    chain = _clean_chain(np.array(out))
    return ConvexPolygon(chain)


def steiner_check(poly: ConvexPolygon, norm: FinslerNorm, delta: float,
                  n_wulff: int = 4096):
    """Measured vs formula area/perimeter of poly + delta*W.

    Returns (V_measured, V_formula, P_measured, P_formula) with the formulas
    V + P_F*delta + kappa*delta^2 and P_F + 2*kappa*delta.
    """
    kappa = norm.wulff_area()
    v0 = area(poly)
    p0 = anis_perimeter(poly, norm)
    grown = minkowski_sum_wulff(poly, norm, delta, n_wulff)
    v_measured = area(grown)
    p_measured = anis_perimeter(grown, norm)
    v_formula = v0 + p0 * delta + kappa * delta * delta
    p_formula = p0 + 2.0 * kappa * delta
    return v_measured, v_formula, p_measured, p_formula


def eikonal_check(poly: ConvexPolygon, norm: FinslerNorm, n_points: int,
                  seed: int = 0, step: float = 1e-6) -> float:
    """max |F(∇d_F) - 1| over sampled interior points (central differences).

    Points where the minimizing edge is ambiguous within 1e-6 (near the
    medial axis) or too close to the boundary for the stencil are skipped.
    """
    if n_points < 1:
        raise ValueError("need n_points >= 1")
    rng = np.random.default_rng(seed)
    lo = poly.vertices.min(axis=0)
    hi = poly.vertices.max(axis=0)
    weights = norm.eval(poly.nu)
    worst = 0.0
    accepted = 0
    tries = 0
    while accepted < n_points and tries < 200 * n_points:
        tries += 1
        x = lo + rng.random(2) * (hi - lo)
        margins = (poly.c - poly.nu @ x) / weights
        if np.min(margins) < 10.0 * step:
            continue
        two = np.partition(margins, 1)[:2]
        if two[1] - two[0] < 1e-6:
            continue
        gx = (anis_distance(x + [step, 0.0], poly, norm)
              - anis_distance(x - [step, 0.0], poly, norm)) / (2.0 * step)
        gy = (anis_distance(x + [0.0, step], poly, norm)
              - anis_distance(x - [0.0, step], poly, norm)) / (2.0 * step)
        worst = max(worst, abs(norm.eval(np.array([gx, gy])) - 1.0))
        accepted += 1
    return worst
