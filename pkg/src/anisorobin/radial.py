"""Reduced radial Robin eigenproblems (disk-type and Neumann-Robin annulus).

By symmetry the first Robin eigenvalue of a Wulff shape of radius r3, and
the Neumann(inner)/Robin(outer) eigenvalue of the anisotropic annulus,
solve one-dimensional problems with weight r. For a negative boundary
parameter the first eigenvalue is the unique negative one (the boundary
form is a rank-one negative perturbation), written lambda = -k^2 with k > 0
solving a secular equation in modified Bessel functions:

  disk of radius r3:      k I1(k r3) + alpha I0(k r3) = 0
  annulus r1 < r2:        K1(k r1)[k I1(k r2) + alpha I0(k r2)]
                          - I1(k r1)[k K1(k r2) - alpha K0(k r2)] = 0

Each problem is also solved by an independent weighted finite-element path
(piecewise-linear on a uniform grid, Sturm-sequence bisection on the
tridiagonal pencil plus inverse iteration), used as a cross-oracle.

Secular equations are evaluated with exponentially scaled Bessel kernels so
bracket expansion cannot overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import kernels as _k
from .errors import NoRootError

_BISECT_REL = 1e-13
_FD_BISECT_REL = 1e-12


@dataclass(frozen=True)
class AnnulusSpec:
    """Anisotropic annulus radii, 0 <= r1 < r2."""

    r1: float
    r2: float

    def __post_init__(self):
        if not (0.0 <= self.r1 < self.r2):
            raise ValueError(f"need 0 <= r1 < r2, got r1={self.r1}, r2={self.r2}")


@dataclass
class Eigenpair1D:
    """First eigenpair of a reduced radial problem.

    phi is normalized to unit weighted L^2 norm (weight r) with phi(r2) > 0;
    lam <= 0 whenever alpha <= 0.
    """

    lam: float
    grid: np.ndarray
    phi: np.ndarray
    alpha: float


def _secular_wulff(k: float, r3: float, alpha: float) -> float:
    # sign-equivalent to k I1(k r3) + alpha I0(k r3); strictly increasing in k
    x = k * r3
    return k * _k.i1e(x) / _k.i0e(x) + alpha


def _secular_annulus(k: float, r1: float, r2: float, alpha: float) -> float:
    # scaled form of the annulus secular function: multiply by e^{k(r1-r2)} > 0
    a = k * r1
    b = k * r2
    t1 = _k.k1e(a) * (k * _k.i1e(b) + alpha * _k.i0e(b))
    t2 = _k.i1e(a) * (k * _k.k1e(b) - alpha * _k.k0e(b))
    return t1 - math.exp(-2.0 * (b - a)) * t2


def _bracket_and_bisect(f, k_start: float, k_max: float) -> float:
    """Find the smallest root of f (f(0+) < 0) by geometric growth + bisection."""
    lo = 1e-8
    if f(lo) >= 0.0:
        return lo
    hi = k_start
    while f(hi) < 0.0:
        lo = hi
        hi *= 2.0
        if hi > k_max:
            raise NoRootError(f"no secular sign change up to k = {k_max:.3e}")
    while hi - lo > _BISECT_REL * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def wulff_secular(r3: float, alpha: float) -> float:
    """First Robin eigenvalue of the Wulff shape of radius r3, alpha < 0."""
    if r3 <= 0.0:
        raise ValueError("r3 must be positive")
    if alpha >= 0.0:
        raise ValueError("wulff_secular requires alpha < 0")
    k = _bracket_and_bisect(lambda k: _secular_wulff(k, r3, alpha),
                            1.0 / r3, 1e4 / r3 + 100.0 * (1.0 + abs(alpha)))
    return -k * k


def annulus_secular(ann: AnnulusSpec, alpha: float) -> float:
    """First Neumann-Robin eigenvalue of the annulus, r1 > 0, alpha < 0."""
    if ann.r1 <= 0.0:
        raise ValueError("annulus_secular requires r1 > 0 (use wulff_secular at r1 = 0)")
    if alpha >= 0.0:
        raise ValueError("annulus_secular requires alpha < 0")
    k = _bracket_and_bisect(
        lambda k: _secular_annulus(k, ann.r1, ann.r2, alpha),
        1.0 / ann.r2, 1e4 / ann.r2 + 100.0 * (1.0 + abs(alpha)))
    return -k * k


def _assemble_radial(r1: float, r2: float, alpha: float, n: int):
    """P1 matrices of (int phi' psi' r dr + alpha r2 [boundary], int phi psi r dr)."""
    nodes = np.linspace(r1, r2, n)
    h = nodes[1] - nodes[0]
    left = nodes[:-1]
    # stiffness: per element (a, a+h), int phi_i' phi_j' r dr = +-(a + h/2)/h
    s = (left + 0.5 * h) / h
    diag_a = np.zeros(n)
    diag_a[:-1] += s
    diag_a[1:] += s
    off_a = -s
    diag_a[-1] += alpha * r2
    # mass with weight r: exact per element
    diag_m = np.zeros(n)
    diag_m[:-1] += left * h / 3.0 + h * h / 12.0
    diag_m[1:] += left * h / 3.0 + h * h / 4.0
    off_m = left * h / 6.0 + h * h / 12.0
    return nodes, diag_a, off_a, diag_m, off_m


def _tridiag_mv(d, e, x):
    y = d * x
    y[:-1] += e * x[1:]
    y[1:] += e * x[:-1]
    return y


def _smallest_pencil_eig(diag_a, off_a, diag_m, off_m):
    """Smallest generalized eigenvalue (known < 0) by Sturm bisection."""
    da = np.ascontiguousarray(diag_a)
    ea = np.ascontiguousarray(off_a)
    dm = np.ascontiguousarray(diag_m)
    em = np.ascontiguousarray(off_m)
    lo = -1.0
    while _k.sturm_count(da, ea, dm, em, lo) > 0:
        lo *= 8.0
        if lo < -1e200:
            raise NoRootError("no finite smallest eigenvalue found")
    hi = 0.0
    while hi - lo > _FD_BISECT_REL * max(abs(lo), 1e-300):
        mid = 0.5 * (lo + hi)
        if _k.sturm_count(da, ea, dm, em, mid) >= 1:
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)
    # inverse iteration at a shift just below lam (pencil there is SPD)
    sigma = lam - max(1e-9 * abs(lam), 1e-13)
    while _k.sturm_count(da, ea, dm, em, sigma) > 0:
        sigma -= max(abs(sigma), 1.0) * 1e-6
    x = np.ones(len(da))
    for _ in range(3):
        rhs = _tridiag_mv(dm, em, x)
        d = np.ascontiguousarray(da - sigma * dm)
        e = np.ascontiguousarray(ea - sigma * em)
        _k.tridiag_solve_inplace(d, e, rhs)
        x = np.asarray(rhs)
        x /= math.sqrt(x @ _tridiag_mv(dm, em, x))
    return lam, x


def _fd_solve(r1: float, r2: float, alpha: float, n_nodes: int) -> Eigenpair1D:
    if n_nodes < 16:
        raise ValueError("need n_nodes >= 16")
    if alpha > 0.0:
        raise ValueError("finite-difference path supports alpha <= 0 only")
    nodes, da, ea, dm, em = _assemble_radial(r1, r2, alpha, n_nodes)
    if alpha == 0.0:
        c = math.sqrt(2.0 / (r2 * r2 - r1 * r1))
        return Eigenpair1D(lam=0.0, grid=nodes, phi=np.full(n_nodes, c), alpha=alpha)
    lam, phi = _smallest_pencil_eig(da, ea, dm, em)
    if phi[-1] < 0.0:
        phi = -phi
    return Eigenpair1D(lam=lam, grid=nodes, phi=phi, alpha=alpha)


def fd_annulus(ann: AnnulusSpec, alpha: float, n_nodes: int) -> Eigenpair1D:
    """Weighted P1 eigensolve on [r1, r2]: Neumann at r1, Robin at r2."""
    return _fd_solve(ann.r1, ann.r2, alpha, n_nodes)


def radial_fd(r3: float, alpha: float, n_nodes: int) -> Eigenpair1D:
    """Weighted P1 eigensolve on [0, r3] (disk problem), Robin at r3."""
    if r3 <= 0.0:
        raise ValueError("r3 must be positive")
    return _fd_solve(0.0, r3, alpha, n_nodes)


def mu_derivative(ann: AnnulusSpec, alpha: float, n_nodes: int = 20001) -> float:
    """d(mu)/d(alpha) = r2 * phi(r2)^2 for the normalized first eigenfunction."""
    pair = fd_annulus(ann, alpha, n_nodes)
    return ann.r2 * float(pair.phi[-1]) ** 2


@dataclass
class GammaTable:
    """Rows (alpha, eigenvalue of the annulus, eigenvalue of the Wulff shape)."""

    alpha: np.ndarray
    gamma_a: np.ndarray
    gamma_b: np.ndarray
    r3: float
    epsilon: float
    r1: float
    r2: float

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("alpha,gamma_A,gamma_B,diff\n")
            for a, ga, gb in zip(self.alpha, self.gamma_a, self.gamma_b):
                fh.write(f"{a!r},{ga!r},{gb!r},{ga - gb!r}\n")


def annulus_radii_for(r3: float, epsilon: float):
    """(r1, r2) = (sqrt(2*eps*r3 + eps^2), r3 + eps); r2^2 - r1^2 = r3^2."""
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    return math.sqrt(2.0 * epsilon * r3 + epsilon * epsilon), r3 + epsilon


def gamma_curves(r3: float, epsilon: float, alpha_grid) -> GammaTable:
    """Tabulate both eigenvalue curves over a grid of negative alphas."""
    alphas = np.asarray(alpha_grid, dtype=float)
    if np.any(alphas >= 0.0):
        raise ValueError("alpha grid must be strictly negative")
    r1, r2 = annulus_radii_for(r3, epsilon)
    assert abs((r2 * r2 - r1 * r1) - r3 * r3) <= 1e-12 * r3 * r3
    ann = AnnulusSpec(r1, r2)
    ga = np.array([annulus_secular(ann, a) for a in alphas])
    gb = np.array([wulff_secular(r3, a) for a in alphas])
    return GammaTable(alpha=alphas, gamma_a=ga, gamma_b=gb,
                      r3=r3, epsilon=epsilon, r1=r1, r2=r2)


def intersection_alpha(r3: float, epsilon: float):
    """alpha at which the annulus and Wulff eigenvalue curves intersect.

    Substitutes the Wulff relation alpha(k) = -k I1(k r3)/I0(k r3) into the
    annulus secular function and scans k over a geometric grid; the root with
    the smallest k gives the intersection closest to alpha = 0. Returns None
    when no sign change exists for k in [1e-6, 1e3/r3].
    """
    r1, r2 = annulus_radii_for(r3, epsilon)

    def alpha_of_k(k):
        x = k * r3
        return -k * _k.i1e(x) / _k.i0e(x)

    def g(k):
        return _secular_annulus(k, r1, r2, alpha_of_k(k))

    ks = np.geomspace(1e-6, 1e3 / r3, 800)
    vals = np.array([g(k) for k in ks])
    sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if len(sign_change) == 0:
        return None
    i = int(sign_change[0])
    lo, hi = ks[i], ks[i + 1]
    flo = vals[i]
    while hi - lo > _BISECT_REL * hi:
        mid = 0.5 * (lo + hi)
        fm = g(mid)
        if (fm < 0.0) == (flo < 0.0):
            lo = mid
        else:
            hi = mid
    return alpha_of_k(0.5 * (lo + hi))
