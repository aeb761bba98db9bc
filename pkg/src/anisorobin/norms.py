"""Planar Finsler norms F, their polars, and Wulff-shape data.

Supported families (all smooth and strictly convex away from the origin):

* ``euclidean``  F(x) = |x|
* ``quadratic``  F(x) = sqrt(x^T M x) with M symmetric positive definite
* ``lp``         F(x) = (|x1|^p + |x2|^p)^(1/p), 1 < p < inf strictly

Every family has a closed-form polar (euclidean is self-dual, quadratic M
dualizes to M^{-1}, lp dualizes to the conjugate exponent), so the polar is
returned as another norm object. A sampling-based polar evaluation is kept
alongside as an independent cross-check.

Evaluation and gradient methods accept a single 2-vector or an (n, 2) array
and broadcast accordingly; this is what the FEM assembly relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_GRAD_MIN_NORM = 1e-14
_TOL_POLAR = 1e-8


def _golden_max(f, a, b, iters=60):
    """Golden-section maximization of a unimodal f on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    return 0.5 * (a + b), max(f1, f2)


@dataclass(frozen=True)
class WulffApprox:
    """Inscribed polygonal approximation of the Wulff shape {F° < radius}."""

    radius: float
    vertices: np.ndarray  # (n, 2), CCW, on {F° = radius}
    n_vertices: int


class FinslerNorm:
    """A parametric planar Finsler norm with closed-form dual."""

    def __init__(self, family, m=None, p=None):
        if family == "euclidean":
            self.m = None
            self.p = None
        elif family == "quadratic":
            m = np.asarray(m, dtype=float)
            if m.shape != (2, 2):
                raise ValueError("quadratic norm needs a 2x2 matrix")
            scale = np.abs(m).max()
            if abs(m[0, 1] - m[1, 0]) > 1e-12 * max(scale, 1.0):
                raise ValueError("quadratic norm matrix must be symmetric")
            m = 0.5 * (m + m.T)
            if np.linalg.det(m) <= 0.0 or np.trace(m) <= 0.0:
                raise ValueError("quadratic norm matrix must be positive definite")
            self.m = m
            self.p = None
        elif family == "lp":
            p = float(p)
            # endpoints excluded: F must be C^2 with definite Hessian off 0
            if not (1.0 < p < math.inf):
                raise ValueError(f"lp exponent must satisfy 1 < p < inf, got {p}")
            self.m = None
            self.p = p
        else:
            raise ValueError(f"unknown norm family {family!r}")
        self.family = family

    # --- constructors -----------------------------------------------------

    @classmethod
    def euclidean(cls) -> "FinslerNorm":
        return cls("euclidean")

    @classmethod
    def quadratic(cls, m) -> "FinslerNorm":
        return cls("quadratic", m=m)

    @classmethod
    def lp(cls, p) -> "FinslerNorm":
        return cls("lp", p=p)

    def __repr__(self):
        if self.family == "quadratic":
            return f"FinslerNorm.quadratic({self.m.tolist()})"
        if self.family == "lp":
            return f"FinslerNorm.lp({self.p})"
        return "FinslerNorm.euclidean()"

    # --- evaluation -------------------------------------------------------

    def eval(self, xi):
        """F(xi); accepts shape (2,) or (n, 2)."""
        xi = np.asarray(xi, dtype=float)
        single = xi.ndim == 1
        v = np.atleast_2d(xi)
        if self.family == "euclidean":
            out = np.hypot(v[:, 0], v[:, 1])
        elif self.family == "quadratic":
            out = np.sqrt(np.einsum("ni,ij,nj->n", v, self.m, v))
        else:
            out = (np.abs(v[:, 0]) ** self.p + np.abs(v[:, 1]) ** self.p) ** (1.0 / self.p)
        return float(out[0]) if single else out

    def grad(self, xi):
        """∇F(xi); raises for xi at (or numerically at) the origin."""
        xi = np.asarray(xi, dtype=float)
        single = xi.ndim == 1
        v = np.atleast_2d(xi)
        r = np.hypot(v[:, 0], v[:, 1])
        if np.any(r < _GRAD_MIN_NORM):
            raise ValueError("gradient of a Finsler norm is undefined at the origin")
        if self.family == "euclidean":
            out = v / r[:, None]
        elif self.family == "quadratic":
            mv = v @ self.m.T
            f = np.sqrt(np.einsum("ni,ij,nj->n", v, self.m, v))
            out = mv / f[:, None]
        else:
            f = (np.abs(v[:, 0]) ** self.p + np.abs(v[:, 1]) ** self.p) ** (1.0 / self.p)
            out = np.sign(v) * np.abs(v) ** (self.p - 1.0) * f[:, None] ** (1.0 - self.p)
        return out[0] if single else out

    def energy_grad(self, xi):
        """F(xi)·∇F(xi) = ½∇(F²)(xi), extended by 0 at the origin.

        This is the flux of the anisotropic Dirichlet energy; unlike grad it
        is well defined (and zero) at xi = 0, which the FEM descent needs.
        """
        xi = np.asarray(xi, dtype=float)
        single = xi.ndim == 1
        v = np.atleast_2d(xi)
        if self.family == "euclidean":
            out = v.copy()
        elif self.family == "quadratic":
            out = v @ self.m.T
        else:
            f = (np.abs(v[:, 0]) ** self.p + np.abs(v[:, 1]) ** self.p) ** (1.0 / self.p)
            good = f > 0.0
            out = np.zeros_like(v)
            fv = f[good]
            out[good] = (np.sign(v[good]) * np.abs(v[good]) ** (self.p - 1.0)
                         * fv[:, None] ** (2.0 - self.p))
        return out[0] if single else out

    # --- polar ------------------------------------------------------------

    def polar(self) -> "FinslerNorm":
        """The dual norm F° as a FinslerNorm (closed form per family)."""
        if self.family == "euclidean":
            return FinslerNorm.euclidean()
        if self.family == "quadratic":
            return FinslerNorm.quadratic(np.linalg.inv(self.m))
        q = self.p / (self.p - 1.0)
        return FinslerNorm.lp(q)

    def polar_eval(self, v):
        return self.polar().eval(v)

    def polar_grad(self, v):
        return self.polar().grad(v)

    def polar_eval_numeric(self, v, n_angles=4096, refine_iters=60):
        """sup_{xi != 0} <xi, v>/F(xi) by dense angular sampling + refinement.

        Independent of the closed-form polar; agrees with it to ~1e-8 on
        unit-scale inputs. Scalar v only.
        """
        v = np.asarray(v, dtype=float)
        if np.hypot(v[0], v[1]) == 0.0:
            return 0.0
        theta = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
        u = np.column_stack([np.cos(theta), np.sin(theta)])
        ratios = (u @ v) / self.eval(u)
        j = int(np.argmax(ratios))
        dth = 2.0 * math.pi / n_angles

        def ratio(t):
            ut = np.array([math.cos(t), math.sin(t)])
            return float(ut @ v) / self.eval(ut)

        _, best = _golden_max(ratio, theta[j] - dth, theta[j] + dth, refine_iters)
        return max(best, float(ratios[j]))

    # --- Wulff shape data ---------------------------------------------------

    def wulff_area(self) -> float:
        """kappa = area of {F° < 1} (closed form per family)."""
        if self.family == "euclidean":
            return math.pi
        if self.family == "quadratic":
            # {v : v^T M^{-1} v < 1} is an ellipse with semiaxes sqrt(eig(M))
            return math.pi * math.sqrt(np.linalg.det(self.m))
        q = self.p / (self.p - 1.0)
        return 4.0 * math.gamma(1.0 + 1.0 / q) ** 2 / math.gamma(1.0 + 2.0 / q)

    def wulff_boundary(self, radius: float, n: int) -> WulffApprox:
        """Inscribed CCW polygon on {F° = radius} via the inverse Gauss map.

        Vertices are radius·∇F(u(θ_j)) for n equally spaced directions; each
        lies exactly on the Wulff boundary since F°(∇F) = 1.
        """
        if radius <= 0.0:
            raise ValueError("wulff radius must be positive")
        if n < 16:
            raise ValueError("need at least 16 boundary vertices")
        theta = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        u = np.column_stack([np.cos(theta), np.sin(theta)])
        verts = radius * self.grad(u)
        return WulffApprox(radius=float(radius), vertices=verts, n_vertices=n)

    def norm_bounds(self, n_angles=4096, refine_iters=60):
        """(a, b) with a|x| <= F(x) <= b|x|: extremes of F on the unit circle."""
        theta = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
        u = np.column_stack([np.cos(theta), np.sin(theta)])
        vals = self.eval(u)
        dth = 2.0 * math.pi / n_angles

        def f(t):
            return self.eval(np.array([math.cos(t), math.sin(t)]))

        jmin = int(np.argmin(vals))
        jmax = int(np.argmax(vals))
        _, neg_a = _golden_max(lambda t: -f(t), theta[jmin] - dth, theta[jmin] + dth,
                               refine_iters)
        _, b = _golden_max(f, theta[jmax] - dth, theta[jmax] + dth, refine_iters)
        a = min(-neg_a, float(vals[jmin]))
        b = max(b, float(vals[jmax]))
        return a, b

    # --- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        if self.family == "euclidean":
            return {"family": "euclidean"}
        if self.family == "quadratic":
            return {"family": "quadratic", "m": [[self.m[0, 0], self.m[0, 1]],
                                                 [self.m[1, 0], self.m[1, 1]]]}
        return {"family": "lp", "p": self.p}

    @classmethod
    def from_json(cls, obj: dict) -> "FinslerNorm":
        family = obj.get("family")
        if family == "euclidean":
            return cls.euclidean()
        if family == "quadratic":
            return cls.quadratic(obj["m"])
        if family == "lp":
            return cls.lp(obj["p"])
        raise ValueError(f"unknown norm family {family!r}")
