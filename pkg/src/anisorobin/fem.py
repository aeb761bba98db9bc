"""Full 2D first Robin eigenvalue of the anisotropic Laplacian on triangle meshes.

Two independent code paths:

* ``solve_rayleigh`` minimizes the discrete quotient

      J(u) = [sum_T |T| F^2(grad u|_T) + alpha sum_e F(nu_e) int_e u^2]
             / sum_T int_T u^2

  for any supported norm family by descent from the constant function
  (which already realizes the upper bound alpha P_F/V). P1 elements make
  the gradient piecewise constant, so the anisotropic energy is evaluated
  exactly; edge and mass integrals use exact P1 quadrature. The descent
  direction is the negative quotient gradient preconditioned by the
  (euclidean stiffness + mass) operator, a spectrally equivalent SPD map
  that keeps iteration counts mesh independent; the line search is
  backtracking (halving) with sufficient decrease 1e-4, and convergence is
  declared on quotient stagnation below 1e-10 over 5 consecutive steps.

* ``solve_linear_quadratic`` exploits that quadratic-family norms give a
  linear operator: it assembles the generalized eigenproblem and runs
  inverse iteration at a shift verified (by LDL inertia) to sit below the
  first eigenvalue.

Meshes are fan triangulations of convex polygons with uniform 4-way
refinement; boundary vertices stay exactly on the polygon edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NonConvergenceError, SolverError
from .geometry import ConvexPolygon, anis_distance_batch, profile
from .norms import FinslerNorm


@dataclass
class TriMesh:
    """Conforming P1 triangle mesh with boundary edge data.

    triangles are CCW index triples; boundary_edges are CCW-oriented index
    pairs with outward unit normals boundary_nu and lengths boundary_len;
    h is the longest edge in the mesh.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    boundary_nu: np.ndarray
    boundary_len: np.ndarray
    h: float

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def boundary_weights(self, norm: FinslerNorm):
        """Anisotropic weights F(nu_e) of the boundary edges."""
        return norm.eval(self.boundary_nu)

    def to_json(self) -> dict:
        return {"vertices": self.vertices.tolist(),
                "triangles": self.triangles.tolist()}


def _boundary_of(vertices, triangles):
    edges = {}
    for tri in triangles:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(a, b), max(a, b))
            if key in edges:
                del edges[key]
            else:
                edges[key] = (a, b)  # oriented as in the (CCW) triangle
    be = np.array(sorted(edges.values()), dtype=np.int64)
    ev = vertices[be[:, 1]] - vertices[be[:, 0]]
    lengths = np.hypot(ev[:, 0], ev[:, 1])
    nu = np.column_stack([ev[:, 1], -ev[:, 0]]) / lengths[:, None]
    return be, nu, lengths


def _max_edge(vertices, triangles):
    p = vertices[triangles]
    h = 0.0
    for a, b in ((0, 1), (1, 2), (2, 0)):
        e = p[:, b] - p[:, a]
        h = max(h, float(np.hypot(e[:, 0], e[:, 1]).max()))
    return h


def mesh_from_arrays(vertices, triangles) -> TriMesh:
    vertices = np.asarray(vertices, dtype=float)
    triangles = np.asarray(triangles, dtype=np.int64)
    be, nu, lengths = _boundary_of(vertices, triangles)
    return TriMesh(vertices=vertices, triangles=triangles, boundary_edges=be,
                   boundary_nu=nu, boundary_len=lengths,
                   h=_max_edge(vertices, triangles))


def mesh_from_json(obj: dict) -> TriMesh:
    return mesh_from_arrays(obj["vertices"], obj["triangles"])


def refine_uniform(vertices, triangles):
    """One round of 4-way midpoint subdivision."""
    vertices = list(map(tuple, vertices))
    midpoint = {}

    def mid(a, b):
        key = (min(a, b), max(a, b))
        if key not in midpoint:
            va, vb = vertices[a], vertices[b]
            vertices.append(((va[0] + vb[0]) / 2.0, (va[1] + vb[1]) / 2.0))
            midpoint[key] = len(vertices) - 1
        return midpoint[key]

    out = []
    for i, j, k in triangles:
        a, b, c = mid(i, j), mid(j, k), mid(k, i)
        out.extend([(i, a, c), (j, b, a), (k, c, b), (a, b, c)])
    return np.array(vertices), np.array(out, dtype=np.int64)


def mesh_polygon(poly: ConvexPolygon, refinements: int) -> TriMesh:
    """Fan triangulation from the vertex centroid + uniform refinement."""
    if refinements < 0:
        raise ValueError("refinements must be >= 0")
    n = poly.n_vertices
    center = poly.vertices.mean(axis=0)
    vertices = np.vstack([center[None, :], poly.vertices])
    triangles = np.array([(0, 1 + i, 1 + (i + 1) % n) for i in range(n)],
                         dtype=np.int64)
    for _ in range(refinements):
        vertices, triangles = refine_uniform(vertices, triangles)
    return mesh_from_arrays(vertices, triangles)


def mesh_wulff(norm: FinslerNorm, radius: float, n_boundary: int,
               refinements: int) -> TriMesh:
    """Mesh of the inscribed n_boundary-gon approximation of the Wulff shape."""
    approx = norm.wulff_boundary(radius, n_boundary)
    return mesh_polygon(ConvexPolygon(approx.vertices), refinements)


@dataclass
class FemSolution:
    """Discrete first eigenpair: u has unit discrete L2 norm and single sign."""

    u: np.ndarray
    lam: float
    alpha: float
    iterations: int
    residual: float


class P1Context:
    """Precomputed P1 operators for one (mesh, norm) pair.

    GX/GY map nodal values to per-triangle gradient components; mass is the
    consistent P1 mass matrix; bform the F(nu)-weighted boundary quadratic
    form (the alpha-independent part of the boundary term).
    """

    def __init__(self, mesh: TriMesh, norm: FinslerNorm):
        self.mesh = mesh
        self.norm = norm
        v = mesh.vertices
        t = mesh.triangles
        p = v[t]  # (nT, 3, 2)
        x, y = p[..., 0], p[..., 1]
        det = ((x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0])
               - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0]))
        if np.any(det <= 0.0):
            raise SolverError("mesh has non-CCW or degenerate triangles")
        self.area = 0.5 * det
        nt = len(t)
        b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
        c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
        rows = np.repeat(np.arange(nt), 3)
        cols = t.ravel()
        nv = len(v)
        self.gx = sp.csr_matrix(((b / det[:, None]).ravel(), (rows, cols)),
                                shape=(nt, nv))
        self.gy = sp.csr_matrix(((c / det[:, None]).ravel(), (rows, cols)),
                                shape=(nt, nv))
        # consistent mass: |T|/12 * [[2,1,1],[1,2,1],[1,1,2]]
        mloc = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0
        data = (self.area[:, None, None] * mloc).ravel()
        rr = np.repeat(t, 3, axis=1).ravel()
        cc = np.tile(t, (1, 3)).ravel()
        self.mass = sp.csr_matrix((data, (rr, cc)), shape=(nv, nv))
        # boundary quadratic form: F(nu_e) |e|/6 * [[2,1],[1,2]]
        w = norm.eval(mesh.boundary_nu) * mesh.boundary_len / 6.0
        be = mesh.boundary_edges
        bloc = np.array([[2.0, 1.0], [1.0, 2.0]])
        bdata = (w[:, None, None] * bloc).ravel()
        brr = np.repeat(be, 2, axis=1).ravel()
        bcc = np.tile(be, (1, 2)).ravel()
        self.bform = sp.csr_matrix((bdata, (brr, bcc)), shape=(nv, nv))
        self._precond = None

    def boundary_perimeter(self) -> float:
        return float(np.sum(self.norm.eval(self.mesh.boundary_nu)
                            * self.mesh.boundary_len))

    def volume(self) -> float:
        return float(self.area.sum())

    def stiffness_quadratic(self, m) -> sp.csr_matrix:
        """Assembled stiffness int (grad u)^T M (grad v) for quadratic norms."""
        w = sp.diags(self.area)
        gx, gy = self.gx, self.gy
        m = np.asarray(m, dtype=float)
        k = (m[0, 0] * (gx.T @ w @ gx) + m[1, 1] * (gy.T @ w @ gy)
             + m[0, 1] * (gx.T @ w @ gy + gy.T @ w @ gx))
        return k.tocsr()

    def gradients(self, u):
        return np.column_stack([self.gx @ u, self.gy @ u])

    def energy(self, u, alpha):
        g = self.gradients(u)
        f = self.norm.eval(g)
        return float(self.area @ (f * f)) + alpha * float(u @ (self.bform @ u))

    def quotient(self, u, alpha):
        return self.energy(u, alpha) / float(u @ (self.mass @ u))

    def precondition(self, r):
        if self._precond is None:
            k0 = self.stiffness_quadratic(np.eye(2))
            self._precond = spla.splu((k0 + self.mass).tocsc())
        return self._precond.solve(r)


def solve_rayleigh(mesh: TriMesh, norm: FinslerNorm, alpha: float,
                   max_iters: int = 5000, stall_tol: float = 1e-10,
                   stall_iters: int = 5, precondition: bool = True,
                   context: P1Context | None = None) -> FemSolution:
    """Minimize the discrete anisotropic Rayleigh quotient, alpha <= 0.

    Starts from the constant function; raises NonConvergenceError (carrying
    the last iterate) if max_iters is reached with residual above 1e-6.
    """
    if alpha > 0.0:
        raise ValueError("solver supports alpha <= 0 only")
    ctx = context if context is not None else P1Context(mesh, norm)
    mass, bform, w = ctx.mass, ctx.bform, ctx.area
    u = np.ones(mesh.n_vertices)
    u /= math.sqrt(u @ (mass @ u))
    gx_u, gy_u = ctx.gx @ u, ctx.gy @ u

    def split_energy(gx, gy):
        f = ctx.norm.eval(np.column_stack([gx, gy]))
        return float(w @ (f * f))

    j = (split_energy(gx_u, gy_u) + alpha * float(u @ (bform @ u))) / float(u @ (mass @ u))
    iterations = 0
    stall = 0
    residual = math.inf
    step = 1.0
    while iterations < max_iters:
        g = np.column_stack([gx_u, gy_u])
        eg = ctx.norm.energy_grad(g)
        bu = bform @ u
        mu = mass @ u
        d_den = float(u @ mu)
        grad_n = 2.0 * (ctx.gx.T @ (w * eg[:, 0]) + ctx.gy.T @ (w * eg[:, 1])
                        + alpha * bu)
        grad_j = (grad_n - 2.0 * j * mu) / d_den
        direction = -ctx.precondition(grad_j) if precondition else -grad_j
        slope = float(grad_j @ direction)
        if slope >= 0.0 or not math.isfinite(slope):
            residual = 0.0
            break
        gx_d, gy_d = ctx.gx @ direction, ctx.gy @ direction
        b_ud, b_dd = float(u @ (bform @ direction)), float(direction @ (bform @ direction))
        m_ud, m_dd = float(u @ (mass @ direction)), float(direction @ (mass @ direction))
        b_uu = float(u @ bu)

        def quotient_at(t):
            num = (split_energy(gx_u + t * gx_d, gy_u + t * gy_d)
                   + alpha * (b_uu + 2.0 * t * b_ud + t * t * b_dd))
            den = d_den + 2.0 * t * m_ud + t * t * m_dd
            return num / den

        t = 2.0 * step
        j_new = quotient_at(t)
        backtracks = 0
        while j_new > j + 1e-4 * t * slope and backtracks < 60:
            t *= 0.5
            j_new = quotient_at(t)
            backtracks += 1
        iterations += 1
        if backtracks >= 60:
            residual = 0.0
            break
        step = t
        u = u + t * direction
        gx_u = gx_u + t * gx_d
        gy_u = gy_u + t * gy_d
        nrm = math.sqrt(u @ (mass @ u))
        u /= nrm
        gx_u /= nrm
        gy_u /= nrm
        residual = (j - j_new) / max(abs(j_new), 1e-300)
        j = j_new
        stall = stall + 1 if residual < stall_tol else 0
        if stall >= stall_iters:
            break
    else:
        sol = _finalize(ctx, u, j, alpha, iterations, residual)
        if residual > 1e-6:
            raise NonConvergenceError(
                f"quotient still moving ({residual:.2e}) after {max_iters} iterations",
                last_solution=sol)
        return sol
    return _finalize(ctx, u, j, alpha, iterations, residual)


def _finalize(ctx, u, lam, alpha, iterations, residual) -> FemSolution:
    u = u / math.sqrt(u @ (ctx.mass @ u))
    if u.sum() < 0.0:
        u = -u
    return FemSolution(u=u, lam=float(lam), alpha=float(alpha),
                       iterations=iterations, residual=float(residual))


def _inertia_below(a_shifted: sp.csc_matrix) -> int:
    """Number of negative eigenvalues of a symmetric sparse matrix.

    Uses SuperLU with diagonal (threshold-0) pivoting, which keeps the
    permutation symmetric so the signs of diag(U) give the inertia.
    """
    lu = spla.splu(a_shifted, diag_pivot_thresh=0.0,
                   options={"SymmetricMode": True})
    return int((lu.U.diagonal() < 0.0).sum())


def solve_linear_quadratic(mesh: TriMesh, m, alpha: float,
                           tol: float = 1e-14, max_iters: int = 400) -> FemSolution:
    """Generalized-eigenvalue path for quadratic norms (operator is linear).

    Inverse iteration at shift sigma = 2 alpha P_F/V - 1, verified below the
    first eigenvalue by an inertia count and lowered geometrically if not.
    """
    if alpha > 0.0:
        raise ValueError("solver supports alpha <= 0 only")
    m = np.asarray(m, dtype=float)
    norm = FinslerNorm.quadratic(m)
    ctx = P1Context(mesh, norm)
    a = (ctx.stiffness_quadratic(m) + alpha * ctx.bform).tocsc()
    mass = ctx.mass.tocsc()
    p_f = ctx.boundary_perimeter()
    vol = ctx.volume()
    sigma = 2.0 * alpha * p_f / vol - 1.0
    for _ in range(80):
        if _inertia_below((a - sigma * mass).tocsc()) == 0:
            break
        sigma = 2.0 * sigma - 1.0
    else:
        raise SolverError("could not find a shift below the first eigenvalue")
    try:
        lu = spla.splu((a - sigma * mass).tocsc())
    except RuntimeError as exc:  # factorization failure
        raise SolverError(f"shifted factorization failed: {exc}") from exc
    u = np.ones(mesh.n_vertices)
    u /= math.sqrt(u @ (mass @ u))
    lam_prev = math.inf
    lam = float(u @ (a @ u))
    iterations = 0
    residual = math.inf
    while iterations < max_iters:
        u = lu.solve(mass @ u)
        u /= math.sqrt(u @ (mass @ u))
        lam_prev, lam = lam, float(u @ (a @ u))
        iterations += 1
        residual = abs(lam - lam_prev) / max(abs(lam), 1e-300)
        if residual < tol and iterations >= 2:
            break
    return _finalize(ctx, u, lam, alpha, iterations, residual)


def eigen_derivative(sol: FemSolution, mesh: TriMesh, norm: FinslerNorm) -> float:
    """d(lambda)/d(alpha) = boundary integral of u^2 weighted by F(nu).

    Requires sol.u at unit discrete L2 norm (solver output satisfies this).
    """
    ctx = P1Context(mesh, norm)
    return float(sol.u @ (ctx.bform @ sol.u))


def pushforward_quotient(poly: ConvexPolygon, norm: FinslerNorm,
                         phi_breaks, phi_vals, alpha: float,
                         refinements: int = 5, n_profile: int = 2048):
    """Evaluate the parallel-coordinate test function both ways.

    Builds u = phi(A_F(rho_F(x))) on a mesh of the polygon and returns
    (lhs, rhs): lhs is the discrete 2D quotient of u, rhs the reduced 1D
    expression computed from the (A_F, L_F) profile. phi is piecewise
    linear with the given breakpoints on [0, area(poly)].
    """
    phi_breaks = np.asarray(phi_breaks, dtype=float)
    phi_vals = np.asarray(phi_vals, dtype=float)
    if np.all(phi_vals == 0.0):
        raise ValueError("phi must not be identically zero")
    prof = profile(poly, norm, n_profile)
    mesh = mesh_polygon(poly, refinements)
    ctx = P1Context(mesh, norm)
    rho = anis_distance_batch(mesh.vertices, poly, norm)
    a_of_rho = np.interp(rho, prof.t, prof.a)
    u = np.interp(a_of_rho, phi_breaks, phi_vals)
    lhs = ctx.quotient(u, alpha)

    a_t = np.interp(prof.t, prof.t, prof.a)
    idx = np.clip(np.searchsorted(phi_breaks, a_t, side="right") - 1,
                  0, len(phi_breaks) - 2)
    slope = ((phi_vals[idx + 1] - phi_vals[idx])
             / (phi_breaks[idx + 1] - phi_breaks[idx]))
    phi_at = np.interp(a_t, phi_breaks, phi_vals)
    phi0 = float(np.interp(0.0, phi_breaks, phi_vals))
    num = np.trapz(slope ** 2 * prof.l ** 3, prof.t) + alpha * phi0 ** 2 * prof.l0
    den = np.trapz(phi_at ** 2 * prof.l, prof.t)
    return lhs, float(num / den)
