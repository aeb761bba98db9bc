"""First Robin eigenvalues of the anisotropic (Finsler) Laplacian on planar
domains with non-positive boundary parameter, plus numerical verification of
the Wulff-shape spectral isoperimetric inequalities via the reduction to
one-dimensional Bessel secular equations."""

__version__ = "0.1.0"

from .backend import backend_name
from .bessel import bessel_i0, bessel_i1, bessel_k0, bessel_k1
from .fem import (FemSolution, P1Context, TriMesh, eigen_derivative,
                  mesh_from_json, mesh_polygon, mesh_wulff,
                  pushforward_quotient, solve_linear_quadratic, solve_rayleigh)
from .geometry import (ConvexPolygon, ParallelProfile, anis_distance,
                       anis_perimeter, area, eikonal_check, inner_parallel,
                       inradius, isoperimetric_deficit, minkowski_sum_wulff,
                       parallel_radii, profile, r_transform, steiner_check)
from .norms import FinslerNorm, WulffApprox
from .radial import (AnnulusSpec, Eigenpair1D, GammaTable, annulus_radii_for,
                     annulus_secular, fd_annulus, gamma_curves,
                     intersection_alpha, mu_derivative, radial_fd,
                     wulff_secular)
from .verify import (VerificationRecord, asymptotics_check, chain_check,
                     multiply_connected_note, parallel_bound,
                     read_records_jsonl, verify_area_theorem,
                     verify_perimeter_theorem, write_records_jsonl,
                     write_summary_csv)

__all__ = [
    "__version__", "backend_name",
    "bessel_i0", "bessel_i1", "bessel_k0", "bessel_k1",
    "FinslerNorm", "WulffApprox",
    "ConvexPolygon", "ParallelProfile", "area", "anis_perimeter",
    "anis_distance", "inner_parallel", "inradius", "profile", "r_transform",
    "parallel_radii", "steiner_check", "isoperimetric_deficit",
    "eikonal_check", "minkowski_sum_wulff",
    "AnnulusSpec", "Eigenpair1D", "GammaTable", "wulff_secular",
    "annulus_secular", "fd_annulus", "radial_fd", "gamma_curves",
    "annulus_radii_for", "intersection_alpha", "mu_derivative",
    "TriMesh", "FemSolution", "P1Context", "mesh_polygon", "mesh_wulff",
    "mesh_from_json", "solve_rayleigh", "solve_linear_quadratic",
    "eigen_derivative", "pushforward_quotient",
    "VerificationRecord", "parallel_bound", "verify_perimeter_theorem",
    "verify_area_theorem", "asymptotics_check", "multiply_connected_note",
    "chain_check", "write_records_jsonl", "read_records_jsonl",
    "write_summary_csv",
]
