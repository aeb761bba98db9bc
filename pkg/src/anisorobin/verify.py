"""Composed eigenvalue-inequality checks producing machine-readable records.

Each check computes the quantities entering one inequality of the chain

    lambda_FEM(alpha, Omega)  <=  mu(alpha, annulus r1,r2)
                              <=  lambda(alpha, Wulff r2)
                              <=  lambda(alpha, Wulff r3')

(or one of the endpoint theorems: same-perimeter and same-area Wulff
comparisons) and reports a margin. A record passes iff margin >= -tolerance;
solver failures yield verdict 'inconclusive'.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

from . import fem, geometry, radial
from .errors import NoRootError, SolverError
from .norms import FinslerNorm

DEFAULT_TOL = 1e-5


@dataclass
class VerificationRecord:
    check_id: str
    inputs: dict
    quantities: dict
    tolerance: float
    verdict: str = field(default="")

    def __post_init__(self):
        if not self.verdict:
            margin = self.quantities.get("margin")
            if margin is None:
                self.verdict = "inconclusive"
            else:
                self.verdict = "pass" if margin >= -self.tolerance else "fail"

    @property
    def margin(self):
        return self.quantities.get("margin")

    def to_json_dict(self) -> dict:
        return {"check_id": self.check_id, "inputs": self.inputs,
                "quantities": self.quantities, "tolerance": self.tolerance,
                "verdict": self.verdict}

    @classmethod
    def from_json_dict(cls, obj) -> "VerificationRecord":
        return cls(check_id=obj["check_id"], inputs=obj["inputs"],
                   quantities=obj["quantities"], tolerance=obj["tolerance"],
                   verdict=obj["verdict"])


def write_records_jsonl(records, path):
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json_dict(), sort_keys=True) + "\n")


def read_records_jsonl(path):
    with open(path) as fh:
        return [VerificationRecord.from_json_dict(json.loads(line))
                for line in fh if line.strip()]


def write_summary_csv(records, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check_id", "margin", "tolerance", "verdict"])
        for rec in records:
            writer.writerow([rec.check_id, repr(rec.margin), repr(rec.tolerance),
                             rec.verdict])


def _inputs_echo(poly, norm, alpha, **extra):
    d = {"norm": norm.to_json(), "alpha": alpha}
    if poly is not None:
        d["domain"] = poly.to_json()
    d.update(extra)
    return d


def _lam_wulff(radius, alpha):
    return 0.0 if alpha == 0.0 else radial.wulff_secular(radius, alpha)


def _mu_annulus(r1, r2, alpha):
    if alpha == 0.0:
        return 0.0
    if r1 <= 1e-6 * r2:
        return radial.wulff_secular(r2, alpha)
    return radial.annulus_secular(radial.AnnulusSpec(r1, r2), alpha)


def _lam_fem(poly, norm, alpha, refinements):
    mesh = fem.mesh_polygon(poly, refinements)
    return fem.solve_rayleigh(mesh, norm, alpha).lam


def parallel_bound(poly, norm, alpha, refinements=5, fd_nodes=20001,
                   tol=DEFAULT_TOL) -> VerificationRecord:
    """lambda_FEM <= mu(alpha, annulus of equal area and outer perimeter)."""
    inputs = _inputs_echo(poly, norm, alpha, refinements=refinements,
                          fd_nodes=fd_nodes)
    try:
        r1, r2, r3 = geometry.parallel_radii(poly, norm)
        mu = _mu_annulus(r1, r2, alpha)
        mu_fd = _mu_fd(r1, r2, alpha, fd_nodes)
        lam = _lam_fem(poly, norm, alpha, refinements)
    except (NoRootError, SolverError) as exc:
        return VerificationRecord("parallel_bound", inputs,
                                  {"error_note": str(exc)}, tol, "inconclusive")
    q = {"lambda_fem": lam, "mu_annulus": mu, "mu_annulus_fd": mu_fd,
         "r1": r1, "r2": r2, "margin": mu - lam}
    return VerificationRecord("parallel_bound", inputs, q, tol)


def _mu_fd(r1, r2, alpha, n_nodes):
    if alpha == 0.0:
        return 0.0
    return radial.fd_annulus(radial.AnnulusSpec(r1, r2), alpha, n_nodes).lam


def verify_perimeter_theorem(poly, norm, alpha, refinements=5,
                             tol=DEFAULT_TOL) -> VerificationRecord:
    """lambda_FEM(alpha, Omega) <= lambda(alpha, Wulff of equal perimeter)."""
    inputs = _inputs_echo(poly, norm, alpha, refinements=refinements)
    try:
        kappa = norm.wulff_area()
        r_tilde = geometry.anis_perimeter(poly, norm) / (2.0 * kappa)
        lam_w = _lam_wulff(r_tilde, alpha)
        lam = _lam_fem(poly, norm, alpha, refinements)
    except (NoRootError, SolverError) as exc:
        return VerificationRecord("perimeter_theorem", inputs,
                                  {"error_note": str(exc)}, tol, "inconclusive")
    q = {"lambda_fem": lam, "lambda_wulff_perimeter": lam_w,
         "r_tilde": r_tilde, "margin": lam_w - lam}
    return VerificationRecord("perimeter_theorem", inputs, q, tol)


def verify_area_theorem(poly, norm, alpha_grid, refinements=5, tol=DEFAULT_TOL):
    """Same-area Wulff comparison over an ascending alpha grid.

    Returns (records, alpha_star_hat): the most negative grid alpha from
    which all margins up to 0 stay >= -tol, or None if even the closest to
    zero fails.
    """
    alphas = sorted(float(a) for a in alpha_grid)
    if any(a > 0.0 for a in alphas):
        raise ValueError("alpha grid must be non-positive")
    kappa = norm.wulff_area()
    r_star = (geometry.area(poly) / kappa) ** 0.5
    records = []
    for alpha in alphas:
        inputs = _inputs_echo(poly, norm, alpha, refinements=refinements)
        try:
            lam_w = _lam_wulff(r_star, alpha)
            lam = _lam_fem(poly, norm, alpha, refinements)
        except (NoRootError, SolverError) as exc:
            records.append(VerificationRecord(
                "area_theorem", inputs, {"error_note": str(exc)}, tol,
                "inconclusive"))
            continue
        q = {"lambda_fem": lam, "lambda_wulff_area": lam_w, "r_star": r_star,
             "margin": lam_w - lam}
        records.append(VerificationRecord("area_theorem", inputs, q, tol))
    alpha_star_hat = None
    for alpha, rec in reversed(list(zip(alphas, records))):
        if rec.verdict != "pass":
            break
        alpha_star_hat = alpha
    return records, alpha_star_hat


def asymptotics_check(r3, alpha_small, epsilon=0.5, tol=DEFAULT_TOL) -> VerificationRecord:
    """Small-alpha expansions: lambda ~ 2a/r3 and mu ~ 2a r2/r3^2.

    Remainders must be below tol and scale quadratically: doubling alpha
    multiplies them by ~4 (accepted within a factor 3 of that).
    """
    if not (alpha_small < 0.0 and abs(alpha_small) <= 1e-2):
        raise ValueError("need a small negative alpha (|alpha| <= 1e-2)")
    r1, r2 = radial.annulus_radii_for(r3, epsilon)
    inputs = {"r3": r3, "epsilon": epsilon, "alpha": alpha_small}

    def remainders(a):
        lam = radial.wulff_secular(r3, a)
        mu = radial.annulus_secular(radial.AnnulusSpec(r1, r2), a)
        return abs(lam - 2.0 * a / r3), abs(mu - 2.0 * a * r2 / (r3 * r3)), lam, mu

    rem_w, rem_a, lam, mu = remainders(alpha_small)
    rem_w2, rem_a2, _, _ = remainders(2.0 * alpha_small)
    ratio_w = rem_w2 / rem_w if rem_w > 0.0 else float("nan")
    ratio_a = rem_a2 / rem_a if rem_a > 0.0 else float("nan")
    margin = tol - max(rem_w, rem_a)
    ratios_ok = all(4.0 / 3.0 <= r <= 12.0 for r in (ratio_w, ratio_a))
    if not ratios_ok:
        margin = -float("inf")
    q = {"lambda_wulff": lam, "mu_annulus": mu, "remainder_wulff": rem_w,
         "remainder_annulus": rem_a, "ratio_wulff": ratio_w,
         "ratio_annulus": ratio_a, "margin": margin}
    return VerificationRecord("asymptotics", inputs, q, 0.0,
                              "pass" if margin >= 0.0 else "fail")


def multiply_connected_note(poly, norm, alpha, hole_perimeter,
                            tol=DEFAULT_TOL) -> VerificationRecord:
    """Monotonicity step covering domains with holes.

    With inner boundaries of total anisotropic length hole_perimeter, the
    equal-perimeter Wulff radius grows from r2 to r3' and the eigenvalue may
    only increase; this checks that step without meshing holed domains.
    """
    if hole_perimeter <= 0.0:
        raise ValueError("hole_perimeter must be positive")
    inputs = _inputs_echo(poly, norm, alpha, hole_perimeter=hole_perimeter)
    kappa = norm.wulff_area()
    outer = geometry.anis_perimeter(poly, norm)
    r2 = outer / (2.0 * kappa)
    r3p = (outer + hole_perimeter) / (2.0 * kappa)
    try:
        lam2 = _lam_wulff(r2, alpha)
        lam3 = _lam_wulff(r3p, alpha)
    except (NoRootError, SolverError) as exc:
        return VerificationRecord("multiply_connected", inputs,
                                  {"error_note": str(exc)}, tol, "inconclusive")
    q = {"lambda_wulff_r2": lam2, "lambda_wulff_r3_prime": lam3,
         "r2": r2, "r3_prime": r3p, "margin": lam3 - lam2}
    return VerificationRecord("multiply_connected", inputs, q, tol)


def chain_check(poly, norm, alpha, hole_perimeter=0.0, refinements=5,
                fd_nodes=20001, tol=DEFAULT_TOL) -> VerificationRecord:
    """Full chain lambda_FEM <= mu <= lambda_W(r2) <= lambda_W(r3')."""
    inputs = _inputs_echo(poly, norm, alpha, hole_perimeter=hole_perimeter,
                          refinements=refinements)
    try:
        r1, r2, r3 = geometry.parallel_radii(poly, norm)
        kappa = norm.wulff_area()
        r3p = (geometry.anis_perimeter(poly, norm) + hole_perimeter) / (2.0 * kappa)
        lam = _lam_fem(poly, norm, alpha, refinements)
        mu = _mu_annulus(r1, r2, alpha)
        lam_w2 = _lam_wulff(r2, alpha)
        lam_w3 = _lam_wulff(r3p, alpha)
    except (NoRootError, SolverError) as exc:
        return VerificationRecord("chain", inputs, {"error_note": str(exc)},
                                  tol, "inconclusive")
    margins = (mu - lam, lam_w2 - mu, lam_w3 - lam_w2)
    q = {"lambda_fem": lam, "mu_annulus": mu, "lambda_wulff_r2": lam_w2,
         "lambda_wulff_r3_prime": lam_w3, "margin_parallel": margins[0],
         "margin_annulus_wulff": margins[1], "margin_monotone": margins[2],
         "margin": min(margins)}
    return VerificationRecord("chain", inputs, q, tol)
