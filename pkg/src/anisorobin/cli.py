"""Command-line surface.

Subcommands (all driven by a single JSON config; flags only select paths
and verbosity, keeping numerics reproducible):

  eig         first eigenvalue of the configured domain (secular or FEM)
  verify      one of the inequality checks: perimeter|area|parallel|asymptotics|chain
  curves      annulus-vs-Wulff eigenvalue curve table (CSV, optional SVG)
  geom        area/perimeter/inradius/profile dump for a polygon domain
  norm-check  randomized norm identity suite (seeded)

Exit codes: 0 ok / all pass, 1 verification failures, 2 config errors,
3 solver errors. Results of `eig` points are cached by content hash under
$ANISOROBIN_CACHE_DIR when that variable is set.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__, fem, geometry, radial, verify
from .errors import ConfigError, NoRootError, SolverError
from .norms import FinslerNorm

_SOLVER_DEFAULTS = {"refinements": 5, "n_nodes": 20001, "n_boundary": 256,
                    "max_iters": 5000, "tolerance": verify.DEFAULT_TOL,
                    "workers": 1, "n_profile": 512}


def _fail_config(msg):
    raise ConfigError(msg)


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        _fail_config(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        _fail_config(f"config is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        _fail_config("config root must be a JSON object")
    return normalize_config(cfg)


def normalize_config(cfg: dict) -> dict:
    """Validate and fill defaults; raises ConfigError naming the bad field."""
    out = {}
    norm_obj = cfg.get("norm", {"family": "euclidean"})
    try:
        out["norm"] = FinslerNorm.from_json(norm_obj).to_json()
    except (ValueError, KeyError, TypeError) as exc:
        _fail_config(f"field 'norm': {exc}")
    domain = cfg.get("domain")
    if domain is not None:
        if not isinstance(domain, dict):
            _fail_config("field 'domain' must be an object")
        kinds = [k for k in ("vertices", "wulff", "annulus") if k in domain]
        if len(kinds) != 1:
            _fail_config("field 'domain' must have exactly one of "
                         "'vertices', 'wulff', 'annulus'")
        if kinds[0] == "vertices":
            try:
                out["domain"] = geometry.ConvexPolygon(domain["vertices"]).to_json()
            except Exception as exc:
                _fail_config(f"field 'domain.vertices': {exc}")
        elif kinds[0] == "wulff":
            r = float(domain["wulff"].get("radius", 0.0))
            if r <= 0.0:
                _fail_config("field 'domain.wulff.radius' must be positive")
            out["domain"] = {"wulff": {"radius": r}}
        else:
            r1 = float(domain["annulus"].get("r1", -1.0))
            r2 = float(domain["annulus"].get("r2", 0.0))
            if not 0.0 <= r1 < r2:
                _fail_config("field 'domain.annulus' needs 0 <= r1 < r2")
            out["domain"] = {"annulus": {"r1": r1, "r2": r2}}
    alpha = cfg.get("alpha", 0.0)
    if isinstance(alpha, dict):
        sweep = alpha.get("sweep")
        if not isinstance(sweep, dict):
            _fail_config("field 'alpha' must be a number or {'sweep': {...}}")
        try:
            lo, hi, n = float(sweep["from"]), float(sweep["to"]), int(sweep["n"])
        except (KeyError, ValueError, TypeError):
            _fail_config("field 'alpha.sweep' needs numeric 'from', 'to' and int 'n'")
        if n < 1:
            _fail_config("field 'alpha.sweep.n' must be >= 1")
        if lo > 0.0 or hi > 0.0:
            _fail_config("field 'alpha.sweep' bounds must be <= 0")
        out["alpha"] = {"sweep": {"from": lo, "to": hi, "n": n}}
    else:
        try:
            a = float(alpha)
        except (TypeError, ValueError):
            _fail_config("field 'alpha' must be a number or a sweep object")
        if a > 0.0:
            _fail_config("field 'alpha' must be <= 0")
        out["alpha"] = a
    solver = dict(_SOLVER_DEFAULTS)
    user_solver = cfg.get("solver", {})
    if not isinstance(user_solver, dict):
        _fail_config("field 'solver' must be an object")
    for key, val in user_solver.items():
        if key not in solver:
            _fail_config(f"field 'solver.{key}' is not recognized")
        solver[key] = type(_SOLVER_DEFAULTS[key])(val)
    for key in ("refinements", "n_nodes", "n_boundary", "max_iters", "workers",
                "n_profile"):
        if solver[key] < (0 if key == "refinements" else 1):
            _fail_config(f"field 'solver.{key}' must be positive")
    out["solver"] = solver
    for key, default in (("epsilon", 0.5), ("hole_perimeter", 0.0),
                         ("seed", 0), ("n_samples", 1000)):
        out[key] = type(default)(cfg.get(key, default))
    output = cfg.get("output", {})
    if not isinstance(output, dict):
        _fail_config("field 'output' must be an object")
    out["output"] = {k: str(v) for k, v in output.items()}
    return out


def _alphas(cfg):
    alpha = cfg["alpha"]
    if isinstance(alpha, dict):
        s = alpha["sweep"]
        return list(np.linspace(s["from"], s["to"], s["n"]))
    return [alpha]


def _config_hash(point_cfg: dict) -> str:
    blob = json.dumps({"config": point_cfg, "version": __version__},
                      sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_lookup(key):
    cache_dir = os.environ.get("ANISOROBIN_CACHE_DIR")
    if not cache_dir:
        return None, None
    path = os.path.join(cache_dir, key + ".json")
    if os.path.exists(path):
        with open(path) as fh:
            return json.load(fh), path
    return None, path


def _cache_store(path, summary):
    if path is None:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(summary, fh, sort_keys=True)


def _eig_point(cfg, alpha):
    """One eigenvalue computation; returns the summary dict."""
    point_cfg = {"norm": cfg["norm"], "domain": cfg["domain"], "alpha": alpha,
                 "solver": cfg["solver"]}
    cached, cache_path = _cache_lookup(_config_hash(point_cfg))
    if cached is not None:
        return cached
    norm = FinslerNorm.from_json(cfg["norm"])
    domain = cfg["domain"]
    solver = cfg["solver"]
    if "wulff" in domain:
        r = domain["wulff"]["radius"]
        lam = 0.0 if alpha == 0.0 else radial.wulff_secular(r, alpha)
        summary = {"lambda": lam, "alpha": alpha, "iterations": 0,
                   "residual": 0.0, "pf_over_v_bound": 2.0 * alpha / r,
                   "method": "secular"}
    elif "annulus" in domain:
        r1, r2 = domain["annulus"]["r1"], domain["annulus"]["r2"]
        if alpha == 0.0:
            lam = 0.0
        elif r1 == 0.0:
            lam = radial.wulff_secular(r2, alpha)
        else:
            lam = radial.annulus_secular(radial.AnnulusSpec(r1, r2), alpha)
        bound = 2.0 * alpha * r2 / (r2 * r2 - r1 * r1)
        summary = {"lambda": lam, "alpha": alpha, "iterations": 0,
                   "residual": 0.0, "pf_over_v_bound": bound,
                   "method": "secular"}
    else:
        poly = geometry.ConvexPolygon(domain["vertices"])
        mesh = fem.mesh_polygon(poly, solver["refinements"])
        sol = fem.solve_rayleigh(mesh, norm, alpha,
                                 max_iters=solver["max_iters"])
        bound = (alpha * geometry.anis_perimeter(poly, norm)
                 / geometry.area(poly))
        summary = {"lambda": sol.lam, "alpha": alpha,
                   "iterations": sol.iterations, "residual": sol.residual,
                   "pf_over_v_bound": bound, "method": "fem"}
    _cache_store(cache_path, summary)
    return summary


def _run_pool(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def cmd_eig(cfg, outdir, verbose) -> int:
    if cfg.get("domain") is None:
        _fail_config("field 'domain' is required for eig")
    alphas = _alphas(cfg)
    results = _run_pool(lambda a: _eig_point(cfg, a), alphas,
                        cfg["solver"]["workers"])
    payload = results[0] if len(results) == 1 else {"sweep": results}
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text)
    _write_output(cfg, outdir, "summary", text + "\n")
    path = _output_path(cfg, outdir, "eigenfunction_csv")
    if path and "wulff" in cfg["domain"]:
        pair = radial.radial_fd(cfg["domain"]["wulff"]["radius"], alphas[-1],
                                cfg["solver"]["n_nodes"])
        _write_eigenfunction_csv(path, pair.grid, pair.phi)
    elif path and "annulus" in cfg["domain"]:
        ann = cfg["domain"]["annulus"]
        pair = radial.fd_annulus(radial.AnnulusSpec(ann["r1"], ann["r2"]),
                                 alphas[-1], cfg["solver"]["n_nodes"])
        _write_eigenfunction_csv(path, pair.grid, pair.phi)
    elif path:
        poly = geometry.ConvexPolygon(cfg["domain"]["vertices"])
        mesh = fem.mesh_polygon(poly, cfg["solver"]["refinements"])
        sol = fem.solve_rayleigh(mesh, FinslerNorm.from_json(cfg["norm"]),
                                 alphas[-1], max_iters=cfg["solver"]["max_iters"])
        with open(path, "w") as fh:
            fh.write("x,y,u\n")
            for (x, y), uv in zip(mesh.vertices, sol.u):
                fh.write(f"{x!r},{y!r},{uv!r}\n")
    return 0


def _write_eigenfunction_csv(path, grid, phi):
    with open(path, "w") as fh:
        fh.write("r,phi\n")
        for r, p in zip(grid, phi):
            fh.write(f"{r!r},{p!r}\n")


def _output_path(cfg, outdir, key):
    name = cfg["output"].get(key)
    if not name:
        return None
    return os.path.join(outdir, name) if outdir else name


def _write_output(cfg, outdir, key, text):
    path = _output_path(cfg, outdir, key)
    if path:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)


def _require_polygon(cfg):
    domain = cfg.get("domain") or {}
    if "vertices" not in domain:
        _fail_config("this command needs a polygon domain ('domain.vertices')")
    return geometry.ConvexPolygon(domain["vertices"])


def cmd_verify(cfg, which, outdir, verbose) -> int:
    norm = FinslerNorm.from_json(cfg["norm"])
    alphas = _alphas(cfg)
    tol = cfg["solver"]["tolerance"]
    refinements = cfg["solver"]["refinements"]
    extra = {}
    if which == "asymptotics":
        r3 = (cfg.get("domain") or {}).get("wulff", {}).get("radius", 1.0)
        for a in alphas:
            if not (a < 0.0 and abs(a) <= 1e-2):
                _fail_config("field 'alpha': asymptotics needs -1e-2 <= alpha < 0")
        records = [verify.asymptotics_check(r3, a, cfg["epsilon"], tol)
                   for a in alphas]
    else:
        poly = _require_polygon(cfg)
        if which == "perimeter":
            records = _run_pool(
                lambda a: verify.verify_perimeter_theorem(poly, norm, a,
                                                          refinements, tol),
                alphas, cfg["solver"]["workers"])
        elif which == "parallel":
            records = _run_pool(
                lambda a: verify.parallel_bound(poly, norm, a, refinements,
                                                cfg["solver"]["n_nodes"], tol),
                alphas, cfg["solver"]["workers"])
        elif which == "area":
            records, alpha_star_hat = verify.verify_area_theorem(
                poly, norm, alphas, refinements, tol)
            extra["alpha_star_hat"] = alpha_star_hat
        elif which == "chain":
            records = _run_pool(
                lambda a: verify.chain_check(poly, norm, a,
                                             cfg["hole_perimeter"],
                                             refinements,
                                             cfg["solver"]["n_nodes"], tol),
                alphas, cfg["solver"]["workers"])
        else:
            _fail_config(f"unknown verify target {which!r}")
    summary = {"checks": [r.to_json_dict() for r in records],
               "all_pass": all(r.verdict == "pass" for r in records)}
    summary.update(extra)
    print(json.dumps(summary, sort_keys=True, indent=2))
    path = _output_path(cfg, outdir, "records")
    if path:
        verify.write_records_jsonl(records, path)
    path = _output_path(cfg, outdir, "csv")
    if path:
        verify.write_summary_csv(records, path)
    return 0 if summary["all_pass"] else 1


def cmd_curves(cfg, outdir, verbose) -> int:
    if not isinstance(cfg["alpha"], dict):
        _fail_config("field 'alpha': curves requires an alpha sweep")
    alphas = [a for a in _alphas(cfg) if a < 0.0]
    if not alphas:
        _fail_config("field 'alpha.sweep': curves needs strictly negative alphas")
    r3 = (cfg.get("domain") or {}).get("wulff", {}).get("radius", 1.0)
    table = radial.gamma_curves(r3, cfg["epsilon"], alphas)
    csv_path = _output_path(cfg, outdir, "csv") or "curves.csv"
    table.write_csv(csv_path)
    svg_path = _output_path(cfg, outdir, "svg")
    if svg_path:
        _write_curve_svg(svg_path, table)
    print(json.dumps({"csv": csv_path, "svg": svg_path, "rows": len(alphas),
                      "r3": r3, "epsilon": cfg["epsilon"]},
                     sort_keys=True, indent=2))
    return 0


def cmd_geom(cfg, outdir, verbose) -> int:
    norm = FinslerNorm.from_json(cfg["norm"])
    poly = _require_polygon(cfg)
    r1, r2, r3 = geometry.parallel_radii(poly, norm)
    info = {"area": geometry.area(poly),
            "anis_perimeter": geometry.anis_perimeter(poly, norm),
            "inradius": geometry.inradius(poly, norm),
            "isoperimetric_deficit": geometry.isoperimetric_deficit(poly, norm),
            "r1": r1, "r2": r2, "r3": r3,
            "kappa": norm.wulff_area()}
    print(json.dumps(info, sort_keys=True, indent=2))
    path = _output_path(cfg, outdir, "profile_csv")
    if path:
        prof = geometry.profile(poly, norm, max(cfg["solver"]["n_profile"], 64))
        prof.write_csv(path)
    _write_output(cfg, outdir, "summary",
                  json.dumps(info, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_norm_check(cfg, outdir, verbose) -> int:
    norm = FinslerNorm.from_json(cfg["norm"])
    report = run_norm_identity_suite(norm, cfg["n_samples"], cfg["seed"])
    print(json.dumps(report, sort_keys=True, indent=2))
    _write_output(cfg, outdir, "summary",
                  json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0 if report["all_pass"] else 1


def run_norm_identity_suite(norm: FinslerNorm, n_samples: int, seed: int) -> dict:
    """Randomized identity suite: Euler, duality, inversion, Cauchy-Schwarz,
    bipolar, homogeneity, finite-difference gradient consistency."""
    rng = np.random.default_rng(seed)
    xi = rng.normal(size=(n_samples, 2))
    xi = xi[np.hypot(xi[:, 0], xi[:, 1]) > 1e-6]
    eta = rng.normal(size=(len(xi), 2))
    t = rng.uniform(-1e3, 1e3, size=len(xi))
    f = norm.eval(xi)
    g = norm.grad(xi)
    fo = norm.polar_eval(xi)
    go = norm.polar_grad(xi)
    checks = {}
    checks["euler"] = float(np.max(np.abs(np.einsum("ni,ni->n", g, xi) - f)
                                   / np.maximum(f, 1e-300)))
    checks["euler_polar"] = float(np.max(np.abs(np.einsum("ni,ni->n", go, xi) - fo)
                                         / np.maximum(fo, 1e-300)))
    checks["duality_f_of_polar_grad"] = float(np.max(np.abs(norm.eval(go) - 1.0)))
    checks["duality_polar_of_grad"] = float(np.max(np.abs(norm.polar_eval(g) - 1.0)))
    inv = fo[:, None] * norm.grad(go) - xi
    checks["inversion"] = float(np.max(np.hypot(inv[:, 0], inv[:, 1])
                                       / np.hypot(xi[:, 0], xi[:, 1])))
    cs = np.abs(np.einsum("ni,ni->n", xi, eta)) - f * norm.polar_eval(eta) * (1 + 1e-12)
    checks["cauchy_schwarz"] = float(np.max(cs))
    checks["homogeneity"] = float(np.max(
        np.abs(norm.eval(t[:, None] * xi) - np.abs(t) * f)
        / (1.0 + np.abs(norm.eval(t[:, None] * xi)))))
    sample = xi[:: max(1, len(xi) // 50)]
    bipolar_dev = max(abs(norm.polar().polar_eval_numeric(v) - norm.eval(v))
                      for v in sample)
    checks["bipolar"] = float(bipolar_dev)
    h = 1e-6
    fd_worst = 0.0
    for v in sample:
        for j in range(2):
            dv = np.zeros(2)
            dv[j] = h
            fd = (norm.eval(v + dv) - norm.eval(v - dv)) / (2 * h)
            fd_worst = max(fd_worst, abs(fd - norm.grad(v)[j]))
    checks["grad_fd"] = float(fd_worst)
    tols = {"euler": 1e-8, "euler_polar": 1e-8, "duality_f_of_polar_grad": 1e-8,
            "duality_polar_of_grad": 1e-8, "inversion": 1e-7,
            "cauchy_schwarz": 1e-12, "homogeneity": 1e-12, "bipolar": 1e-8,
            "grad_fd": 1e-5}
    result = {name: {"deviation": val, "tolerance": tols[name],
                     "pass": bool(val <= tols[name])}
              for name, val in checks.items()}
    return {"norm": norm.to_json(), "seed": seed, "n_samples": n_samples,
            "identities": result,
            "all_pass": all(r["pass"] for r in result.values())}


def _write_curve_svg(path, table):
    """Two-polyline SVG plot (fixed 800x600 viewBox, deterministic text)."""
    width, height = 800, 600
    mleft, mright, mtop, mbot = 80, 20, 20, 60
    xs = list(table.alpha)
    ys_a = list(table.gamma_a)
    ys_b = list(table.gamma_b)
    xmin, xmax = min(xs), max(xs)
    ymin = min(min(ys_a), min(ys_b))
    ymax = max(max(ys_a), max(ys_b))
    xspan = xmax - xmin or 1.0
    yspan = ymax - ymin or 1.0

    def sx(x):
        return mleft + (x - xmin) / xspan * (width - mleft - mright)

    def sy(y):
        return height - mbot - (y - ymin) / yspan * (height - mtop - mbot)

    def poly(ys):
        return " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{mleft}" y1="{height - mbot}" x2="{width - mright}" '
        f'y2="{height - mbot}" stroke="black"/>',
        f'<line x1="{mleft}" y1="{mtop}" x2="{mleft}" y2="{height - mbot}" '
        f'stroke="black"/>',
    ]
    for i in range(5):
        xv = xmin + xspan * i / 4
        yv = ymin + yspan * i / 4
        lines.append(f'<text x="{sx(xv):.2f}" y="{height - mbot + 20}" '
                     f'font-size="12" text-anchor="middle">{xv:.3g}</text>')
        lines.append(f'<text x="{mleft - 8}" y="{sy(yv):.2f}" font-size="12" '
                     f'text-anchor="end">{yv:.3g}</text>')
    lines.append(f'<polyline points="{poly(ys_a)}" fill="none" stroke="tomato" '
                 f'stroke-width="2"/>')
    lines.append(f'<polyline points="{poly(ys_b)}" fill="none" stroke="steelblue" '
                 f'stroke-width="2"/>')
    lines.append(f'<text x="{width - 200}" y="{mtop + 20}" font-size="14" '
                 f'fill="tomato">annulus (Neumann-Robin)</text>')
    lines.append(f'<text x="{width - 200}" y="{mtop + 40}" font-size="14" '
                 f'fill="steelblue">Wulff shape</text>')
    lines.append(f'<text x="{(mleft + width - mright) // 2}" y="{height - 15}" '
                 f'font-size="14" text-anchor="middle">alpha</text>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="anisorobin",
        description="Anisotropic Robin eigenvalues and Wulff-shape "
                    "spectral inequality checks")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("eig", "curves", "geom", "norm-check"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("-o", "--output-dir", default="")
        p.add_argument("-v", "--verbose", action="store_true")
    p = sub.add_parser("verify")
    p.add_argument("--config", required=True)
    p.add_argument("--which", required=True,
                   choices=["perimeter", "area", "parallel", "asymptotics",
                            "chain"])
    p.add_argument("-o", "--output-dir", default="")
    p.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "eig":
            return cmd_eig(cfg, args.output_dir, args.verbose)
        if args.command == "verify":
            return cmd_verify(cfg, args.which, args.output_dir, args.verbose)
        if args.command == "curves":
            return cmd_curves(cfg, args.output_dir, args.verbose)
        if args.command == "geom":
            return cmd_geom(cfg, args.output_dir, args.verbose)
        if args.command == "norm-check":
            return cmd_norm_check(cfg, args.output_dir, args.verbose)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NoRootError, SolverError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
