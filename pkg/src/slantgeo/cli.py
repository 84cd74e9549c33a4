"""Command-line front end.

Subcommands: analyze, detect, loop, catalog, selfcheck.  Reports are
JSON on stdout (or --out FILE) with fixed 17-significant-digit float
formatting so identical invocations produce identical bytes.  Per-point
tables go behind --csv; --figures DIR renders matplotlib figures next to
the delimited output.

Exit codes: 0 success, 2 configuration error, 3 numeric failure (an
invariant violated beyond its tolerance; violations are surfaced, never
clamped).
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import numpy as np

from . import catalog, cxstruct, forms, gaussmap, jets
from .dsl import DslError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

TOL = {
    "wirtinger_spread": 1e-6,
    "g_eq_gd": 1e-7,
    "block_square": 1e-10,
    "frame_orthonormal": 1e-10,
    "theta_cross": 1e-6,
    "dtheta": 1e-5,
    "nabla_p": 1e-6,
    "lemma42": 1e-4,
    "loop_integer": 1e-4,
    "loop_contractible": 1e-6,
    "af_symmetry": 1e-8,
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Deterministic JSON with 17-significant-digit floats
# ---------------------------------------------------------------------------

def _fmt_float(x):
    if x != x:
        return '"nan"'
    if x in (float("inf"), float("-inf")):
        return f'"{x}"'
    return format(float(x), ".17g")


def dumps(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  "{k}": {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(isinstance(x, (int, float, bool)) or x is None for x in seq)
        if flat:
            return "[" + ", ".join(dumps(x) for x in seq) + "]"
        items = [f"{pad}  {dumps(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent)
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _emit(report, out_path):
    text = dumps(report) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Shared option handling
# ---------------------------------------------------------------------------

def _parse_params(values):
    params = {}
    for chunk in values or []:
        for piece in chunk.split(","):
            piece = piece.strip()
            if not piece:
                continue
            if "=" not in piece:
                raise ConfigError(f"bad --param {piece!r}; expected name=value")
            name, _, raw = piece.partition("=")
            try:
                params[name.strip()] = float(raw)
            except ValueError:
                raise ConfigError(f"bad numeric value in --param {piece!r}") from None
    return params


def _parse_grid(text):
    try:
        nu, _, nv = text.lower().partition("x")
        nu, nv = int(nu), int(nv)
    except ValueError:
        raise ConfigError(f"bad --grid {text!r}; expected like 64x64") from None
    if nu < 2 or nv < 2:
        raise ConfigError("grid must be at least 2x2")
    return nu, nv


def _load_immersion(args):
    params = _parse_params(getattr(args, "param", None))
    if getattr(args, "catalog", None):
        try:
            return catalog.build(args.catalog, params or None)
        except catalog.CatalogError as exc:
            raise ConfigError(str(exc)) from None
    if getattr(args, "config", None):
        try:
            imm = catalog.load_config(args.config)
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot load config {args.config!r}: {exc}") from None
        if params:
            raise ConfigError("--param applies to catalog entries; set params in the config file")
        return imm
    raise ConfigError("one of --catalog or --config is required")


def _structure(args):
    try:
        return cxstruct.by_name(args.J)
    except cxstruct.StructureError as exc:
        raise ConfigError(str(exc)) from None


def _structure_block(J):
    return {
        "id": J.name,
        "class": J.orientation_class,
        "matrix": J.matrix.tolist(),
        "zeta": J.zeta.tolist(),
    }


def _immersion_block(imm):
    return {
        "id": imm.name,
        "params": dict(sorted(imm.params.items())),
        "domain": [list(imm.domain[0]), list(imm.domain[1])],
        "convention": imm.convention,
    }


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _point_table(imm, grid, J):
    us, vs = grid
    rows = []
    for u in us:
        for v in vs:
            pg = jets.point_geometry(imm, u, v, J)
            rows.append({
                "u": float(u), "v": float(v),
                "theta_mean": pg.theta_mean, "theta_spread": pg.theta_spread,
                "G": pg.G, "GD": pg.GD, "H_norm": pg.H_norm,
                "block_square_residual": float(np.max(np.abs(
                    pg.block_matrix() @ pg.block_matrix() + np.eye(4)))),
            })
    return rows


def cmd_analyze(args):
    imm = _load_immersion(args)
    J = _structure(args)
    nu, nv = _parse_grid(args.grid)
    grid = jets.grid_points(imm.domain, nu, nv)

    table = _point_table(imm, grid, J)
    wirt = jets.wirtinger_field(imm, grid, J)
    ops = jets.slant_operator_checks(imm, grid, J)

    g_arr = np.array([r["G"] for r in table])
    gd_arr = np.array([r["GD"] for r in table])
    h_arr = np.array([r["H_norm"] for r in table])
    block_res = max(r["block_square_residual"] for r in table)
    g_gd = float(np.max(np.abs(g_arr - gd_arr) / (1.0 + np.abs(g_arr))))

    report = {
        "schema": "slantgeo.analyze.v1",
        "immersion": _immersion_block(imm),
        "structure": _structure_block(J),
        "grid": {"nu": nu, "nv": nv},
        "wirtinger": {
            "mean": wirt.theta_mean, "min": wirt.theta_min, "max": wirt.theta_max,
            "spread": wirt.spread, "slant": wirt.is_slant,
            "purely_real": wirt.is_purely_real,
            "spread_tolerance": TOL["wirtinger_spread"],
        },
        "curvature": {
            "G_min": float(g_arr.min()), "G_max": float(g_arr.max()),
            "GD_min": float(gd_arr.min()), "GD_max": float(gd_arr.max()),
            "H_norm_min": float(h_arr.min()), "H_norm_max": float(h_arr.max()),
        },
        "operator_checks": {
            "af_symmetry_residual": ops.af_symmetry_residual,
            "af_symmetry_tolerance": TOL["af_symmetry"],
            "austere_max_trace": ops.austere_max_trace,
            "austere": ops.austere,
            "parallel_f_residual": ops.parallel_f_residual,
            "q_residual": ops.q_residual,
        },
    }

    failures = []
    if block_res > TOL["block_square"]:
        failures.append("block_square")
    report["identities"] = {
        "block_square_residual": block_res,
        "block_square_tolerance": TOL["block_square"],
    }
    if wirt.is_slant:
        report["identities"]["max_rel_G_minus_GD"] = g_gd
        report["identities"]["G_eq_GD_tolerance"] = TOL["g_eq_gd"]
        if g_gd > TOL["g_eq_gd"]:
            failures.append("G_eq_GD")

    proper = wirt.is_slant and (jets.DEGENERATE_THETA_TOL < wirt.theta_mean
                                < math.pi / 2 - jets.DEGENERATE_THETA_TOL)
    if proper:
        theta = forms.theta_form(imm, J, grid)
        dtheta = forms.exterior_derivative(theta.form)
        lam = forms.lambda_form(imm, J, jets.grid_points(imm.domain, min(nu, 9), min(nv, 9)))
        report["forms"] = {
            "theta_cross_residual": theta.cross_residual,
            "theta_cross_tolerance": TOL["theta_cross"],
            "dtheta_max": dtheta.max_abs(),
            "dtheta_tolerance": TOL["dtheta"],
            "lambda_frame_value_mean": float(np.mean(lam.frame_value)),
            "lambda_nondegenerate": lam.nondegenerate,
            "nabla_p_residual": lam.nabla_p_residual,
            "nabla_p_tolerance": TOL["nabla_p"],
        }
        if theta.cross_residual > TOL["theta_cross"]:
            failures.append("theta_cross")
        if dtheta.max_abs() > TOL["dtheta"]:
            failures.append("dtheta")
        if lam.nabla_p_residual > TOL["nabla_p"]:
            failures.append("nabla_p")
    else:
        report["forms"] = {"skipped": "surface is not proper slant under this structure"}

    jac = gaussmap.gauss_jacobians(imm, grid, J)
    lem42 = max(max(s.residual_plus, s.residual_minus) for s in jac)
    report["identities"]["lemma42_max_residual"] = lem42
    report["identities"]["lemma42_tolerance"] = TOL["lemma42"]

    report["status"] = "ok" if not failures else "numeric-failure"
    report["violations"] = failures
    _emit(report, args.out)

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(table[0].keys()))
            writer.writeheader()
            writer.writerows(table)
    if args.figures:
        from . import plots
        os.makedirs(args.figures, exist_ok=True)
        plots.plot_point_table(table, args.figures, f"analyze_{imm.name.replace('.', '_')}")
    return EXIT_NUMERIC if failures else EXIT_OK


# ---------------------------------------------------------------------------
# detect
# ---------------------------------------------------------------------------

def cmd_detect(args):
    imm = _load_immersion(args)
    nu, nv = _parse_grid(args.grid)
    grid = jets.grid_points(imm.domain, nu, nv)
    detection = gaussmap.detect_slant_structures(imm, grid)

    verify_grid = jets.grid_points(imm.domain, 8, 8)

    def class_block(det):
        block = {
            "classification": det.classification,
            "all_structures_slant": det.all_structures_slant,
            "fit": {
                "axis": det.fit.axis.tolist(),
                "offset": det.fit.offset,
                "residual": det.fit.residual,
                "spread": det.fit.spread,
                "arc_extent": det.fit.arc_extent,
                "singleton_spread_threshold": gaussmap.SINGLETON_SPREAD,
                "circle_residual_threshold":
                    gaussmap.CIRCLE_RESIDUAL_COEFF * math.sqrt(nu * nv),
            },
            "structures": [],
        }
        for rs in det.structures:
            wstats = jets.wirtinger_field(imm, verify_grid, rs.J)
            block["structures"].append({
                "matrix": rs.J.matrix.tolist(),
                "zeta": rs.J.zeta.tolist(),
                "class": rs.J.orientation_class,
                "alpha": rs.alpha,
                "wirtinger_angle": min(rs.alpha, math.pi - rs.alpha),
                "residual": rs.residual,
                "verification": {
                    "wirtinger_mean": wstats.theta_mean,
                    "spread": wstats.spread,
                    "spread_tolerance": TOL["wirtinger_spread"],
                },
            })
        return block

    report = {
        "schema": "slantgeo.detect.v1",
        "immersion": _immersion_block(imm),
        "grid": {"nu": nu, "nv": nv},
        "plus": class_block(detection.plus),
        "minus": class_block(detection.minus),
        "doubly_slant": detection.doubly_slant,
        "n_structures": len(detection.all_structures()),
    }
    _emit(report, args.out)

    if args.figures:
        from . import plots
        os.makedirs(args.figures, exist_ok=True)
        samples = gaussmap.gauss_field(imm, grid)
        plots.plot_gauss_projections(samples, detection, args.figures,
                                     f"detect_{imm.name.replace('.', '_')}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# loop
# ---------------------------------------------------------------------------

def cmd_loop(args):
    imm = _load_immersion(args)
    J = _structure(args)
    if args.loop.startswith("expr:"):
        try:
            u_expr, v_expr = args.loop[len("expr:"):].split(";")
            loop = forms.make_expression_loop(u_expr, v_expr)
        except (ValueError, DslError) as exc:
            raise ConfigError(f"bad loop expression: {exc}") from None
        loop_id = args.loop
    elif args.loop.startswith("circle:"):
        try:
            cu, cv, rad = (float(x) for x in args.loop[len("circle:"):].split(","))
        except ValueError:
            raise ConfigError("bad circle loop; expected circle:u0,v0,r") from None
        loop = forms.make_circle_loop((cu, cv), rad)
        loop_id = args.loop
    else:
        try:
            loop = forms.make_period_loop(imm, args.loop)
        except forms.LoopError as exc:
            raise ConfigError(str(exc)) from None
        loop_id = args.loop

    try:
        result = forms.loop_integral_psi(imm, J, loop, n_steps=args.steps)
    except (forms.LoopError, jets.GeometryError) as exc:
        raise ConfigError(str(exc)) from None

    report = {
        "schema": "slantgeo.loop.v1",
        "immersion": _immersion_block(imm),
        "structure": _structure_block(J),
        "loop": loop_id,
        "n_steps": result.n_steps,
        "alpha": result.alpha,
        "theta_integral": result.theta_integral,
        "psi": result.psi,
        "psi_paper_scale": result.psi_paper_scale,
        "nearest_integer": result.nearest_integer,
        "distance_to_integer": result.distance_to_integer,
        "integer_tolerance": TOL["loop_integer"],
    }
    _emit(report, args.out)
    if args.figures:
        from . import plots
        os.makedirs(args.figures, exist_ok=True)
        plots.plot_loop_integrand(result.ts, result.values, result.psi,
                                  args.figures, f"loop_{imm.name.replace('.', '_')}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# catalog / selfcheck
# ---------------------------------------------------------------------------

def cmd_catalog(args):
    entries = []
    for name in catalog.catalog_ids():
        e = catalog.entry(name)
        entries.append({
            "id": e.name,
            "description": e.description,
            "defaults": dict(sorted(e.defaults.items())),
            "domain": [list(e.default_domain[0]), list(e.default_domain[1])],
            "convention": e.convention,
            "period_loops": sorted(e.period_loops),
        })
    report = {
        "schema": "slantgeo.catalog.v1",
        "surfaces": entries,
        "point_fixtures": [
            {"id": "ex2.7", "description":
                "Kaehlerian slant 4-plane basis in C^4 (pairing checks only)"},
            {"id": "ex2.8-c4", "description":
                "complex-surface tangent 4-plane in C^4 (pairing checks only)"},
        ],
    }
    _emit(report, args.out)
    return EXIT_OK


def cmd_selfcheck(args):
    checks = []

    def record(name, value, tol):
        ok = value <= tol
        checks.append((name, value, tol, ok))
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {value:.3e} (tol {tol:.1e})")

    S = cxstruct.standard_structures()
    rng = np.random.default_rng(7)

    from . import exterior
    worst = 0.0
    for _ in range(200):
        x, y = rng.normal(size=4), rng.normal(size=4)
        w = exterior.wedge2(x, y)
        gram = np.array([[x @ x, x @ y], [x @ y, y @ y]])
        worst = max(worst, abs(w @ w - np.linalg.det(gram)))
    record("exterior.gram_determinant", worst, 1e-10 * 16.0)

    worst = 0.0
    for name in ("J0", "J1", "J1m", "J2"):
        J = S[name]
        J2 = cxstruct.structure_from_zeta(J.zeta)
        worst = max(worst, float(np.max(np.abs(J2.matrix - J.matrix))))
    record("cxstruct.zeta_round_trip", worst, 1e-10)

    imm = catalog.build("ex2.4", {"k": 1.0})
    grid = jets.grid_points(imm.domain, 12, 12)
    w = jets.wirtinger_field(imm, grid, S["J0"])
    record("ex2.4.slant_spread", w.spread, 1e-9)
    record("ex2.4.angle_error", abs(w.theta_mean - math.acos(1 / math.sqrt(2))), 1e-9)

    tf = forms.theta_form(imm, S["J0"], jets.grid_points(imm.domain, 9, 9))
    record("ex2.4.theta_cross", tf.cross_residual, TOL["theta_cross"])

    det = gaussmap.detect_slant_structures(
        catalog.build("ex3.2", {"k": 1.0}), jets.grid_points(imm.domain, 12, 12))
    record("ex3.2.n_structures_error", abs(len(det.all_structures()) - 4), 0.0)

    ok = all(c[-1] for c in checks)
    print(f"selfcheck: {'all passed' if ok else 'FAILURES present'} "
          f"({sum(1 for c in checks if c[-1])}/{len(checks)})")
    return EXIT_OK if ok else EXIT_NUMERIC


# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="slantgeo",
        description="Slant-surface analysis in E^4: Wirtinger angles, Gauss-map "
                    "structure detection, curvature identities, loop holonomy.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_source(p):
        p.add_argument("--catalog", help="catalog entry id (see `slantgeo catalog`)")
        p.add_argument("--config", help="JSON immersion config file (DSL components)")
        p.add_argument("--param", action="append",
                       help="parameter overrides name=value[,name=value...]")
        p.add_argument("--out", help="write the JSON report to this file")
        p.add_argument("--figures", help="directory for rendered figures")

    p = sub.add_parser("analyze", help="curvature/Wirtinger/forms report")
    add_source(p)
    p.add_argument("--J", default="J0", help="complex structure id (default J0)")
    p.add_argument("--grid", default="64x64")
    p.add_argument("--csv", help="write the per-point table as CSV")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("detect", help="recover slant-making complex structures")
    add_source(p)
    p.add_argument("--grid", default="64x64")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("loop", help="loop integral of the normalized 1-form Psi")
    add_source(p)
    p.add_argument("--J", default="J0")
    p.add_argument("--loop", required=True,
                   help="period loop name, circle:u0,v0,r, or expr:<u(t)>;<v(t)>")
    p.add_argument("--steps", type=int, default=4096)
    p.set_defaults(func=cmd_loop)

    p = sub.add_parser("catalog", help="list catalog entries")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("selfcheck", help="run the compact invariant battery")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (jets.GeometryError, jets.DomainError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
