"""Command-line entry point.

Subcommands
-----------
constants             tables of the closed-form constants
bounds                lower/upper bracket tables for the sharp constants
estimate              one box-constrained sharp-constant estimate
sweep                 estimates across dimensions, with brackets and slope fit
verify-torus          randomized verification of the torus inequalities
verify-correspondence randomized verification of the lattice-torus identities

Exit codes: 0 on success (including "all inequalities hold"); 2 when any
verification reports holds = false or an estimate escapes its proven
bracket (either would falsify a proven bound, so it must be loud); 1 on usage,
domain, resource, or convergence errors.

Randomized subcommands echo their seed in the output; item i of a batch
uses seed + i, so runs are reproducible and independent of --threads.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import (constants, correspondence, estimator, lattice_ops, report,
               torus_spectral)
from .errors import ConvergenceError, DomainError, ResourceError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FALSIFIED = 2


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit with code 1 (2 means falsified)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _parse_dims(text: str) -> list[int]:
    """'3..10' (inclusive range), '3,5,8' (list), or '6' (single)."""
    text = text.strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ValueError(f"empty dimension range {text!r}")
        return list(range(lo, hi + 1))
    dims = [int(t) for t in text.split(",") if t.strip()]
    if not dims:
        raise ValueError("no dimensions given")
    return dims


def _parse_alpha(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(
            f"alpha must be a number like -1, -0.5 or -3/2, got {text!r}"
        ) from exc


def _default_threads() -> int:
    return os.cpu_count() or 1


def _figure_path(explicit, output: str | None, stem: str) -> str:
    """--plot with no value derives <output stem>.png next to --output."""
    if isinstance(explicit, str):
        return explicit
    if output is None:
        raise ValueError(
            "--plot without a path needs --output to derive the file name")
    base, _ = os.path.splitext(output)
    return (base or stem) + ".png"


def _flatten(mapping: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in mapping.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, f"{name}_"))
        else:
            out[name] = value
    return out


# -- constants ----------------------------------------------------------------

_CONSTANT_TABLES = ("hardy", "hr", "rellich", "higher", "beta")


def _constant_rows(table: str, dims: list[int], k: int, m: int,
                   alpha: Fraction) -> list[dict]:
    rows = []
    for d in dims:
        if table == "hardy":
            rows.append({"name": "weighted_hardy", "k": k, "d": d,
                         "value": constants.weighted_hardy_constant(k, d)})
        elif table == "hr":
            rows.append({"name": "weighted_hardy_rellich", "k": k, "d": d,
                         "value":
                         constants.weighted_hardy_rellich_constant(k, d)})
        elif table == "rellich":
            rows.append({"name": "weighted_rellich", "k": k, "d": d,
                         "value": constants.weighted_rellich_constant(k, d)})
        elif table == "higher":
            c, ctilde = constants.higher_order_constants(m, k, d)
            rows.append({"name": "higher_order_laplacian", "k": k, "d": d,
                         "value": c})
            rows.append({"name": "higher_order_gradient", "k": k, "d": d,
                         "value": ctilde})
        elif table == "beta":
            beta, gamma = constants.rellich_beta(alpha, d)
            rows.append({"name": "rellich_beta", "k": float(alpha), "d": d,
                         "value": beta})
            rows.append({"name": "rellich_gamma", "k": float(alpha), "d": d,
                         "value": gamma})
    return rows


def cmd_constants(args) -> int:
    dims = _parse_dims(args.dims)
    rows = _constant_rows(args.table, dims, args.k, args.m, args.alpha)
    if args.format == "csv":
        text = report.csv_text(["name", "k", "d", "value"], rows)
    else:
        text = report.json_text({"table": args.table, "rows": rows})
    report.write_text(text, args.output)
    if args.plot is not None:
        curves: dict[str, list[float]] = {}
        for row in rows:
            curves.setdefault(row["name"], []).append(row["value"])
        path = report.render_table_figure(
            dims, curves, _figure_path(args.plot, args.output, "constants"))
        print(f"figure written to {path}", file=sys.stderr)
    return EXIT_OK


# -- bounds --------------------------------------------------------------------


def cmd_bounds(args) -> int:
    dims = _parse_dims(args.dims)
    rows = []
    for d in dims:
        bracket = constants.discrete_bound_bracket(args.k, d, args.kind)
        rows.append({"name": f"discrete_{args.kind}", "k": args.k, "d": d,
                     "lower": bracket.lower, "upper": bracket.upper})
    if args.format == "csv":
        text = report.csv_text(["name", "k", "d", "lower", "upper"], rows)
    else:
        text = report.json_text(
            {"kind": args.kind, "k": args.k, "rows": rows})
    report.write_text(text, args.output)
    if args.plot is not None:
        curves = {"lower": [r["lower"] for r in rows],
                  "upper": [r["upper"] for r in rows]}
        path = report.render_table_figure(
            dims, curves, _figure_path(args.plot, args.output, "bounds"))
        print(f"figure written to {path}", file=sys.stderr)
    return EXIT_OK


# -- estimate -------------------------------------------------------------------


def cmd_estimate(args) -> int:
    result = estimator.estimate_sharp_constant(
        args.order, args.dim, args.radius, args.kind, tol=args.tol)
    payload = result.as_dict()
    try:
        bracket = constants.discrete_bound_bracket(
            args.order, args.dim, args.kind)
        payload["bracket_lower"] = bracket.lower
        payload["bracket_upper"] = bracket.upper
    except DomainError:
        pass  # no proven bracket in this (k, d) range
    if args.minimizer_out:
        lattice_ops.save(result.minimizer, args.minimizer_out)
        payload["minimizer_path"] = args.minimizer_out
    if args.format == "csv":
        text = report.csv_text(list(payload.keys()), [payload])
    else:
        text = report.json_text(payload)
    report.write_text(text, args.output)
    return EXIT_OK


# -- sweep ----------------------------------------------------------------------


def cmd_sweep(args) -> int:
    dims = _parse_dims(args.dims)
    try:
        table = estimator.sweep(args.order, args.kind, dims, args.radius,
                                tol=args.tol)
    except ArithmeticError as exc:
        print(f"falsified: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    rows = []
    for entry in table:
        info = entry.estimate.as_dict()
        rows.append({
            "d": entry.d, "k": args.order, "kind": args.kind,
            "radius": args.radius, "basis_size": info["basis_size"],
            "value": info["value"],
            "bracket_lower": entry.bracket.lower,
            "bracket_upper": entry.bracket.upper,
            "iterations": info["iterations"],
            "residual": info["residual"],
            "quotient_check": info["quotient_check"],
        })
    fit = None
    if args.fit and len(rows) >= 3:
        fit = estimator.fit_log_slope([(r["d"], r["value"]) for r in rows])
    if args.format == "csv":
        text = report.csv_text(list(rows[0].keys()) if rows else
                               ["d", "value"], rows)
        report.write_text(text, args.output)
        if fit is not None:
            print(f"fit: slope={report.format_float(fit[0])} "
                  f"intercept={report.format_float(fit[1])} "
                  f"r_squared={report.format_float(fit[2])}",
                  file=sys.stderr)
    else:
        payload = {"k": args.order, "kind": args.kind, "radius": args.radius,
                   "rows": rows,
                   "fit": None if fit is None else
                   {"slope": fit[0], "intercept": fit[1],
                    "r_squared": fit[2]}}
        report.write_text(report.json_text(payload), args.output)
    if rows and args.plot_data:
        # the sidecar's format follows its own extension, not --format
        ext = os.path.splitext(args.plot_data)[1].lower()
        plot_fmt = "csv" if ext == ".csv" else "json"
        report.emit_plot_data(rows, fit, plot_fmt, args.plot_data)
    if rows and args.plot is not None:
        payload = report.plot_data_payload(rows, fit)
        path = report.render_series_figure(
            payload, _figure_path(args.plot, args.output, "sweep"),
            ylabel="estimate")
        print(f"figure written to {path}", file=sys.stderr)
    return EXIT_OK


# -- verify-torus -----------------------------------------------------------------

_THEOREMS = ("hardy", "hr", "rellich", "two-param", "higher")


def _torus_domain_check(args) -> None:
    """Fail fast on domain violations before generating any batch item."""
    d = args.dim
    if args.theorem == "hardy":
        constants.weighted_hardy_constant(args.k, d)
    elif args.theorem == "hr":
        constants.weighted_hardy_rellich_constant(args.k, d)
    elif args.theorem == "rellich":
        constants.weighted_rellich_constant(args.k, d)
    elif args.theorem == "two-param":
        a = args.alpha
        if a > 0:
            raise DomainError("requires alpha <= 0")
        if Fraction(a).limit_denominator(2) != Fraction(a):
            raise DomainError("requires 2*alpha to be an integer")
        if not d > -4 * a + 4:
            raise DomainError(
                f"requires d > -4*alpha+4 = {float(-4 * a + 4)}, got d = {d}")
    elif args.theorem == "higher":
        # gate only the requested family: the laplacian form is valid on
        # d > -2k+4m, two dimensions below the gradient form's threshold
        if args.m < 0:
            raise DomainError(
                f"m must be a non-negative integer, got {args.m}")
        if args.which == "laplacian":
            if not d > -2 * args.k + 4 * args.m:
                raise DomainError(
                    f"requires d > -2k+4m = {-2 * args.k + 4 * args.m}, "
                    f"got d = {d}")
            constants._higher_c(args.m, args.k, d)
        else:
            if not d > -2 * args.k + 4 * args.m + 2:
                raise DomainError(
                    f"requires d > -2k+4m+2 = {-2 * args.k + 4 * args.m + 2}, "
                    f"got d = {d}")
            constants._higher_ctilde(args.m, args.k, d)


def _draw_two_param(seed: int, alpha: Fraction) -> tuple[float, float]:
    """Random (beta, gamma) from the admissible set
    beta >= max(0, 2 alpha - 1) or beta <= min(0, 2 alpha - 1)."""
    rng = np.random.default_rng((seed, 97))
    low_branch = float(min(0, 2 * alpha - 1))
    if rng.integers(0, 2) == 0:
        beta = float(max(0, 2 * alpha - 1)) + rng.uniform(0.0, 3.0)
    else:
        beta = low_branch - rng.uniform(0.0, 3.0)
    gamma = rng.uniform(-3.0, 3.0)
    return float(beta), float(gamma)


_GRID_FORMS = {
    # theorem -> ((lhs deriv, lhs p-offset asks), (rhs deriv, rhs p))
    "hardy": (("none", -1, 1), ("gradient", 0, 1)),
    "hr": (("gradient", -1, 1), ("laplacian", 0, 1)),
    "rellich": (("none", -2, 1), ("laplacian", 0, 1)),
}


def _grid_cross_check(rep, psi, args) -> dict:
    """Midpoint-grid recomputation of both sides (diagnostic only)."""
    spec = torus_spectral.QuadratureSpec(args.grid)
    if args.theorem in _GRID_FORMS:
        (l_deriv, l_off, l_m), (r_deriv, r_off, r_m) = _GRID_FORMS[args.theorem]
        k = args.k
        lhs_p, rhs_p = k + l_off, k + r_off
    elif args.theorem == "higher":
        k, m = args.k, args.m
        if args.which == "laplacian":
            l_deriv, lhs_p, l_m = "none", k - 2 * m, 1
            r_deriv, rhs_p, r_m = "laplacian", k, m
        else:
            l_deriv, lhs_p, l_m = "none", k - 2 * m - 1, 1
            r_deriv, rhs_p, r_m = "gradient_laplacian", k, m
    else:
        return {}
    lhs_val, lhs_diag = torus_spectral.quadrature_form(
        psi, l_deriv, lhs_p, spec, m=l_m)
    rhs_val, rhs_diag = torus_spectral.quadrature_form(
        psi, r_deriv, rhs_p, spec, m=r_m)
    engine_lhs = rep.lhs / rep.constant if rep.constant else rep.lhs
    return {
        "grid_nodes": args.grid,
        "grid_lhs": lhs_val, "grid_lhs_diagnostic": lhs_diag,
        "grid_rhs": rhs_val, "grid_rhs_diagnostic": rhs_diag,
        "grid_lhs_rel_diff": abs(lhs_val - engine_lhs) / max(abs(engine_lhs),
                                                             1e-300),
        "grid_rhs_rel_diff": abs(rhs_val - rep.rhs) / max(abs(rep.rhs),
                                                          1e-300),
    }


def cmd_verify_torus(args) -> int:
    _torus_domain_check(args)
    radius = args.radius if args.radius else (2 if args.dim <= 4 else 1)
    needs_zero_average = args.theorem != "two-param"

    def one(i: int):
        seed = args.seed + i
        psi = torus_spectral.random_trig_poly(
            args.dim, radius, seed, zero_average=needs_zero_average)
        if args.theorem == "hardy":
            rep = torus_spectral.verify_weighted_hardy(psi, args.k)
        elif args.theorem == "hr":
            rep = torus_spectral.verify_weighted_hardy_rellich(psi, args.k)
        elif args.theorem == "rellich":
            rep = torus_spectral.verify_weighted_rellich(psi, args.k)
        elif args.theorem == "two-param":
            beta, gamma = _draw_two_param(seed, args.alpha)
            rep = torus_spectral.verify_two_parameter_bound(
                psi, args.alpha, beta, gamma)
        else:
            rep = torus_spectral.verify_higher_order(
                psi, args.m, args.k, args.which)
        entry = {"index": i, "seed": seed, **rep.as_dict()}
        if args.grid and args.theorem != "two-param":
            entry["diagnostics"].update(_grid_cross_check(rep, psi, args))
        return entry

    if args.threads > 1 and args.batch > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(one, range(args.batch)))
    else:
        reports = [one(i) for i in range(args.batch)]

    failures = sum(1 for r in reports if not r["holds"])
    payload = {
        "theorem": args.theorem, "dim": args.dim, "k": args.k,
        "m": args.m, "alpha": float(args.alpha), "which": args.which,
        "radius": radius, "batch": args.batch, "seed": args.seed,
        "threads": args.threads, "failures": failures,
        "all_hold": failures == 0, "reports": reports,
    }
    if args.format == "csv":
        flat = [_flatten(r) for r in reports]
        names: list[str] = []
        for row in flat:
            for key in row:
                if key not in names:
                    names.append(key)
        text = report.csv_text(names, flat)
    else:
        text = report.json_text(payload)
    report.write_text(text, args.output)
    return EXIT_OK if failures == 0 else EXIT_FALSIFIED


# -- verify-correspondence ---------------------------------------------------------


def cmd_verify_correspondence(args) -> int:
    kind = correspondence.CorrespondenceKind(args.kind, args.k)

    def check(i: int, u) -> dict:
        r1 = correspondence.verify_identity_lhs_rhs(u, kind)
        r2 = correspondence.verify_identity_forms(u, kind)
        return {"index": i, "seed": None if args.input else args.seed + i,
                "lhs_rhs": r1.as_dict(), "forms": r2.as_dict(),
                "holds": r1.holds and r2.holds}

    if args.input:
        items = [check(0, lattice_ops.load(args.input))]
    else:
        def one(i: int) -> dict:
            u = correspondence.random_lattice_function(
                args.dim, args.radius, args.seed + i)
            return check(i, u)

        if args.threads > 1 and args.batch > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                items = list(pool.map(one, range(args.batch)))
        else:
            items = [one(i) for i in range(args.batch)]

    failures = sum(1 for item in items if not item["holds"])
    payload = {
        "kind": args.kind, "k": args.k, "dim": args.dim,
        "radius": args.radius, "batch": len(items), "seed": args.seed,
        "input": args.input, "threads": args.threads,
        "failures": failures, "all_hold": failures == 0, "reports": items,
    }
    if args.format == "csv":
        flat = [_flatten(item) for item in items]
        names = list(flat[0].keys()) if flat else ["index"]
        text = report.csv_text(names, flat)
    else:
        text = report.json_text(payload)
    report.write_text(text, args.output)
    return EXIT_OK if failures == 0 else EXIT_FALSIFIED


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lattice-hardy",
        description="Discrete Hardy/Rellich constants, torus verification, "
                    "and sharp-constant estimation on truncated lattices.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common_output(p, default_format: str):
        p.add_argument("--format", choices=("csv", "json"),
                       default=default_format)
        p.add_argument("--output", default=None,
                       help="file path (default: standard output)")

    p = sub.add_parser("constants", parents=[], help="closed-form constants")
    p.add_argument("--table", choices=_CONSTANT_TABLES, required=True)
    p.add_argument("--dims", required=True,
                   help="dimensions: '3..10', '3,5,8', or '6'")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--m", type=int, default=1,
                   help="composition depth for the 'higher' table")
    p.add_argument("--alpha", type=_parse_alpha, default=Fraction(0),
                   help="weight half-power for the 'beta' table")
    add_common_output(p, "csv")
    p.add_argument("--plot", nargs="?", const=True, default=None,
                   metavar="PATH", help="also render a figure")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("bounds", help="sharp-constant bracket tables")
    p.add_argument("--kind", choices=("hardy", "rellich"), required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--dims", required=True)
    add_common_output(p, "csv")
    p.add_argument("--plot", nargs="?", const=True, default=None,
                   metavar="PATH")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("estimate", help="box-constrained sharp constant")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--order", type=int, default=0, help="the order k")
    p.add_argument("--kind", choices=("hardy", "rellich"), default="hardy")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--minimizer-out", default=None,
                   help="write the minimizing lattice function to this file")
    add_common_output(p, "json")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="estimates across dimensions")
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--kind", choices=("hardy", "rellich"), default="hardy")
    p.add_argument("--dims", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--fit", action="store_true",
                   help="fit a log-log slope to the estimates")
    p.add_argument("--plot-data", default=None, metavar="PATH",
                   help="write per-curve (d, value) series to this file")
    add_common_output(p, "csv")
    p.add_argument("--plot", nargs="?", const=True, default=None,
                   metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-torus", help="randomized torus inequalities")
    p.add_argument("--theorem", choices=_THEOREMS, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--m", type=int, default=1,
                   help="composition depth for --theorem higher")
    p.add_argument("--alpha", type=_parse_alpha, default=Fraction(0),
                   help="weight half-power for --theorem two-param")
    p.add_argument("--which", choices=("laplacian", "gradient"),
                   default="laplacian",
                   help="which higher-order family to verify")
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=int, default=None,
                   help="support radius of the random polynomials "
                        "(default 2 for d <= 4, else 1)")
    p.add_argument("--grid", type=int, default=None,
                   help="also cross-check both sides on an N-point midpoint "
                        "grid (diagnostic)")
    p.add_argument("--threads", type=int, default=_default_threads())
    add_common_output(p, "json")
    p.set_defaults(func=cmd_verify_torus)

    p = sub.add_parser("verify-correspondence",
                       help="lattice-torus identity checks")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--kind", choices=("hardy", "rellich"), default="hardy")
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--input", default=None,
                   help="verify this saved lattice function instead of a "
                        "random batch")
    p.add_argument("--threads", type=int, default=_default_threads())
    add_common_output(p, "json")
    p.set_defaults(func=cmd_verify_correspondence)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ResourceError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
