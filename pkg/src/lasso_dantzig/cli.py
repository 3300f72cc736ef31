"""Command line interface: ``path``, ``table1``, ``simulate`` and ``compare``.

Every output starts with ``#``-prefixed manifest lines (command, arguments,
configuration, tool version, timestamp). Everything after the manifest is a
pure function of the arguments.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import sys

import numpy as np

from . import __version__, dantzig, lars, lp, sim
from .data import DataError, diabetes64, load_csv, standardize

EXIT_USAGE, EXIT_DATA, EXIT_SOLVER = 2, 3, 4
TABLE1_S = 1734.79

SOLVER_ERRORS = (
    dantzig.DsSolverError,
    lp.IterationLimit,
    lars.CollinearActiveSet,
    sim.ReplicateError,
)


class UsageError(Exception):
    pass


def manifest_lines(command: str, argv, config: dict) -> list[str]:
    stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    lines = [
        f"# command: {command}",
        f"# argv: {' '.join(argv)}",
        "# config: " + " ".join(f"{k}={v}" for k, v in config.items()),
        f"# version: lasso_dantzig {__version__}",
        f"# timestamp: {stamp}",
    ]
    return lines


def fmt(v: float, digits: int) -> str:
    return f"{float(v):.{digits}g}"


def _design(args):
    if args.diabetes64 and args.data:
        raise UsageError("--diabetes64 and --data are mutually exclusive")
    if args.diabetes64:
        d = diabetes64()
    elif args.data:
        try:
            d = load_csv(args.data, args.response)
        except OSError as exc:
            raise DataError(str(exc)) from exc
    else:
        raise UsageError("one of --data or --diabetes64 is required")
    return standardize(d, args.std)


def _lasso_rows(path, l1_max):
    rows = []
    for seg in path.segments:
        if l1_max is not None and seg.l1_norm > l1_max:
            b = lars.beta_at_l1(path, l1_max)
            rows.append((float(np.abs(b).sum()), lars.lambda_at_l1(path, l1_max), b))
            break
        rows.append((seg.l1_norm, seg.lam, seg.beta))
    return rows


def cmd_path(args, out) -> None:
    design = _design(args)
    X, y = design.X, design.y
    path = lars.lasso_path(X, y)
    full_l1 = float(path.l1_norms[-1])
    l1_max = None if args.l1_max_frac is None else args.l1_max_frac * full_l1
    if args.method == "lasso":
        rows = _lasso_rows(path, l1_max)
    else:
        if args.grid < 1:
            raise UsageError("--grid must be at least 1")
        kind = dantzig.ParameterKind(args.kind)
        if kind is dantzig.ParameterKind.L1_BOUND:
            top = full_l1 if l1_max is None else l1_max
        else:
            top = float(path.lambdas[0])
        grid = np.linspace(0.0, top, args.grid) if args.grid > 1 else np.array([0.0])
        ds = dantzig.ds_path_grid(X, y, kind, grid)
        rows = [(s.achieved_l1, s.achieved_linf, s.beta) for s in ds.solutions]

    config = dict(method=args.method, std=design.mode.value, grid=args.grid, kind=args.kind,
                  l1_max_frac=args.l1_max_frac, digits=args.digits)
    _write_header(out, args, "path", config)
    w = csv.writer(out, lineterminator="\n")
    names = design.column_names or tuple(f"x{j + 1}" for j in range(X.shape[1]))
    w.writerow(["l1_norm", "lambda", *[f"beta_{j + 1}" for j in range(len(names))]])
    for l1, lam, beta in rows:
        w.writerow([fmt(l1, args.digits), fmt(lam, args.digits), *(fmt(b, args.digits) for b in beta)])


def table1(design, s: float = TABLE1_S):
    """Lasso and DS at l1 norm ``s``: per-variable inner products and coefficients."""
    path = lars.lasso_path(design.X, design.y)
    lasso_beta = lars.beta_at_l1(path, s)
    ds_sol = dantzig.solve_ds(design.X, design.y, dantzig.Form1(s))
    return (
        lasso_beta,
        dantzig.residual_stats(design.X, design.y, lasso_beta),
        ds_sol.beta,
        dantzig.residual_stats(design.X, design.y, ds_sol.beta),
    )


def cmd_table1(args, out) -> None:
    if args.data:
        raise UsageError("table1 always uses the built-in diabetes64 data")
    modes = ["l2", "var"] if args.std == "both" else [args.std]
    d = diabetes64()
    config = dict(std=args.std, s=args.s, rows=args.rows, format=args.format)
    _write_header(out, args, "table1", config)
    for mode in modes:
        design = standardize(d, mode)
        lb, ls, db, ds = table1(design, args.s)
        nrows = design.X.shape[1] if args.rows is None else min(args.rows, design.X.shape[1])
        body = [
            (j + 1, design.column_names[j], ls.inner_products[j], lb[j], ds.inner_products[j], db[j])
            for j in range(nrows)
        ]
        footer = [
            ("max |inner product|", ls.linf, ds.linf),
            ("MSE", ls.mse, ds.mse),
            ("nonzero coefficients", int(np.sum(np.abs(lb) > dantzig.NONZERO_TOL)),
             int(np.sum(np.abs(db) > dantzig.NONZERO_TOL))),
            ("l1 norm", float(np.abs(lb).sum()), float(np.abs(db).sum())),
        ]
        if args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["std", "j", "name", "lasso_inner", "lasso_beta", "ds_inner", "ds_beta"])
            for j, name, li, lbj, di, dbj in body:
                w.writerow([mode, j, name, f"{li:.4f}", f"{lbj:.4f}", f"{di:.4f}", f"{dbj:.4f}"])
            for label, lv, dv in footer:
                w.writerow([mode, "", label, "", _cell(lv), "", _cell(dv)])
        else:
            out.write(f"standardization: {mode}   l1 norm s = {args.s}\n")
            out.write(f"{'j':>3} {'name':<10} {'lasso X_j^T r':>14} {'lasso beta':>12} "
                      f"{'DS X_j^T r':>14} {'DS beta':>12}\n")
            for j, name, li, lbj, di, dbj in body:
                out.write(f"{j:>3} {name:<10} {li:>14.4f} {lbj:>12.4f} {di:>14.4f} {dbj:>12.4f}\n")
            for label, lv, dv in footer:
                out.write(f"    {label:<25} {_cell(lv):>12} {'':>14} {_cell(dv):>12}\n")
            out.write("\n")


def _cell(v) -> str:
    return str(v) if isinstance(v, int) else f"{v:.4f}"


def compare_report(X, y, s: float, tol: float = 1e-8) -> dict:
    path = lars.lasso_path(X, y)
    lb = lars.beta_at_l1(path, s)
    ls = dantzig.residual_stats(X, y, lb)
    dsol = dantzig.solve_ds(X, y, dantzig.Form1(s))
    ds = dantzig.residual_stats(X, y, dsol.beta)
    return dict(
        s=s,
        lasso_linf=ls.linf, ds_linf=ds.linf,
        lasso_rss=ls.rss, ds_rss=ds.rss,
        lasso_mse=ls.mse, ds_mse=ds.mse,
        lasso_active=tuple(int(j) for j in np.flatnonzero(np.abs(lb) > dantzig.NONZERO_TOL)),
        ds_active=dsol.nonzero,
        ds_lower_linf=ds.linf <= ls.linf + tol * max(1.0, ls.linf),
        lasso_lower_rss=ls.rss <= ds.rss + tol * max(1.0, ds.rss),
    )


def cmd_compare(args, out) -> None:
    if args.s < 0:
        raise UsageError("--s must be non-negative")
    design = _design(args)
    r = compare_report(design.X, design.y, args.s)
    d = args.digits
    _write_header(out, args, "compare", dict(s=args.s, std=design.mode.value, digits=d))
    out.write(f"l1 norm s: {fmt(args.s, d)}\n")
    out.write(f"{'':<22}{'lasso':>16}{'dantzig':>16}\n")
    for label, key in (("max |X^T r|", "linf"), ("RSS", "rss"), ("MSE", "mse")):
        out.write(f"{label:<22}{fmt(r['lasso_' + key], d):>16}{fmt(r['ds_' + key], d):>16}\n")
    out.write(f"lasso active set ({len(r['lasso_active'])}): {' '.join(str(j + 1) for j in r['lasso_active'])}\n")
    out.write(f"DS active set ({len(r['ds_active'])}): {' '.join(str(j + 1) for j in r['ds_active'])}\n")
    out.write(f"check DS max |X^T r| <= lasso: {'PASS' if r['ds_lower_linf'] else 'FAIL'}\n")
    out.write(f"check lasso RSS <= DS: {'PASS' if r['lasso_lower_rss'] else 'FAIL'}\n")


def cmd_simulate(args, out) -> None:
    overrides = dict(reps=args.reps, grid_kind=args.grid_kind, grid_points=args.grid_points,
                     master_seed=args.seed, beta_seed=args.beta_seed)
    for name in ("n", "p", "k_nonzero", "coef_sd", "noise_sd"):
        v = getattr(args, name)
        if v is not None:
            overrides[name] = v
    try:
        cfg = sim.StudyConfig.preset(args.scenario, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    curve = sim.run_study(cfg, workers=args.workers)
    _write_header(out, args, "simulate", cfg.as_dict())
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["grid_frac", "lasso_mean", "lasso_sd", "ds_mean", "ds_sd"])
    d = args.digits
    for row in zip(curve.grid, curve.lasso_mean, curve.lasso_sd, curve.ds_mean, curve.ds_sd):
        w.writerow([fmt(v, d) for v in row])


def _write_header(out, args, command, config):
    if not args.no_manifest:
        for line in manifest_lines(command, args.argv, config):
            out.write(line + "\n")


def read_path_csv(text: str):
    """Parse ``path`` output into ``(l1_norms, lambdas, coefs)``."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = list(csv.reader(lines))[1:]
    arr = np.array([[float(v) for v in r] for r in rows])
    return arr[:, 0], arr[:, 1], arr[:, 2:]


def _add_common(p, std_choices=("l2", "var")):
    p.add_argument("--data", help="CSV file with a header row")
    p.add_argument("--response", default="Y", help="name of the response column (default: Y)")
    p.add_argument("--diabetes64", action="store_true", help="use the built-in 64-column diabetes model")
    p.add_argument("--std", choices=list(std_choices), default="l2",
                   help="column scaling: unit l2 norm or unit variance (default: l2)")
    p.add_argument("--seed", type=int, default=1000, help="master seed; replicate i uses seed + i")
    p.add_argument("--beta-seed", type=int, default=20070101, help="seed for the true coefficients")
    p.add_argument("--digits", type=int, default=6, help="significant digits in numeric output")
    p.add_argument("--no-manifest", action="store_true", help="omit the '#' manifest header")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lasso-dantzig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = _add_common(sub.add_parser("path", help="Lasso breakpoints or a DS grid path as CSV"))
    p.add_argument("--method", choices=["lasso", "dantzig"], default="lasso")
    p.add_argument("--grid", type=int, default=200, help="DS grid points (default: 200)")
    p.add_argument("--kind", choices=["l1", "lambda"], default="l1", help="DS grid parameter")
    p.add_argument("--l1-max-frac", type=float, default=None,
                   help="truncate at this fraction of the full-path l1 norm")
    p.set_defaults(func=cmd_path)

    t = _add_common(sub.add_parser("table1", help="Lasso vs DS at a common l1 norm on diabetes64"),
                    std_choices=("l2", "var", "both"))
    t.add_argument("--s", type=float, default=TABLE1_S)
    t.add_argument("--rows", type=int, default=12, help="variables to list (default: 12)")
    t.add_argument("--format", choices=["text", "csv"], default="text")
    t.set_defaults(func=cmd_table1)

    s = _add_common(sub.add_parser("simulate", help="replicated RMSE study, CSV output"))
    s.add_argument("--scenario", choices=[sc.value for sc in sim.Scenario], default="np-sparse")
    s.add_argument("--grid-kind", choices=["l1", "lambda"], default="l1")
    s.add_argument("--grid-points", type=int, default=50)
    s.add_argument("--reps", type=int, default=100)
    s.add_argument("--n", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--k-nonzero", type=int)
    s.add_argument("--coef-sd", type=float)
    s.add_argument("--noise-sd", type=float)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    c = _add_common(sub.add_parser("compare", help="matched-l1 comparison report"))
    c.add_argument("--s", type=float, required=True)
    c.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    buf = io.StringIO()
    try:
        args.func(args, buf)
    except UsageError as exc:
        print(f"lasso-dantzig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"lasso-dantzig: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SOLVER_ERRORS as exc:
        print(f"lasso-dantzig: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
