"""Command-line front end.

    gaussdil measure --body '{"variant":"FlyingSaucer","n":10,"w":1.0,"x":0.5}'
    gaussdil profile --body '{"variant":"Ball","n":2,"r":1.0}' --t 0.1:1:10
    gaussdil check theorem2 --body '{"variant":"Ball","n":2,"r":1.0}' --t 0.1:1.0:10
    gaussdil smallball --model-file model.json --t 0.1:1:10
    gaussdil counterexample --a 3
    gaussdil sweep --a 3 --t 0.99 --n-grid 3,5,10,100,1000

Reports go to stdout (or --out), diagnostics to stderr. Exit status is 0
when every pass flag holds, 1 on a failed check or engine error, 2 on a
bad invocation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, counterexample as cx, gauss1d, measure, smallball
from .bodies import body_from_config
from .errors import DomainError, GaussDilError
from .reporting import emit_report, render, write_atomic

SEED_ENV = "GAUSSDIL_SEED"

CHECKS = ("s", "b", "theorem1", "theorem2", "theorem3", "lemma1", "lemma2", "conjecture1")


class UsageError(Exception):
    pass


def parse_grid(spec: str, spacing: str = "linear", upper: float = 1.0) -> list[float]:
    """'start:stop:count' (inclusive) or a comma-separated list."""
    try:
        if ":" in spec:
            start, stop, count = spec.split(":")
            start, stop, count = float(start), float(stop), int(count)
            if count < 1:
                raise ValueError
            if spacing == "log":
                grid = np.geomspace(start, stop, count)
            else:
                grid = np.linspace(start, stop, count)
            grid = [float(v) for v in grid]
        else:
            grid = [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid {spec!r}; use start:stop:count or a comma list")
    if not grid:
        raise UsageError("grid is empty")
    if any(not (0.0 < v <= upper * (1 + 1e-12)) for v in grid):
        raise UsageError(f"grid values must lie in (0, {upper}]")
    return [min(v, upper) for v in grid]


def _load_json_arg(inline, path, what):
    if inline and path:
        raise UsageError(f"give --{what} or --{what}-file, not both")
    if path:
        try:
            return Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}")
    if inline:
        return inline
    raise UsageError(f"--{what} or --{what}-file is required")


def _body(args):
    text = _load_json_arg(args.body, args.body_file, "body")
    try:
        return body_from_config(text)
    except (json.JSONDecodeError, DomainError, ValueError) as exc:
        raise UsageError(f"invalid body: {exc}")


def _emit(args, rows, columns=None):
    emit_report(rows, args.format, args.out, columns)


# ---------------------------------------------------------------------------
# subcommands


def cmd_measure(args):
    body = _body(args)
    if args.method == measure.MONTE_CARLO:
        est = measure.gaussian_measure_mc(body, args.samples, args.seed, args.threads)
        m = measure.Measurement(est.mean, measure.MONTE_CARLO, est.std_error)
    else:
        m = measure.gaussian_measure(body, tol=args.tol, samples=args.samples,
                                     seed=args.seed, threads=args.threads)
    _emit(args, [{"body": body.label, "value": m.value, "method": m.method,
                  "std_error": m.std_error}], ["body", "value", "method", "std_error"])
    return 0


def cmd_profile(args):
    body = _body(args)
    grid = parse_grid(args.t, args.spacing)
    prof = measure.dilation_profile(body, grid, args.method, args.samples, args.seed,
                                    tol=args.tol, threads=args.threads)
    _emit(args, prof.rows(), list(prof.columns))
    return 0


CHECK_COLUMNS = ["inequality", "body", "t", "lhs", "rhs", "margin", "uncertainty", "passed"]


def _check_rows(results, param):
    rows = []
    for r in results:
        gp = r.grid_point
        rows.append({"inequality": r.inequality, "body": gp.get("body", ""),
                     "t": gp.get(param), "lhs": r.lhs, "rhs": r.rhs, "margin": r.margin,
                     "uncertainty": r.uncertainty, "passed": r.passed})
    return rows


def cmd_check(args):
    name = args.inequality
    if name == "lemma1":
        grid = np.linspace(0.0, 6.0, 61)
        rows = []
        for u in grid:
            for v in grid:
                lhs = gauss1d.gaussian_tail(u + v)
                rhs = math.exp(-u * v) * gauss1d.gaussian_tail(u)
                rows.append({"u": float(u), "v": float(v), "lhs": lhs, "rhs": rhs,
                             "margin": rhs - lhs, "passed": rhs - lhs >= -1e-15 * rhs})
        _emit(args, rows, ["u", "v", "lhs", "rhs", "margin", "passed"])
        return 0 if all(r["passed"] for r in rows) else 1

    body = _body(args)
    engine = {"tol": args.tol, "samples": args.samples, "seed": args.seed}
    if name == "conjecture1":
        probes = bounds.probe_conjecture1(body, parse_grid(args.t, args.spacing), **engine)
        rows = [{"body": p.body, "t": p.t, "empirical_kappa": p.empirical_kappa,
                 "theorem2_floor": bounds.theorem2_kappa_floor(p.t) if p.t <= 0.5 else None}
                for p in probes]
        _emit(args, rows, ["body", "t", "empirical_kappa", "theorem2_floor"])
        return 0
    if name == "b":
        grid = parse_grid(args.t, "log")
        results = bounds.check_b_inequality(body, [math.log(t) for t in grid], **engine)
        rows = _check_rows(results, "u")
        for r in rows:
            r["t"] = math.exp(r["t"])
    elif name == "lemma2":
        results = bounds.check_lemma2(body, samples=args.samples, seed=args.seed)
        rows = _check_rows(results, "n")
    elif name == "theorem3":
        results = bounds.check_theorem3(body, t_grid=parse_grid(args.t, args.spacing),
                                        samples=args.samples, seed=args.seed, threads=args.threads)
        rows = _check_rows(results, "t")
        print(bounds.THEOREM3_NOTE, file=sys.stderr)
    else:
        fn = {"s": bounds.check_s_inequality, "theorem1": bounds.check_theorem1,
              "theorem2": bounds.check_theorem2}[name]
        upper = 0.5 if name == "theorem1" else 1.0
        results = fn(body, parse_grid(args.t, args.spacing, upper), **engine)
        rows = _check_rows(results, "s" if name == "theorem2" else "t")
    _emit(args, rows, CHECK_COLUMNS)
    return 0 if bounds.all_passed(results) else 1


def cmd_smallball(args):
    text = _load_json_arg(args.model, args.model_file, "model")
    try:
        model = smallball.GaussianVectorModel.from_dict(text)
    except (json.JSONDecodeError, DomainError, ValueError) as exc:
        raise UsageError(f"invalid model: {exc}")
    rep = smallball.check_theorem4(model, parse_grid(args.t, args.spacing),
                                   args.samples, args.seed, args.threads)
    print(f"M={rep.M:.17g} sigma={rep.sigma:.17g} exponent={rep.exponent:.17g}", file=sys.stderr)
    _emit(args, rep.rows(), ["t", "mc_prob", "std_error", "bound", "pass"])
    return 0 if rep.passed else 1


def _counterexample_tables(args):
    a = args.a
    a_grid = [float(v) for v in np.round(np.arange(0.5, 10.0 + 1e-9, 0.5), 10)]
    gap_rows = []
    for av in a_grid:
        gp = cx.boundary_gap(av)
        gap_rows.append({"a": gp.a, "w": gp.w, "hazard": gp.hazard, "gap": gp.gap})
    fits, infeasible = cx.fit_sweep(a, range(2, args.n_max + 1))
    fit_rows = [{"n": f.n, "x": f.x, "y": f.geometry.y, "residual": f.residual} for f in fits]
    sweep = cx.chain_sweep(a, args.t, [n for n in args.n_grid if n <= args.n_max])
    chain_rows = [link.row() for link in sweep.links]
    ref = cx.derivative_refutation(a)
    ref_rows = ref.rows()
    tables = {
        "gap": (gap_rows, ["a", "w", "hazard", "gap"]),
        "fit": (fit_rows, ["n", "x", "y", "residual"]),
        "chain": (chain_rows, list(chain_rows[0]) if chain_rows else ["n", "t"]),
        "refutation": (ref_rows, ["t", "disc", "interval", "difference"]),
    }
    print(f"a={a} w={ref.w:.17g} D_L={ref.d_left:.17g} D_R={ref.d_right:.17g} "
          f"threshold={cx.gap_threshold():.9f} infeasible_n={infeasible} "
          f"first_violation_n={sweep.first_violation}", file=sys.stderr)
    return tables, ref


def cmd_counterexample(args):
    tables, ref = _counterexample_tables(args)
    wanted = list(tables) if args.table == "all" else [args.table]
    if len(wanted) == 1:
        rows, cols = tables[wanted[0]]
        _emit(args, rows, cols)
    elif args.format == "json":
        payload = {k: json.loads(render(tables[k][0], "json", tables[k][1])) for k in wanted}
        text = json.dumps(payload, indent=2) + "\n"
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            write_atomic(text, args.out)
    else:
        if args.out in (None, "-"):
            raise UsageError("CSV output of all tables needs --out (one file per table)")
        stem = Path(args.out)
        for k in wanted:
            rows, cols = tables[k]
            emit_report(rows, "csv", str(stem.with_name(f"{stem.stem}.{k}{stem.suffix or '.csv'}")), cols)
    return 0 if ref.derivative_contradiction else 1


def cmd_sweep(args):
    sweep = cx.chain_sweep(args.a, args.t, args.n_grid)
    rows = [link.row() for link in sweep.links]
    print(f"first_violation_n={sweep.first_violation} infeasible_n={sweep.infeasible}",
          file=sys.stderr)
    _emit(args, rows, list(rows[0]) if rows else ["n", "t"])
    ok = all(link.inclusion_margin >= -1e-9 for link in sweep.links)
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def _int_list(spec):
    try:
        return [int(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {spec!r}")


def build_parser() -> argparse.ArgumentParser:
    env_seed = os.environ.get(SEED_ENV)
    try:
        default_seed = int(env_seed) if env_seed else 0
    except ValueError:
        default_seed = 0

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=10**6)
    common.add_argument("--seed", type=int, default=default_seed,
                        help=f"Monte Carlo seed (default from ${SEED_ENV} or 0)")
    common.add_argument("--tol", type=float, default=measure.DEFAULT_TOL)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--threads", type=int, default=None)

    body = argparse.ArgumentParser(add_help=False)
    body.add_argument("--body", help="body as inline JSON")
    body.add_argument("--body-file", help="path to a JSON body")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--t", default="0.05:1:20", help="start:stop:count or comma list")
    grid.add_argument("--spacing", choices=("linear", "log"), default="linear")

    p = argparse.ArgumentParser(prog="gaussdil", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("measure", parents=[common, body], help="Gaussian measure of one body")
    s.add_argument("--method", choices=("auto", measure.MONTE_CARLO), default="auto")
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("profile", parents=[common, body, grid], help="dilation profile")
    s.add_argument("--method", choices=("auto",) + measure.METHODS, default="auto")
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("check", parents=[common, body, grid], help="inequality margins")
    s.add_argument("inequality", choices=CHECKS)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("smallball", parents=[common, grid], help="small-ball bound for X = sum x_i g_i")
    s.add_argument("--model", help="model as inline JSON")
    s.add_argument("--model-file")
    s.set_defaults(func=cmd_smallball, t="0.1:1:10")

    s = sub.add_parser("counterexample", parents=[common], help="perimeter gap, saucer fits, chain")
    s.add_argument("--a", type=float, default=cx.DEFAULT_A)
    s.add_argument("--t", type=float, default=0.99)
    s.add_argument("--n-max", type=int, default=200)
    s.add_argument("--n-grid", type=_int_list, default=[3, 5, 10, 20, 50, 100, 200])
    s.add_argument("--table", choices=("all", "gap", "fit", "chain", "refutation"), default="all")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("sweep", parents=[common], help="direct-violation sweep over dimensions")
    s.add_argument("--a", type=float, default=cx.DEFAULT_A)
    s.add_argument("--t", type=float, default=0.99)
    s.add_argument("--n-grid", type=_int_list,
                   default=[3, 5, 10, 20, 50, 100, 200, 500, 1000, 2000])
    s.set_defaults(func=cmd_sweep)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.samples < measure.MIN_SAMPLES:
        print(f"gaussdil: --samples must be >= {measure.MIN_SAMPLES}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gaussdil: {exc}", file=sys.stderr)
        return 2
    except (GaussDilError, ArithmeticError, OSError) as exc:
        print(f"gaussdil: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
