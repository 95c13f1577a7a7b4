"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import io
from .core import DataError, NumericalError, SolverConfig
from .pipeline import METHODS, SWEEP_PARAMS, RunConfig, parse_synth, run, sweep
from .synth import generate

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="l0graph", description="Sparse subspace clustering with l0-induced similarity graphs.")
    p.add_argument("--method", choices=METHODS, default="l0graph")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="CSV file, one sample per row")
    src.add_argument("--synth", help='synthetic data, e.g. "K=3,d=30,dk=3,nk=20,mode=distinct,sigma=0"')
    p.add_argument("--labels-col", help="label column index or header name")
    p.add_argument("--clusters", type=int, help="number of clusters (default: number of label values)")
    d = SolverConfig()
    p.add_argument("--lambda", dest="lam", type=float, default=d.lam)
    p.add_argument("--lambda-l1", type=float, default=d.lambda_l1)
    p.add_argument("--tau", type=float, default=d.tau)
    p.add_argument("--gamma", type=float, default=d.gamma)
    p.add_argument("--knn-k", type=int, default=d.knn_k)
    p.add_argument("--omp-t", type=int, default=3)
    p.add_argument("--max-iter", type=int, default=d.max_iter)
    p.add_argument("--tol", type=float, default=d.tol)
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10, help="k-means restarts")
    p.add_argument("--out", help="write the key=value report here instead of stdout")
    p.add_argument("--export-graph", help="write the similarity graph as an i,j,weight edge list")
    p.add_argument("--export-codes", help="write the n x n code matrix as CSV")
    p.add_argument("--export-data", help="write the (synthetic) dataset as CSV and continue")
    p.add_argument("--sweep", choices=sorted(SWEEP_PARAMS), help="parameter to sweep")
    p.add_argument("--values", help="comma-separated sweep values")
    p.add_argument("--sweep-out", help="CSV for value,accuracy,nmi rows (default: stdout)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args):
    try:
        solver = SolverConfig(
            lam=args.lam,
            lambda_l1=args.lambda_l1,
            tau=args.tau,
            max_iter=args.max_iter,
            tol=args.tol,
            gamma=args.gamma,
            knn_k=args.knn_k,
            seed=args.seed,
        )
        synth = parse_synth(args.synth, seed=args.seed) if args.synth else None
        labels_col = args.labels_col
        if labels_col is not None and labels_col.lstrip("-").isdigit():
            labels_col = int(labels_col)
        return RunConfig(
            method=args.method,
            data=args.data,
            labels_col=labels_col,
            synth=synth,
            clusters=args.clusters,
            solver=solver,
            omp_t=args.omp_t,
            normalize=args.normalize,
            seed=args.seed,
            restarts=args.restarts,
            out=args.out,
            export_graph=args.export_graph,
            export_codes=args.export_codes,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        if args.export_data:
            if config.synth is not None:
                ds = generate(config.synth)
                io.write_dataset_csv(args.export_data, ds.X, ds.truth)
            else:
                X, y = io.load_csv(config.data, config.labels_col)
                io.write_dataset_csv(args.export_data, X, y)
        if args.sweep:
            if not args.values:
                raise UsageError("--sweep needs --values")
            cast = int if args.sweep in ("knn_k", "T") else float
            try:
                values = [cast(v) for v in args.values.split(",")]
            except ValueError as exc:
                raise UsageError(f"bad --values: {exc}") from exc
            reports = sweep(config, args.sweep, values, csv_path=args.sweep_out)
            if not args.sweep_out:
                print(f"{args.sweep},accuracy,nmi")
                for v, r in zip(values, reports):
                    print(f"{v},{r.accuracy},{r.nmi}")
            return 0
        report = run(config)
        if not config.out:
            sys.stdout.write(report.to_text())
        return 0
    except UsageError as exc:
        print(f"l0graph: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"l0graph: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"l0graph: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"l0graph: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
