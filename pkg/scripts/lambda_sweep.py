"""Accuracy and NMI as the l0 weight varies, written as CSV for plotting.

    python scripts/lambda_sweep.py --data data/ionosphere.csv --labels-col class --out lambda.csv
    python scripts/lambda_sweep.py --synth "K=3,d=30,dk=3,nk=20" --seeds 5
"""

import argparse
import csv
import sys

import numpy as np

from l0graph.pipeline import RunConfig, parse_synth, sweep

DEFAULT_VALUES = "0.01,0.05,0.1,0.2,0.3,0.5,0.7,1.0,2.0"


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data")
    src.add_argument("--synth")
    p.add_argument("--labels-col", default="class")
    p.add_argument("--method", default="l0graph")
    p.add_argument("--values", default=DEFAULT_VALUES)
    p.add_argument("--seeds", type=int, default=1, help="seeds averaged per value")
    p.add_argument("--out", help="CSV path (default: stdout)")
    args = p.parse_args()

    values = [float(v) for v in args.values.split(",")]
    acc = np.zeros((args.seeds, len(values)))
    score = np.zeros_like(acc)
    for seed in range(args.seeds):
        if args.data:
            cfg = RunConfig(method=args.method, data=args.data, labels_col=args.labels_col, seed=seed)
        else:
            cfg = RunConfig(method=args.method, synth=parse_synth(args.synth, seed=seed), seed=seed)
        for j, r in enumerate(sweep(cfg, "lambda", values)):
            acc[seed, j], score[seed, j] = r.accuracy, r.nmi

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(["lambda", "accuracy", "nmi"])
    for j, v in enumerate(values):
        w.writerow([v, f"{acc[:, j].mean():.4f}", f"{score[:, j].mean():.4f}"])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
