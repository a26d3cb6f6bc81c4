#!/usr/bin/env python3
"""Plots from qcx output files.

    python3 scripts/plot.py bench bench.csv --out scaling.png
    python3 scripts/plot.py traces zero.json pert.json hess.json --out traces.png
"""

import argparse
import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def bench(args):
    df = pd.read_csv(args.files[0])
    fig, ax = plt.subplots(figsize=(5, 4))
    for n, cells in df.groupby("n"):
        k, t = cells["K_kept"].to_numpy(float), cells["t_hess"].to_numpy(float)
        slope = np.polyfit(np.log(k), np.log(t), 1)[0] if len(cells) > 1 else float("nan")
        ax.loglog(k, t, "o-", label=f"n={n} (slope {slope:.2f})")
    ax.set_xlabel("kept parameters")
    ax.set_ylabel("Hessian time [s]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


def traces(args):
    fig, ax = plt.subplots(figsize=(5, 4))
    for path in args.files:
        with open(path) as f:
            doc = json.load(f)
        tr = doc["result"]
        it = [r["iteration"] for r in tr["records"]]
        cost = [r["cost"] for r in tr["records"]]
        ax.plot(it, cost, label=tr["init"])
    ax.set_xlabel("BFGS iteration")
    ax.set_ylabel("energy")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("kind", choices=["bench", "traces"])
    p.add_argument("files", nargs="+")
    p.add_argument("--out", required=True)
    args = p.parse_args()
    {"bench": bench, "traces": traces}[args.kind](args)


if __name__ == "__main__":
    main()
