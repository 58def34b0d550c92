#!/usr/bin/env python3
"""Plot the CSV output of a swarmring run directory.

Usage: plot_run.py <out-dir> [--save figure.png]

Handles both the two-mode layout (centralized/, decentralized/) and a single
run directory or an nn-sweep directory (k_<k>/ subdirectories).
"""
import argparse
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd


def run_dirs(root: Path):
    subs = sorted(p for p in root.iterdir() if p.is_dir() and (p / "metrics.csv").exists())
    return subs if subs else [root]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--save", type=Path)
    args = ap.parse_args()

    dirs = run_dirs(args.out_dir)
    fig, (ax_err, ax_rho) = plt.subplots(1, 2, figsize=(11, 4))
    for d in dirs:
        m = pd.read_csv(d / "metrics.csv")
        col = "density_error_normalized" if "density_error_normalized" in m else "error_norm"
        ax_err.plot(m["t"], m[col], label=d.name)
        if "estimation_error_normalized" in m:
            ax_err.plot(m["t"], m["estimation_error_normalized"], "--", label=f"{d.name} estimate")

        s = pd.read_csv(d / "snapshots.csv")
        if "t" in s:
            last = s[s["t"] == s["t"].max()]
            ax_rho.plot(last["x"], last["density"], label=f"{d.name} t={last['t'].iloc[0]:g}")
            target = last
        else:
            ax_rho.plot(s["x"], s["final"], label=f"{d.name} final")
            target = s
    ax_rho.plot(target["x"], target["target"], "k:", label="target")

    ax_err.set_xlabel("t")
    ax_err.set_ylabel("error")
    ax_err.legend()
    ax_rho.set_xlabel("x")
    ax_rho.set_ylabel("density")
    ax_rho.legend()
    fig.tight_layout()
    if args.save:
        fig.savefig(args.save, dpi=120)
    else:
        plt.show()


if __name__ == "__main__":
    main()
