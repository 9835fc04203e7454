#!/usr/bin/env python3
"""Plot the CSV outputs of a `stochastic_uzawa run` output directory.

Usage:
    python3 docs/plot_results.py OUT_DIR [--paths 20] [--save PREFIX]

Produces four panels: sample control paths, inventory paths, the four
multiplier families (cross-path means), and the convergence diagnostics
(slackness estimators and maximum constraint violation per iteration).
"""
import argparse
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir", help="directory written by `stochastic_uzawa run`")
    ap.add_argument("--paths", type=int, default=20, help="number of sample paths to draw")
    ap.add_argument("--save", default=None, help="file prefix; default: OUT_DIR/plots")
    args = ap.parse_args()

    controls = pd.read_csv(os.path.join(args.out_dir, "controls.csv"))
    multipliers = pd.read_csv(os.path.join(args.out_dir, "multipliers.csv"))
    diagnostics = pd.read_csv(os.path.join(args.out_dir, "diagnostics.csv"))
    prefix = args.save or os.path.join(args.out_dir, "plots")

    fig, axes = plt.subplots(2, 2, figsize=(12, 8))

    sample = controls[controls["path"] < args.paths]
    for _, grp in sample.groupby("path"):
        axes[0, 0].plot(grp["time"], grp["u"], lw=0.6, alpha=0.6)
        axes[0, 1].plot(grp["time"], grp["X"], lw=0.6, alpha=0.6)
    axes[0, 0].set_title("trading rate u(t), sample paths")
    axes[0, 1].set_title("inventory X(t), sample paths")
    axes[0, 1].axhline(0.0, color="k", lw=0.5)

    means = multipliers.groupby("time")[["l1", "l2", "l3", "l4"]].mean()
    for col in ("l1", "l2", "l3", "l4"):
        axes[1, 0].plot(means.index, means[col], label=col)
    axes[1, 0].set_title("multiplier families, cross-path mean")
    axes[1, 0].legend()

    for col in ("S1", "S2", "S3", "S4"):
        axes[1, 1].plot(diagnostics["iter"], diagnostics[col].abs(), lw=0.8, label=f"|{col}|")
    axes[1, 1].plot(diagnostics["iter"], diagnostics["max_violation"], "k--", label="max violation")
    axes[1, 1].set_yscale("log")
    axes[1, 1].set_title("convergence diagnostics")
    axes[1, 1].set_xlabel("iteration")
    axes[1, 1].legend(fontsize=8)

    for ax in axes[0]:
        ax.set_xlabel("t")
    fig.tight_layout()
    out = prefix + ".png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
