#!/usr/bin/env python3
"""Plots produced from greenran CSV output.

  plot_results.py power  results/l10_k6/summary.csv  power.png
  plot_results.py trace  trace.csv                   trace.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_power(summary_path, out_path):
    df = pd.read_csv(summary_path)
    fig, ax = plt.subplots(figsize=(6, 4))
    for algo, group in df.groupby("algo"):
        group = group.sort_values("sinr_db")
        ax.plot(group["sinr_db"], group["mean_power_w"], marker="o", label=algo)
    ax.set_xlabel("target SINR [dB]")
    ax.set_ylabel("average network power [W]")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)


def plot_trace(trace_path, out_path):
    df = pd.read_csv(trace_path)
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    left.plot(df["t"], df["tol1"], marker="o", label="log10 ||z(t+1) - z(t)||")
    left.plot(df["t"], df["tol2"], marker="s", label="log10 ||v(t+1) - v(t)||")
    left.set_xlabel("outer iteration")
    left.legend()
    left.grid(True, alpha=0.3)
    right.plot(df["t"], df["lambda"], marker="o", color="tab:red")
    right.set_xlabel("outer iteration")
    right.set_ylabel("multiplier")
    right.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("kind", choices=["power", "trace"])
    parser.add_argument("csv")
    parser.add_argument("out")
    args = parser.parse_args()
    if args.kind == "power":
        plot_power(args.csv, args.out)
    else:
        plot_trace(args.csv, args.out)


if __name__ == "__main__":
    main()
