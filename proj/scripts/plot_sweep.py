#!/usr/bin/env python3
"""Plot learned states and query counts from `rowlearn experiment` CSVs.

    rowlearn experiment --sweep trr_counters --values 1..6 -o counters.csv
    scripts/plot_sweep.py counters.csv -o counters.png
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv", nargs="+", help="per-run sweep CSV files (one panel each)")
    ap.add_argument("-o", "--output", default="sweep.png")
    args = ap.parse_args()

    fig, axes = plt.subplots(1, len(args.csv), figsize=(4.5 * len(args.csv), 3.5), squeeze=False)
    for ax, path in zip(axes[0], args.csv):
        runs = pd.read_csv(path)
        ok = runs[runs.status == "ok"]
        med = ok.groupby("value", sort=True)[["states", "membership_queries", "wall_time_ms"]].median()
        ax.plot(med.index, med.states, "o-", color="tab:blue")
        ax.set_xlabel(runs.parameter.iloc[0])
        ax.set_ylabel("states", color="tab:blue")
        twin = ax.twinx()
        twin.plot(med.index, med.membership_queries, "s--", color="tab:red")
        twin.set_ylabel("membership queries", color="tab:red")
        # values where no flip was learned
        safe = ok[ok.rowhammer_upper.isna()].value.unique()
        for v in safe:
            ax.axvspan(v - 0.25 * _step(med.index), v + 0.25 * _step(med.index), color="0.9", zorder=0)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


def _step(index):
    return (index[1] - index[0]) if len(index) > 1 else 1


if __name__ == "__main__":
    main()
