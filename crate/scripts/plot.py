"""Render figures from `qfb sweep` outputs.

Usage: python scripts/plot.py DIR

DIR holds the runs made by scripts/figures.sh. Requires matplotlib.
"""

import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def column(path, name):
    with open(path, newline="") as f:
        return [float(r[name]) if r[name] else float("nan") for r in csv.DictReader(f)]


def optimum_plot(ax, path, label):
    ax.plot(column(path, "omega"), column(path, "c_hat"), label=label)


def main(root):
    root = Path(root)

    fig, ax = plt.subplots()
    optimum_plot(ax, root / "none_00_optimum.csv", "no feedback")
    ax.set(xlabel="ω", ylabel="C", title="Stationary concurrence without feedback")
    fig.savefig(root / "fig1.png", dpi=150)

    for n, init in [(2, "10"), (3, "00")]:
        fig, (a, b) = plt.subplots(1, 2, figsize=(10, 4))
        optimum_plot(a, root / f"markovian_{init}_optimum.csv", "Markovian Ĉ")
        optimum_plot(a, root / f"none_{init}_optimum.csv", "no feedback")
        a.set(xlabel="ω", ylabel="C", title=f"initial |{init}⟩")
        a.legend()
        p = root / f"markovian_{init}_optimum.csv"
        b.plot(column(p, "omega"), column(p, "lambda_hat"))
        b.set(xlabel="ω", ylabel="λ̂", title="optimal feedback amplitude")
        fig.tight_layout()
        fig.savefig(root / f"fig{n}.png", dpi=150)

    fig, ax = plt.subplots()
    for init in ["00", "11", "10"]:
        p = root / f"bayesian_{init}_optimum.csv"
        if p.exists():
            optimum_plot(ax, p, f"|{init}⟩")
    ax.set(xlabel="ω", ylabel="C", title="Bayesian feedback")
    if ax.lines:
        ax.legend()
    fig.savefig(root / "fig4.png", dpi=150)

    p = root / "trajectory_bayesian_10.csv"
    if p.exists():
        fig, ax = plt.subplots()
        t = column(p, "t")
        ax.plot(t, column(p, "C_mean_state"), label="C of mean state")
        ax.plot(t, column(p, "C_mean_of_C"), label="mean of C")
        ax.set(xlabel="t", ylabel="C", title="Bayesian feedback from |10⟩, ω = 0")
        ax.legend()
        fig.savefig(root / "fig5.png", dpi=150)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "figures")
