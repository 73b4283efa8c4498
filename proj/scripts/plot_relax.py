#!/usr/bin/env python3
"""Plot site-population residuals |p_n - 1/N| from a relax.csv (log scale)."""
import csv
import sys

import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) != 2:
        sys.exit(f"usage: {sys.argv[0]} relax.csv")
    with open(sys.argv[1], newline="") as f:
        rows = list(csv.DictReader(f))
    cols = [c for c in rows[0] if c.startswith("p_") and c != "p_n"]
    n = len(cols)
    steps = [int(r["step"]) for r in rows]

    fig, ax = plt.subplots(figsize=(6, 4))
    for c in cols:
        resid = [abs(float(r[c]) - 1.0 / n) for r in rows]
        ax.semilogy(steps, [max(x, 1e-16) for x in resid], label=c)
    ax.set_xlabel("step")
    ax.set_ylabel(r"$|p_n - 1/N|$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = sys.argv[1].rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
