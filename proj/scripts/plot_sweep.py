#!/usr/bin/env python3
"""Plot the slow-branch Floquet exponents and overlap g from a sweep.csv."""
import csv
import sys

import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) != 2:
        sys.exit(f"usage: {sys.argv[0]} sweep.csv")
    beta, re2, im2, re3, im3, g = [], [], [], [], [], []
    with open(sys.argv[1], newline="") as f:
        for row in csv.DictReader(f):
            beta.append(float(row["beta"]))
            re2.append(float(row["re_lambda2"]))
            im2.append(float(row["im_lambda2"]))
            re3.append(float(row["re_lambda3"]))
            im3.append(float(row["im_lambda3"]))
            g.append(float(row["g"]))

    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(6, 8))
    axes[0].plot(beta, re2, label=r"Re $\lambda_2$")
    axes[0].plot(beta, re3, label=r"Re $\lambda_3$")
    axes[0].set_ylabel(r"Re $\lambda$")
    axes[0].legend()
    axes[1].plot(beta, im2, label=r"Im $\lambda_2$")
    axes[1].plot(beta, im3, label=r"Im $\lambda_3$")
    axes[1].set_ylabel(r"Im $\lambda$")
    axes[1].legend()
    axes[2].plot(beta, g)
    axes[2].set_ylabel(r"$g$")
    axes[2].set_xlabel(r"$\beta$")
    fig.tight_layout()
    out = sys.argv[1].rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
