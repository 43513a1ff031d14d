#!/usr/bin/env python3
"""Gaussian tail probability vs mode count with the 0.5 reference line."""

import sys

import matplotlib.pyplot as plt
import numpy as np

from .rendering import build_parser, load_inputs, save_figure


def render(art, out_path: str, dpi: int):
    art.require("n", "tail_prob", "exp_bound")
    n = art.column("n")
    order = np.argsort(n)
    fig, ax = plt.subplots(figsize=(4.8, 3.4), constrained_layout=True)
    ax.semilogx(n[order], art.column("tail_prob")[order], "C0.-", lw=1.2, ms=4, label="tail probability")
    ax.semilogx(n[order], art.column("exp_bound")[order], "C1--", lw=1.0, label=r"$(k e^{1-k})^n$ bound")
    ax.axhline(0.5, color="k", lw=0.8, ls=":", label="0.5 reference")
    ax.set_xlabel("number of modes n")
    ax.set_ylabel(r"$\Pr(|\gamma|^2 > \kappa n)$")
    ax.set_ylim(0.0, 0.55)
    ax.legend(fontsize=8)
    save_figure(fig, out_path, dpi, [art])
    plt.close(fig)


def main(argv=None) -> int:
    args = build_parser(__doc__).parse_args(argv)
    artifacts = load_inputs(args)
    if len(artifacts) != 1:
        raise SystemExit("expected exactly one tail.csv input")
    render(artifacts[0], args.out, args.dpi)
    return 0


if __name__ == "__main__":
    sys.exit(main())
