#!/usr/bin/env python3
"""Sample-complexity curves vs mode count from advantage grids.

Each input advantage.csv contributes its upper-bound curve (labelled by
its squeezing/loss settings); the entanglement-free lower bound is drawn
from the first input.  Invalid lower-bound cells are skipped for the
lower curve but the upper curves always render.
"""

import sys

import matplotlib.pyplot as plt
import numpy as np

from .rendering import build_parser, load_inputs, save_figure


def render(artifacts, out_path: str, dpi: int):
    fig, ax = plt.subplots(figsize=(5.2, 3.8), constrained_layout=True)
    first = artifacts[0]
    first.require("n", "log10_N_lower", "log10_N_upper", "valid", "r", "T_b", "T_a")
    n = first.column("n")
    valid = first.column("valid").astype(bool)
    order = np.argsort(n[valid])
    ax.plot(
        n[valid][order],
        first.column("log10_N_lower")[valid][order],
        "k--",
        lw=1.6,
        label="entanglement-free lower bound",
    )
    for art in artifacts:
        art.require("n", "log10_N_upper", "r", "T_b", "T_a")
        nn = art.column("n")
        order = np.argsort(nn)
        r = art.column("r")[0]
        loss = 1.0 - min(art.column("T_a")[0], art.column("T_b")[0])
        label = f"probe upper bound (r={r:g}, loss={loss:.0%})"
        ax.plot(nn[order], art.column("log10_N_upper")[order], lw=1.4, label=label)
    ax.set_xlabel("number of modes n")
    ax.set_ylabel(r"$\log_{10} N$")
    ax.legend(fontsize=7)
    save_figure(fig, out_path, dpi, artifacts)
    plt.close(fig)


def main(argv=None) -> int:
    args = build_parser(__doc__).parse_args(argv)
    render(load_inputs(args), args.out, args.dpi)
    return 0


if __name__ == "__main__":
    sys.exit(main())
