#!/usr/bin/env python3
"""Advantage contour map over (n, kappa) or (n, r) grids.

Solid brown contours: log10 of the probe upper bound.  Dashed contours:
log10 of the lower/upper sample-count ratio at levels {0, 2, 4, 6, 8};
the region with ratio > 1 (log10 > 0) — a rigorous advantage over every
entanglement-free scheme — is shaded.  Cells with an invalid lower bound
are masked.
"""

import sys

import matplotlib.pyplot as plt
import numpy as np

from .artifacts import SchemaError
from .rendering import build_parser, load_inputs, save_figure

RATIO_LEVELS = [0.0, 2.0, 4.0, 6.0, 8.0]


def _pivot(art):
    art.require("n", "kappa", "r", "log10_N_upper", "log10_ratio", "valid")
    n = art.column("n")
    kappa = art.column("kappa")
    r = art.column("r")
    if np.unique(kappa).size > 1 and np.unique(r).size > 1:
        raise SchemaError(f"{art.path}: both kappa and r vary; need a 2-D grid")
    y, y_label = (kappa, r"$\kappa$") if np.unique(kappa).size > 1 else (r, "squeezing r")
    xs = np.unique(n)
    ys = np.unique(y)
    upper = np.full((ys.size, xs.size), np.nan)
    ratio = np.full((ys.size, xs.size), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    valid = art.column("valid").astype(bool)
    up = art.column("log10_N_upper")
    ra = art.column("log10_ratio")
    for k in range(n.size):
        upper[yi[y[k]], xi[n[k]]] = up[k]
        if valid[k]:
            ratio[yi[y[k]], xi[n[k]]] = ra[k]
    return xs, ys, y_label, upper, ratio


def render(art, out_path: str, dpi: int):
    xs, ys, y_label, upper, ratio = _pivot(art)
    fig, ax = plt.subplots(figsize=(5.2, 4.0), constrained_layout=True)
    masked = np.ma.masked_invalid(ratio)
    ax.contourf(xs, ys, np.ma.masked_less(masked, 0.0), levels=[0.0, np.inf], colors=["#ffd9b0"])
    cs_u = ax.contour(xs, ys, upper, colors="saddlebrown", linewidths=1.1)
    ax.clabel(cs_u, fmt=lambda v: rf"$10^{{{v:.0f}}}$", fontsize=7)
    cs_r = ax.contour(xs, ys, masked, levels=RATIO_LEVELS, colors="C0", linestyles="--", linewidths=1.1)
    ax.clabel(cs_r, fmt=lambda v: rf"$10^{{{v:.0f}}}\times$", fontsize=7)
    ax.set_xlabel("number of modes n")
    ax.set_ylabel(y_label)
    ax.set_title("sample-count contours (solid) and advantage ratio (dashed)", fontsize=9)
    save_figure(fig, out_path, dpi, [art])
    plt.close(fig)


def main(argv=None) -> int:
    args = build_parser(__doc__).parse_args(argv)
    artifacts = load_inputs(args)
    if len(artifacts) != 1:
        raise SystemExit("expected exactly one advantage.csv input")
    render(artifacts[0], args.out, args.dpi)
    return 0


if __name__ == "__main__":
    sys.exit(main())
