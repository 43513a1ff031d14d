#!/usr/bin/env python3
"""Phase-diffusion envelope sweeps: |g|^2 vs |beta|^2 per width and shape."""

import sys

import matplotlib.pyplot as plt
import numpy as np

from .rendering import build_parser, load_inputs, save_figure

ANGLE_COLUMN = "delta_deg"
ANGLE_SYMBOL = r"$\Delta$"


def render(art, out_path: str, dpi: int, angle_column: str = ANGLE_COLUMN, angle_symbol: str = ANGLE_SYMBOL):
    art.require("beta_norm_sq", "shape_tag", "r", angle_column, "g_sq")
    shapes = sorted(set(art.column("shape_tag")))
    fig, axes = plt.subplots(1, len(shapes), figsize=(4.6 * len(shapes), 3.6), constrained_layout=True, squeeze=False)
    bns = art.column("beta_norm_sq")
    angles = art.column(angle_column)
    g_sq = art.column("g_sq")
    tags = art.column("shape_tag")
    for ax, shape in zip(axes[0], shapes):
        for angle in np.unique(angles):
            mask = (tags == shape) & (angles == angle)
            order = np.argsort(bns[mask])
            ax.semilogy(bns[mask][order], g_sq[mask][order], lw=1.3, label=f"{angle_symbol} = {angle:g}°")
        ax.set_title(f"shape: {shape}", fontsize=9)
        ax.set_xlabel(r"$|\beta|^2$")
        ax.set_ylabel(r"$|g|^2$")
        ax.legend(fontsize=7)
    save_figure(fig, out_path, dpi, [art])
    plt.close(fig)


def main(argv=None) -> int:
    args = build_parser(__doc__).parse_args(argv)
    artifacts = load_inputs(args)
    if len(artifacts) != 1:
        raise SystemExit("expected exactly one noise.csv input")
    render(artifacts[0], args.out, args.dpi)
    return 0


if __name__ == "__main__":
    sys.exit(main())
