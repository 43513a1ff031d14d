#!/usr/bin/env python3
"""Three-panel density comparison plus characteristic-function curves.

Inputs: fig2_density.csv and fig2_lambda.csv (either order).  Left
panels: true / entangled-probe / vacuum-heterodyne measured densities;
right panel: closed-form curves with Monte Carlo estimates overlaid as
error bars.
"""

import math
import sys

import matplotlib.pyplot as plt
import numpy as np

from .artifacts import SchemaError
from .rendering import build_parser, load_inputs, save_figure


def render(density, lam, out_path: str, dpi: int):
    density.require("alpha_re", "alpha_im", "p_true", "p_ea", "p_vh")
    lam.require("beta_re", "lambda_re", "lambda_ea_re", "lambda_vh_re", "est_ea_re", "est_ea_se", "est_vh_re", "est_vh_se")

    xs = density.column("alpha_re")
    pts = int(round(math.sqrt(xs.size)))
    if pts * pts != xs.size:
        raise SchemaError(f"{density.path}: density grid is not square ({xs.size} rows)")
    extent_vals = np.unique(xs)
    lo, hi = extent_vals[0], extent_vals[-1]

    fig, axes = plt.subplots(1, 4, figsize=(16, 3.6), constrained_layout=True)
    for ax, col, title in zip(axes[:3], ("p_true", "p_ea", "p_vh"), ("true", "entangled probe", "vacuum+heterodyne")):
        grid = density.column(col).reshape(pts, pts)
        im = ax.imshow(grid.T, origin="lower", extent=(lo, hi, lo, hi), cmap="inferno")
        ax.set_title(title)
        ax.set_xlabel(r"Re $\alpha$")
        ax.set_ylabel(r"Im $\alpha$")
        fig.colorbar(im, ax=ax, shrink=0.85)

    ax = axes[3]
    beta = lam.column("beta_re")
    ax.plot(beta, lam.column("lambda_re"), "k-", lw=1.5, label=r"$\lambda$")
    ax.plot(beta, lam.column("lambda_ea_re"), "C0-", lw=1.2, label=r"$\lambda\,e^{-e^{-2r}|\beta|^2}$")
    ax.plot(beta, lam.column("lambda_vh_re"), "C3-", lw=1.2, label=r"$\lambda\,e^{-|\beta|^2}$")
    ax.errorbar(beta, lam.column("est_ea_re"), yerr=lam.column("est_ea_se"), fmt="C0.", ms=3, lw=0.8, label="estimate (probe)")
    ax.errorbar(beta, lam.column("est_vh_re"), yerr=lam.column("est_vh_se"), fmt="C3.", ms=3, lw=0.8, label="estimate (VH)")
    ax.set_xlabel(r"Re $\beta$")
    ax.set_ylabel(r"Re $\lambda(\beta)$")
    ax.legend(fontsize=7)
    save_figure(fig, out_path, dpi, [density, lam])
    plt.close(fig)


def main(argv=None) -> int:
    args = build_parser(__doc__).parse_args(argv)
    artifacts = load_inputs(args)
    if len(artifacts) != 2:
        raise SystemExit("expected exactly two inputs: fig2_density.csv fig2_lambda.csv")
    by_cols = {("p_true" in a.columns): a for a in artifacts}
    if True not in by_cols or False not in by_cols:
        raise SchemaError("inputs must be one density artifact and one lambda artifact")
    render(by_cols[True], by_cols[False], args.out, args.dpi)
    return 0


if __name__ == "__main__":
    sys.exit(main())
