"""Shared statistical test machinery (independent of the package internals)."""

import math

import numpy as np
from scipy import stats


def chi2_grid_test(points: np.ndarray, density_fn, extent: float, bins: int = 32, subgrid: int = 16):
    """Chi-squared GOF of 2-D complex samples against a density, conditioned on |·| < extent.

    Expected cell masses come from midpoint quadrature on a (bins*subgrid)^2
    refinement; cells with expected count < 10 are pooled into one bucket.
    Returns (statistic, dof, pvalue).
    """
    x = points.real.ravel()
    y = points.imag.ravel()
    inside = (np.abs(x) < extent) & (np.abs(y) < extent)
    x, y = x[inside], y[inside]
    m = x.size

    fine = bins * subgrid
    h = 2.0 * extent / fine
    centers = -extent + h * (np.arange(fine) + 0.5)
    gx, gy = np.meshgrid(centers, centers, indexing="ij")
    dens = density_fn(gx.ravel() + 1j * gy.ravel()).reshape(fine, fine)
    cell = dens.reshape(bins, subgrid, bins, subgrid).sum(axis=(1, 3)) * h * h
    cell = cell / cell.sum()  # condition on the window

    counts, _, _ = np.histogram2d(x, y, bins=bins, range=[[-extent, extent], [-extent, extent]])
    expected = cell * m

    keep = expected.ravel() >= 10.0
    obs = counts.ravel()[keep]
    exp = expected.ravel()[keep]
    pooled_obs = counts.ravel()[~keep].sum()
    pooled_exp = expected.ravel()[~keep].sum()
    if pooled_exp > 0:
        obs = np.append(obs, pooled_obs)
        exp = np.append(exp, pooled_exp)
    exp *= obs.sum() / exp.sum()
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = obs.size - 1
    return stat, dof, float(stats.chi2.sf(stat, dof))


def cdf_from_density(xs: np.ndarray, pdf: np.ndarray):
    """Numerical CDF (cumulative trapezoid, normalized) usable with scipy.stats.kstest."""
    inc = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) / 2.0 * np.diff(xs))])
    inc /= inc[-1]

    def cdf(v):
        return np.interp(v, xs, inc)

    return cdf


def combined_se(values: np.ndarray) -> float:
    """Quadrature-combined standard error of the mean of complex samples."""
    n = values.size
    var = values.real.var() + values.imag.var()
    return math.sqrt(var / n)
