"""Config-driven experiment runner.

Usage:
    cvlearn --config CONFIG.json [--seed U64] [--threads INT] [--out DIR]
            [--format csv|json] [--strict]

The config file is a JSON object with a "command" discriminator plus
command-specific parameters (schemas below).  Every artifact embeds the
fully-resolved config and its SHA-256, and output bytes are identical
across reruns and thread counts for a fixed config + seed.

Commands and parameters (defaults in parentheses):

  fig2        sigma (0.3), gamma_re (1.6), gamma_im (0.0), r (2.0),
              alpha_extent (10.0), alpha_points (201), beta_max (3.2),
              beta_points (64), mc_samples (200000)
              -> fig2_density.csv (alpha_re, alpha_im, p_true, p_ea, p_vh)
                 fig2_lambda.csv  (beta_re, beta_im, lambda_re, lambda_im,
                                   lambda_ea_re, lambda_ea_im, lambda_vh_re,
                                   lambda_vh_im, est_ea_re, est_ea_im,
                                   est_ea_se, est_vh_re, est_vh_im, est_vh_se)

  advantage   n_min (2), n_max (100), n_step (1), kappas ([1.0]), rs ([1.0]),
              eps (0.2), delta (1/3), sigma (0.0), T_b (1.0), T_a (1.0),
              s (null = inf), ef_variant ("main"|"finite_sigma"|"gaussian")
              -> advantage.csv (n, kappa, eps, delta, sigma, r, T_b, T_a,
                                log10_N_lower, log10_N_upper, log10_ratio,
                                valid, valid_flags, r_eff, ef_variant)

  complexity  settings ([{r, beta_norm_sq}...]), eps (0.2), delta (1/3),
              trials (1000), T_b (1.0), T_a (1.0), s (null), channel
              ({type: "five_peak", sigma: 0.3, gamma_re: 1.6, gamma_im: 0})
              -> complexity.csv (r, T_b, T_a, s, r_eff, beta_norm_sq, eps,
                                 delta, N, trials, failures, failure_rate)

  tail        n_min (8), n_max (14000), points (40), kappa (1.0)
              -> tail.csv (n, kappa, tail_prob, exp_bound)

  noise       kind ("phase_diffusion"|"crosstalk"), r (1.5), n (50),
              beta_norm_sq_max (130.0), points (27), angles_deg ([0,1,2]),
              shapes (["uniform","single"])
              -> noise.csv (beta_norm_sq, shape_tag, r, delta_deg|theta_deg,
                            g_sq, overhead)

  game        n (8), kappa (1.0), sigma (0.3), eps0 (0.245), rounds (10000),
              scheme ({r, T_b, T_a, s}), N (null = Hoeffding-sized),
              delta (1/3)
              -> game.json {rounds, N, success_rate, ci_low, ci_high,
                            in_range_fraction}

Exit codes: 0 success, 2 config error, 3 numeric-validity error (--strict).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from .channels import ChannelSpec, eval_lambda, eval_p, five_peak_example, three_peak
from .estimation import empirical_failure_rate, estimate_lambda_batch, hoeffding_N
from .game import GameConfig, summarize_rounds, play_round
from .measurement import SchemeConfig, eval_p_meas, sample_outcomes
from .noise import crosstalk_envelope, phase_diffusion_g_sq
from .numerics import RandomStream, log_reg_upper_gamma

SCHEMA_VERSION = "cvlearn.v1"


class ConfigError(ValueError):
    """Invalid experiment configuration (exit code 2)."""


class NumericValidityError(RuntimeError):
    """Bound preconditions violated under --strict (exit code 3)."""


@dataclass(frozen=True)
class RunContext:
    seed: int
    threads: int
    out_dir: Path
    fmt: str
    strict: bool

    @property
    def stream(self) -> RandomStream:
        return RandomStream(self.seed)


# -- config plumbing -----------------------------------------------------------


def _take(cfg: dict, key: str, kind, default=..., path: str = ""):
    where = f"{path}.{key}" if path else key
    if key not in cfg:
        if default is ...:
            raise ConfigError(f"{where}: missing required field")
        return default
    val = cfg[key]
    try:
        if kind is float:
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise TypeError
            return float(val)
        if kind is int:
            if isinstance(val, bool) or not isinstance(val, int):
                raise TypeError
            return int(val)
        if kind is str:
            if not isinstance(val, str):
                raise TypeError
            return val
        if kind is list:
            if not isinstance(val, list):
                raise TypeError
            return val
        if kind is dict:
            if not isinstance(val, dict):
                raise TypeError
            return val
    except TypeError:
        raise ConfigError(f"{where}: expected {kind.__name__}, got {type(val).__name__}") from None
    raise AssertionError(kind)


def _take_s(cfg: dict, path: str = "") -> float:
    s = cfg.get("s", None)
    if s is None or s == "inf":
        return math.inf
    if isinstance(s, bool) or not isinstance(s, (int, float)):
        raise ConfigError(f"{path + '.' if path else ''}s: expected number, null, or \"inf\"")
    return float(s)


def _scheme_from(cfg: dict, path: str) -> SchemeConfig:
    try:
        return SchemeConfig(
            r=_take(cfg, "r", float, 1.0, path),
            T_b=_take(cfg, "T_b", float, 1.0, path),
            T_a=_take(cfg, "T_a", float, 1.0, path),
            s=_take_s(cfg, path),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _channel_from(cfg: dict, path: str) -> ChannelSpec:
    kind = _take(cfg, "type", str, "five_peak", path)
    sigma = _take(cfg, "sigma", float, 0.3, path)
    gamma = complex(_take(cfg, "gamma_re", float, 1.6, path), _take(cfg, "gamma_im", float, 0.0, path))
    try:
        if kind == "five_peak":
            return five_peak_example(sigma, gamma)
        if kind == "three_peak":
            n = _take(cfg, "n", int, 1, path)
            eps0 = _take(cfg, "eps0", float, 0.25, path)
            center = np.zeros(n, dtype=np.complex128)
            center[0] = gamma
            return three_peak(n, center, eps0, sigma)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.type: unknown channel type {kind!r}")


def _canonical(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def _config_sha(config: dict) -> str:
    return hashlib.sha256(_canonical(config).encode()).hexdigest()


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return str(float(v))
    return str(v)


def _render_table(command: str, config: dict, columns: list[str], rows: list[list]) -> str:
    head = [
        f"# schema={SCHEMA_VERSION}",
        f"# command={command}",
        f"# config_sha256={_config_sha(config)}",
        f"# config={_canonical(config)}",
        ",".join(columns),
    ]
    body = [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(head + body) + "\n"


def _render_json(command: str, config: dict, payload: dict) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "config_sha256": _config_sha(config),
        "config": config,
    }
    doc.update(payload)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit_table(command, config, columns, rows, name, ctx) -> dict[str, str]:
    if ctx.fmt == "json":
        payload = {"columns": columns, "rows": [[None if isinstance(v, float) and math.isnan(v) else v for v in row] for row in rows]}
        return {f"{name}.json": _render_json(command, config, payload)}
    return {f"{name}.csv": _render_table(command, config, columns, rows)}


def _pmap(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# -- commands -------------------------------------------------------------------


def cmd_fig2(raw: dict, ctx: RunContext) -> dict[str, str]:
    sigma = _take(raw, "sigma", float, 0.3)
    gamma_re = _take(raw, "gamma_re", float, 1.6)
    gamma_im = _take(raw, "gamma_im", float, 0.0)
    r = _take(raw, "r", float, 2.0)
    extent = _take(raw, "alpha_extent", float, 10.0)
    a_points = _take(raw, "alpha_points", int, 201)
    beta_max = _take(raw, "beta_max", float, 3.2)
    b_points = _take(raw, "beta_points", int, 64)
    mc = _take(raw, "mc_samples", int, 200000)
    if a_points < 2 or b_points < 2 or mc < 1:
        raise ConfigError("fig2: alpha_points/beta_points must be >= 2 and mc_samples >= 1")
    config = {
        "command": "fig2",
        "seed": ctx.seed,
        "format": ctx.fmt,
        "sigma": sigma,
        "gamma_re": gamma_re,
        "gamma_im": gamma_im,
        "r": r,
        "alpha_extent": extent,
        "alpha_points": a_points,
        "beta_max": beta_max,
        "beta_points": b_points,
        "mc_samples": mc,
    }
    try:
        channel = five_peak_example(sigma, complex(gamma_re, gamma_im))
        cfg_ea = SchemeConfig.ideal(r)
        cfg_vh = SchemeConfig.vacuum_heterodyne()
    except ValueError as exc:
        raise ConfigError(f"fig2: {exc}") from exc

    axis = np.linspace(-extent, extent, a_points)
    alpha = (axis[:, None] + 1j * axis[None, :]).reshape(-1, 1)

    def density_chunk(start: int) -> tuple:
        stop = min(start + 8192, alpha.shape[0])
        block = alpha[start:stop]
        return eval_p(channel, block), eval_p_meas(channel, cfg_ea, block), eval_p_meas(channel, cfg_vh, block)

    parts = _pmap(density_chunk, range(0, alpha.shape[0], 8192), ctx.threads)
    p_true = np.concatenate([p[0] for p in parts])
    p_ea = np.concatenate([p[1] for p in parts])
    p_vh = np.concatenate([p[2] for p in parts])
    density_rows = [
        [alpha[k, 0].real, alpha[k, 0].imag, p_true[k], p_ea[k], p_vh[k]] for k in range(alpha.shape[0])
    ]

    beta_axis = np.linspace(-beta_max, beta_max, b_points)
    betas = [np.array([b], dtype=np.complex128) for b in beta_axis]
    lam = np.array([eval_lambda(channel, b) for b in betas])
    lam_ea = lam * np.exp(-cfg_ea.noise_weight * beta_axis**2)
    lam_vh = lam * np.exp(-cfg_vh.noise_weight * beta_axis**2)
    samples_ea = sample_outcomes(channel, cfg_ea, mc, ctx.stream.substream(0))
    samples_vh = sample_outcomes(channel, cfg_vh, mc, ctx.stream.substream(1))
    est_ea = estimate_lambda_batch(samples_ea, betas)
    est_vh = estimate_lambda_batch(samples_vh, betas)
    lambda_rows = []
    for k in range(b_points):
        lambda_rows.append(
            [
                beta_axis[k],
                0.0,
                lam[k].real,
                lam[k].imag,
                lam_ea[k].real,
                lam_ea[k].imag,
                lam_vh[k].real,
                lam_vh[k].imag,
                est_ea[k].lambda_hat.real,
                est_ea[k].lambda_hat.imag,
                est_ea[k].std_error,
                est_vh[k].lambda_hat.real,
                est_vh[k].lambda_hat.imag,
                est_vh[k].std_error,
            ]
        )

    out = {}
    out.update(
        _emit_table(
            "fig2", config, ["alpha_re", "alpha_im", "p_true", "p_ea", "p_vh"], density_rows, "fig2_density", ctx
        )
    )
    out.update(
        _emit_table(
            "fig2",
            config,
            [
                "beta_re",
                "beta_im",
                "lambda_re",
                "lambda_im",
                "lambda_ea_re",
                "lambda_ea_im",
                "lambda_vh_re",
                "lambda_vh_im",
                "est_ea_re",
                "est_ea_im",
                "est_ea_se",
                "est_vh_re",
                "est_vh_im",
                "est_vh_se",
            ],
            lambda_rows,
            "fig2_lambda",
            ctx,
        )
    )
    return out


_EF_BY_NAME = {
    "main": bounds_mod.BoundKind.EF_MAIN,
    "finite_sigma": bounds_mod.BoundKind.EF_FINITE_SIGMA,
    "gaussian": bounds_mod.BoundKind.EF_GAUSSIAN,
}


def cmd_advantage(raw: dict, ctx: RunContext) -> dict[str, str]:
    n_min = _take(raw, "n_min", int, 2)
    n_max = _take(raw, "n_max", int, 100)
    n_step = _take(raw, "n_step", int, 1)
    kappas = [float(k) for k in _take(raw, "kappas", list, [1.0])]
    rs = [float(r) for r in _take(raw, "rs", list, [1.0])]
    eps = _take(raw, "eps", float, 0.2)
    delta = _take(raw, "delta", float, 1.0 / 3.0)
    sigma = _take(raw, "sigma", float, 0.0)
    t_b = _take(raw, "T_b", float, 1.0)
    t_a = _take(raw, "T_a", float, 1.0)
    s = _take_s(raw)
    variant_name = _take(raw, "ef_variant", str, "main")
    if variant_name not in _EF_BY_NAME:
        raise ConfigError(f"advantage.ef_variant: expected one of {sorted(_EF_BY_NAME)}")
    if n_min < 1 or n_max < n_min or n_step < 1:
        raise ConfigError("advantage: need 1 <= n_min <= n_max and n_step >= 1")
    if variant_name == "gaussian" and sigma <= 0:
        raise ConfigError("advantage: ef_variant=gaussian requires sigma > 0")
    variant = _EF_BY_NAME[variant_name]
    config = {
        "command": "advantage",
        "seed": ctx.seed,
        "format": ctx.fmt,
        "n_min": n_min,
        "n_max": n_max,
        "n_step": n_step,
        "kappas": kappas,
        "rs": rs,
        "eps": eps,
        "delta": delta,
        "sigma": sigma,
        "T_b": t_b,
        "T_a": t_a,
        "s": None if math.isinf(s) else s,
        "ef_variant": variant_name,
    }
    cells = [
        (n, kappa, r)
        for n in range(n_min, n_max + 1, n_step)
        for kappa in kappas
        for r in rs
    ]

    def cell_row(cell):
        n, kappa, r = cell
        try:
            q = bounds_mod.BoundQuery(n=n, kappa=kappa, eps=eps, delta=delta, sigma=sigma)
            scheme = SchemeConfig(r=r, T_b=t_b, T_a=t_a, s=s)
        except ValueError as exc:
            raise ConfigError(f"advantage: {exc}") from exc
        lower = bounds_mod._EF_VARIANTS[variant](q)
        upper = bounds_mod.upper_bound_ea(q, scheme.r_eff)
        ratio = lower.log10_N - upper.log10_N if lower.valid else math.nan
        return [
            n,
            kappa,
            eps,
            delta,
            sigma,
            r,
            t_b,
            t_a,
            lower.log10_N,
            upper.log10_N,
            ratio,
            lower.valid,
            ";".join(lower.reasons),
            scheme.r_eff,
            variant_name,
        ]

    rows = _pmap(cell_row, cells, ctx.threads)
    if ctx.strict and any(not row[11] for row in rows):
        bad = next(row for row in rows if not row[11])
        raise NumericValidityError(
            f"advantage: lower-bound premise violated at n={bad[0]}, kappa={bad[1]} ({bad[12]})"
        )
    columns = [
        "n",
        "kappa",
        "eps",
        "delta",
        "sigma",
        "r",
        "T_b",
        "T_a",
        "log10_N_lower",
        "log10_N_upper",
        "log10_ratio",
        "valid",
        "valid_flags",
        "r_eff",
        "ef_variant",
    ]
    return _emit_table("advantage", config, columns, rows, "advantage", ctx)


def cmd_complexity(raw: dict, ctx: RunContext) -> dict[str, str]:
    settings = _take(raw, "settings", list, [{"r": 0.0, "beta_norm_sq": 1.0}, {"r": 1.0, "beta_norm_sq": 2.0}, {"r": 2.0, "beta_norm_sq": 4.0}])
    eps = _take(raw, "eps", float, 0.2)
    delta = _take(raw, "delta", float, 1.0 / 3.0)
    trials = _take(raw, "trials", int, 1000)
    t_b = _take(raw, "T_b", float, 1.0)
    t_a = _take(raw, "T_a", float, 1.0)
    s = _take_s(raw)
    channel_cfg = _take(raw, "channel", dict, {"type": "five_peak", "sigma": 0.3, "gamma_re": 1.6, "gamma_im": 0.0})
    channel = _channel_from(channel_cfg, "complexity.channel")
    parsed = []
    for i, item in enumerate(settings):
        if not isinstance(item, dict):
            raise ConfigError(f"complexity.settings[{i}]: expected object")
        parsed.append((_take(item, "r", float, path=f"complexity.settings[{i}]"), _take(item, "beta_norm_sq", float, path=f"complexity.settings[{i}]")))
    config = {
        "command": "complexity",
        "seed": ctx.seed,
        "format": ctx.fmt,
        "settings": [{"r": r, "beta_norm_sq": b} for r, b in parsed],
        "eps": eps,
        "delta": delta,
        "trials": trials,
        "T_b": t_b,
        "T_a": t_a,
        "s": None if math.isinf(s) else s,
        "channel": channel_cfg,
    }

    def setting_row(item):
        idx, (r, bns) = item
        try:
            scheme = SchemeConfig(r=r, T_b=t_b, T_a=t_a, s=s)
        except ValueError as exc:
            raise ConfigError(f"complexity.settings[{idx}]: {exc}") from exc
        beta = np.zeros(channel.n, dtype=np.complex128)
        beta[0] = math.sqrt(bns)
        n_samples = hoeffding_N(eps, delta, scheme.r_eff, bns)
        rate = empirical_failure_rate(channel, scheme, beta, eps, n_samples, trials, ctx.stream.substream(idx))
        return [
            r,
            t_b,
            t_a,
            math.inf if math.isinf(s) else s,
            scheme.r_eff,
            bns,
            eps,
            delta,
            n_samples,
            trials,
            int(round(rate * trials)),
            rate,
        ]

    rows = _pmap(setting_row, list(enumerate(parsed)), ctx.threads)
    columns = ["r", "T_b", "T_a", "s", "r_eff", "beta_norm_sq", "eps", "delta", "N", "trials", "failures", "failure_rate"]
    return _emit_table("complexity", config, columns, rows, "complexity", ctx)


def cmd_tail(raw: dict, ctx: RunContext) -> dict[str, str]:
    n_min = _take(raw, "n_min", int, 8)
    n_max = _take(raw, "n_max", int, 14000)
    points = _take(raw, "points", int, 40)
    kappa = _take(raw, "kappa", float, 1.0)
    if n_min < 1 or n_max < n_min or points < 1:
        raise ConfigError("tail: need 1 <= n_min <= n_max and points >= 1")
    config = {
        "command": "tail",
        "seed": ctx.seed,
        "format": ctx.fmt,
        "n_min": n_min,
        "n_max": n_max,
        "points": points,
        "kappa": kappa,
    }
    ns = sorted({int(round(v)) for v in np.geomspace(n_min, n_max, points)})
    k = 1.0 / 0.99
    rows = []
    for n in ns:
        q = math.exp(log_reg_upper_gamma(n, n / 0.99))
        bound = math.exp(n * (math.log(k) + 1.0 - k))
        rows.append([n, kappa, q, bound])
    return _emit_table("tail", config, ["n", "kappa", "tail_prob", "exp_bound"], rows, "tail", ctx)


def cmd_noise(raw: dict, ctx: RunContext) -> dict[str, str]:
    kind = _take(raw, "kind", str, "phase_diffusion")
    if kind not in ("phase_diffusion", "crosstalk"):
        raise ConfigError('noise.kind: expected "phase_diffusion" or "crosstalk"')
    r = _take(raw, "r", float, 1.5)
    n = _take(raw, "n", int, 50)
    bns_max = _take(raw, "beta_norm_sq_max", float, 130.0)
    points = _take(raw, "points", int, 27)
    angles = [float(a) for a in _take(raw, "angles_deg", list, [0.0, 1.0, 2.0])]
    shapes = [str(t) for t in _take(raw, "shapes", list, ["uniform", "single"])]
    for shape in shapes:
        if shape not in ("uniform", "single"):
            raise ConfigError('noise.shapes: entries must be "uniform" or "single"')
    if n < 1 or points < 1 or bns_max < 0:
        raise ConfigError("noise: need n >= 1, points >= 1, beta_norm_sq_max >= 0")
    config = {
        "command": "noise",
        "seed": ctx.seed,
        "format": ctx.fmt,
        "kind": kind,
        "r": r,
        "n": n,
        "beta_norm_sq_max": bns_max,
        "points": points,
        "angles_deg": angles,
        "shapes": shapes,
    }
    bns_axis = np.linspace(0.0, bns_max, points)

    def beta_for(shape: str, bns: float) -> np.ndarray:
        beta = np.zeros(n, dtype=np.complex128)
        if shape == "uniform":
            beta[:] = math.sqrt(bns / n)
        else:
            beta[0] = math.sqrt(bns)
        return beta

    cells = [(shape, angle, bns) for shape in shapes for angle in angles for bns in bns_axis]

    def cell_row(cell):
        shape, angle, bns = cell
        beta = beta_for(shape, float(bns))
        rad = math.radians(angle)
        try:
            env = phase_diffusion_g_sq(beta, r, rad) if kind == "phase_diffusion" else crosstalk_envelope(beta, r, rad)
        except ValueError as exc:
            raise ConfigError(f"noise: {exc}") from exc
        return [float(bns), shape, r, angle, env.g_sq, env.overhead]

    rows = _pmap(cell_row, cells, ctx.threads)
    angle_col = "delta_deg" if kind == "phase_diffusion" else "theta_deg"
    columns = ["beta_norm_sq", "shape_tag", "r", angle_col, "g_sq", "overhead"]
    return _emit_table("noise", config, columns, rows, "noise", ctx)


def cmd_game(raw: dict, ctx: RunContext) -> dict[str, str]:
    n = _take(raw, "n", int, 8)
    kappa = _take(raw, "kappa", float, 1.0)
    sigma = _take(raw, "sigma", float, 0.3)
    eps0 = _take(raw, "eps0", float, 0.245)
    rounds = _take(raw, "rounds", int, 10000)
    delta = _take(raw, "delta", float, 1.0 / 3.0)
    scheme = _scheme_from(_take(raw, "scheme", dict, {"r": 2.0}), "game.scheme")
    n_samples = raw.get("N", None)
    try:
        if n_samples is None:
            cfg = GameConfig.with_hoeffding_n(n, kappa, sigma, eps0, scheme, rounds, delta)
        else:
            cfg = GameConfig(n=n, kappa=kappa, sigma=sigma, eps0=eps0, scheme=scheme, N=int(n_samples), rounds=rounds)
    except ValueError as exc:
        raise ConfigError(f"game: {exc}") from exc
    config = {
        "command": "game",
        "seed": ctx.seed,
        "format": ctx.fmt,
        "n": n,
        "kappa": kappa,
        "sigma": sigma,
        "eps0": eps0,
        "rounds": rounds,
        "delta": delta,
        "scheme": scheme.to_dict(),
        "N": cfg.N,
    }
    outcomes = _pmap(lambda r: play_round(cfg, ctx.stream.substream(r)), range(rounds), ctx.threads)
    summary = summarize_rounds(cfg, outcomes)
    payload = {"summary": summary.to_dict()}
    if ctx.fmt == "csv":
        cols = list(summary.to_dict())
        return {"game.csv": _render_table("game", config, cols, [[summary.to_dict()[c] for c in cols]])}
    return {"game.json": _render_json("game", config, payload)}


_COMMANDS = {
    "fig2": cmd_fig2,
    "advantage": cmd_advantage,
    "complexity": cmd_complexity,
    "tail": cmd_tail,
    "noise": cmd_noise,
    "game": cmd_game,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvlearn",
        description="Config-driven experiment runner for random-displacement-channel learning.",
        epilog=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--config", required=True, help="JSON config with a 'command' discriminator")
    parser.add_argument("--seed", type=int, default=None, help="64-bit master seed (overrides config)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads (output is thread-count invariant)")
    parser.add_argument("--out", default=None, help="output directory (overrides config)")
    parser.add_argument("--format", choices=("csv", "json"), default=None, help="artifact format (overrides config)")
    parser.add_argument("--strict", action="store_true", help="exit 3 when bound preconditions are violated")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = json.loads(Path(args.config).read_text())
    except FileNotFoundError:
        print(f"config error: {args.config}: no such file", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"config error: {args.config}: {exc}", file=sys.stderr)
        return 2
    if not isinstance(raw, dict):
        print("config error: top level must be a JSON object", file=sys.stderr)
        return 2
    try:
        command = raw.get("command")
        if command not in _COMMANDS:
            raise ConfigError(f"command: expected one of {sorted(_COMMANDS)}, got {command!r}")
        seed = args.seed if args.seed is not None else _take(raw, "seed", int, 0)
        fmt = args.format if args.format is not None else _take(raw, "format", str, "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError('format: expected "csv" or "json"')
        out_dir = Path(args.out if args.out is not None else _take(raw, "out", str, "."))
        if args.threads < 1:
            raise ConfigError("threads: must be >= 1")
        ctx = RunContext(seed=int(seed), threads=args.threads, out_dir=out_dir, fmt=fmt, strict=args.strict)
        artifacts = _COMMANDS[command](raw, ctx)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericValidityError as exc:
        print(f"numeric-validity error: {exc}", file=sys.stderr)
        return 3
    ctx.out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in artifacts.items():
        (ctx.out_dir / name).write_text(text, encoding="utf-8", newline="\n")
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
