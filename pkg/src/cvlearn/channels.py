"""Random displacement channels as Hermitian Gaussian mixtures.

A channel is stored in canonical form: the weight of the zero-center peak
plus one representative (weight, center) per Hermitian pair; the mate
(conj(weight), -center) is implied.  This makes the Hermitian-closure
invariant structural and keeps eval_lambda exactly conjugate-symmetric.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import DimensionMismatchError, RandomStream, as_complex_vector

__all__ = [
    "ChannelValidationError",
    "ChannelSpec",
    "DisplacementSample",
    "depolarizing",
    "three_peak",
    "five_peak_example",
    "eval_lambda",
    "eval_p",
    "sample_displacement",
]

_NORMALIZATION_TOL = 1e-12
_NONNEG_TOL = 1e-12
_P_CLAMP = -1e-12
_MAX_REJECTION_ROUNDS = 1_000_000


class ChannelValidationError(ValueError):
    """Channel definition violates a structural invariant."""


def _norm_sq_rows(m: np.ndarray) -> np.ndarray:
    return np.sum(m.real**2 + m.imag**2, axis=-1)


def _center_key(g: np.ndarray) -> bytes:
    # adding 0.0 canonicalizes -0.0 components produced by negation
    return (np.asarray(g, dtype=np.complex128) + 0.0).tobytes()


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """Hermitian Gaussian-mixture random displacement channel.

    ``pair_weights[k]``/``pair_centers[k]`` hold one member of each ±center
    pair; ``zero_weight`` is the (real, positive) weight of the center-0 peak.
    ``pair_widths`` optionally overrides the common width per pair, in which
    case only eval_lambda is available (non-samplable).
    """

    n: int
    sigma: float
    zero_weight: float
    pair_weights: np.ndarray
    pair_centers: np.ndarray
    pair_widths: np.ndarray | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "zero_weight", float(self.zero_weight))
        pw = np.asarray(self.pair_weights, dtype=np.complex128).reshape(-1)
        pc = np.asarray(self.pair_centers, dtype=np.complex128)
        if pc.size == 0:
            pc = pc.reshape(0, self.n)
        if pc.ndim != 2 or pc.shape != (pw.shape[0], self.n):
            raise ChannelValidationError(
                f"pair_centers must have shape (k, n)={pw.shape[0], self.n}, got {pc.shape}"
            )
        widths = self.pair_widths
        if widths is not None:
            widths = np.asarray(widths, dtype=np.float64).reshape(-1)
            if widths.shape != pw.shape:
                raise ChannelValidationError("pair_widths must match pair_weights")
            widths.setflags(write=False)
        pw.setflags(write=False)
        pc.setflags(write=False)
        object.__setattr__(self, "pair_weights", pw)
        object.__setattr__(self, "pair_centers", pc)
        object.__setattr__(self, "pair_widths", widths)
        self._validate()

    # -- invariants ---------------------------------------------------------

    def _validate(self):
        if self.n < 1:
            raise ChannelValidationError("n must be a positive integer")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ChannelValidationError("sigma must be finite and > 0 (sigma = 0 is rejected)")
        if not (math.isfinite(self.zero_weight) and self.zero_weight > 0):
            raise ChannelValidationError("the zero-center peak must carry real weight > 0")
        if not np.all(np.isfinite(self.pair_weights)) or not np.all(np.isfinite(self.pair_centers)):
            raise ChannelValidationError("peak weights/centers must be finite")
        if self.pair_widths is not None and not np.all(self.pair_widths > 0):
            raise ChannelValidationError("pair widths must be > 0")
        if np.any(_norm_sq_rows(self.pair_centers) == 0.0):
            raise ChannelValidationError("pair centers must be nonzero (zero peak is separate)")
        # distinct peak locations across the expanded ±center list
        seen = set()
        for row in self.pair_centers:
            for signed in (row, -row):
                key = _center_key(signed)
                if key in seen:
                    raise ChannelValidationError("duplicate peak centers; merge weights first")
                seen.add(key)
        norm = self.zero_weight + float(
            np.sum(2.0 * self.pair_weights.real * np.exp(-_norm_sq_rows(self.pair_centers) / (2.0 * self._widths_sq())))
        )
        if abs(norm - 1.0) > _NORMALIZATION_TOL:
            raise ChannelValidationError(f"normalization violated: lambda(0) = {norm!r}")
        if 2.0 * float(np.sum(np.abs(self.pair_weights))) > self.zero_weight + _NONNEG_TOL:
            raise ChannelValidationError(
                "nonnegativity certificate violated: sum of off-center |weights| exceeds the zero-peak weight"
            )

    def _widths_sq(self) -> np.ndarray:
        if self.pair_widths is None:
            return np.full(self.pair_weights.shape[0], self.sigma**2) if self.pair_weights.size else np.empty(0)
        return self.pair_widths**2

    # -- derived ------------------------------------------------------------

    @property
    def samplable(self) -> bool:
        """True when every peak shares the common width (exact rejection works)."""
        return self.pair_widths is None

    @property
    def total_weight(self) -> float:
        """M = Σ|c_k| over all peaks; bounds the modulation, sets rejection cost."""
        return self.zero_weight + 2.0 * float(np.sum(np.abs(self.pair_weights)))

    def peaks(self) -> list[tuple[complex, np.ndarray]]:
        """Expanded flat peak list: zero peak first, then each pair and its mate."""
        out = [(complex(self.zero_weight), np.zeros(self.n, dtype=np.complex128))]
        for c, g in zip(self.pair_weights, self.pair_centers):
            out.append((complex(c), np.array(g)))
            out.append((complex(np.conj(c)), -np.array(g)))
        return out

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        """Canonical JSON document; round-trips bit-exactly for finite doubles."""
        if self.pair_widths is not None:
            raise ChannelValidationError("per-peak widths are not part of the JSON schema")
        peaks = [
            {"w": [float(c.real), float(c.imag)], "center": [[float(z.real), float(z.imag)] for z in g]}
            for c, g in self.peaks()
        ]
        return json.dumps({"n": self.n, "sigma": self.sigma, "peaks": peaks}, separators=(",", ":"))

    @classmethod
    def from_json(cls, document: str) -> "ChannelSpec":
        try:
            data = json.loads(document)
            n = int(data["n"])
            sigma = float(data["sigma"])
            peaks = [
                (complex(p["w"][0], p["w"][1]), np.array([complex(z[0], z[1]) for z in p["center"]]))
                for p in data["peaks"]
            ]
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ChannelValidationError(f"malformed channel document: {exc}") from exc
        return cls.from_peaks(n, sigma, peaks)

    @classmethod
    def from_peaks(cls, n: int, sigma: float, peaks) -> "ChannelSpec":
        """Build from a flat (weight, center) list, checking Hermitian closure.

        Duplicate centers are merged by summing weights; every nonzero-center
        peak must have its (conj(weight), -center) mate present.
        """
        merged: dict[bytes, tuple[np.ndarray, complex]] = {}
        order: list[bytes] = []
        for w, center in peaks:
            g = as_complex_vector(center, n=int(n))
            key = _center_key(g)
            if key in merged:
                merged[key] = (g, merged[key][1] + complex(w))
            else:
                merged[key] = (g, complex(w))
                order.append(key)
        zero = _center_key(np.zeros(int(n), dtype=np.complex128))
        zero_weight = 0.0 + 0.0j
        if zero in merged:
            zero_weight = merged.pop(zero)[1]
            order.remove(zero)
        if abs(zero_weight.imag) > _NORMALIZATION_TOL:
            raise ChannelValidationError("the zero-center peak must have real weight")
        reps: list[tuple[complex, np.ndarray]] = []
        used: set[bytes] = set()
        for key in order:
            if key in used:
                continue
            g, w = merged[key]
            mate_key = _center_key(-g)
            if mate_key == key:  # cannot happen for nonzero g, defensive
                raise ChannelValidationError("nonzero peak equal to its own mate")
            if mate_key not in merged or mate_key in used:
                raise ChannelValidationError(f"Hermitian closure violated: no mate for center {g!r}")
            mate_w = merged[mate_key][1]
            if abs(mate_w - np.conj(w)) > _NORMALIZATION_TOL:
                raise ChannelValidationError(
                    f"Hermitian closure violated: mate weight {mate_w!r} != conj({w!r})"
                )
            used.add(key)
            used.add(mate_key)
            reps.append((w, g))
        return cls(
            n=int(n),
            sigma=float(sigma),
            zero_weight=zero_weight.real,
            pair_weights=np.array([w for w, _ in reps], dtype=np.complex128),
            pair_centers=(
                np.array([g for _, g in reps], dtype=np.complex128)
                if reps
                else np.empty((0, int(n)), dtype=np.complex128)
            ),
        )

    def digest(self) -> str:
        """SHA-256 of the canonical JSON document."""
        return hashlib.sha256(self.to_json().encode()).hexdigest()


@dataclass(frozen=True)
class DisplacementSample:
    alpha: np.ndarray
    acceptance_trials: int


# -- builders ----------------------------------------------------------------


def depolarizing(n: int, sigma: float) -> ChannelSpec:
    """Single-peak channel: lambda(beta) = exp(-|beta|^2 / 2 sigma^2)."""
    return ChannelSpec(
        n=n,
        sigma=sigma,
        zero_weight=1.0,
        pair_weights=np.empty(0, dtype=np.complex128),
        pair_centers=np.empty((0, int(n)), dtype=np.complex128),
    )


def three_peak(n: int, gamma, eps0: float, sigma: float) -> ChannelSpec:
    """Channel with peaks at 0 and ±gamma, weights (1, ±2i·eps0).

    gamma = 0 collapses the signal peaks and returns the depolarizing
    channel.  eps0 must lie in (0, 0.25]: above 0.25 the displacement
    density p would go negative.
    """
    g = as_complex_vector(gamma, n=int(n))
    eps0 = float(eps0)
    if eps0 > 0.25:
        raise ChannelValidationError("eps0 > 0.25 violates nonnegativity (4*eps0 must be <= 1)")
    if eps0 <= 0:
        raise ValueError("eps0 must be positive; use depolarizing() for the eps0 = 0 limit")
    if not np.any(g):
        return depolarizing(n, sigma)
    return ChannelSpec(
        n=n,
        sigma=sigma,
        zero_weight=1.0,
        pair_weights=np.array([2j * eps0], dtype=np.complex128),
        pair_centers=g.reshape(1, -1),
    )


def five_peak_example(sigma: float, gamma: complex) -> ChannelSpec:
    """Single-mode channel with peaks {(1,0), (1/4,±gamma), (-1/4,±i·gamma)}."""
    g = complex(gamma)
    if g == 0:
        return depolarizing(1, sigma)
    return ChannelSpec(
        n=1,
        sigma=sigma,
        zero_weight=1.0,
        pair_weights=np.array([0.25, -0.25], dtype=np.complex128),
        pair_centers=np.array([[g], [1j * g]], dtype=np.complex128),
    )


# -- evaluation ---------------------------------------------------------------


def _as_batch(points, n: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(points, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim == 1:
        if arr.shape[0] != n:
            raise DimensionMismatchError(f"expected length {n}, got {arr.shape[0]}")
        return arr.reshape(1, n), True
    if arr.ndim == 2 and arr.shape[1] == n:
        return arr, False
    raise DimensionMismatchError(f"expected shape (n,) or (m, n) with n={n}, got {arr.shape}")


def eval_lambda(spec: ChannelSpec, beta):
    """Characteristic function Σ_k c_k exp(-|beta - gamma_k|^2 / 2 sigma_k^2).

    Accepts a single vector (returns a complex scalar) or an (m, n) batch.
    Each Hermitian pair is summed before accumulation, so
    eval_lambda(spec, -beta) == conj(eval_lambda(spec, beta)) exactly.
    """
    b, single = _as_batch(beta, spec.n)
    val = spec.zero_weight * np.exp(-_norm_sq_rows(b) / (2.0 * spec.sigma**2)) + 0j
    widths_sq = spec._widths_sq()
    for c, g, s2 in zip(spec.pair_weights, spec.pair_centers, widths_sq):
        t_plus = complex(c) * np.exp(-_norm_sq_rows(b - g) / (2.0 * s2))
        t_minus = complex(np.conj(c)) * np.exp(-_norm_sq_rows(b + g) / (2.0 * s2))
        val = val + (t_plus + t_minus)
    return complex(val[0]) if single else val


def eval_p(spec: ChannelSpec, alpha):
    """Displacement density p(alpha) = (2σ²/π)^n e^{-2σ²|α|²} · m(α).

    The modulation m(α) = c0 + Σ 2·Re(c_k e^{2i·Im(γ_k†α)}) is real by
    Hermitian closure and nonnegative by the certificate; float noise at
    modulation zeros is clamped at -1e-12.
    """
    if not spec.samplable:
        raise ChannelValidationError("per-peak widths: density and sampling are unavailable")
    a, single = _as_batch(alpha, spec.n)
    mod = _modulation(spec, a)
    pref = (2.0 * spec.sigma**2 / math.pi) ** spec.n * np.exp(-2.0 * spec.sigma**2 * _norm_sq_rows(a))
    p = pref * mod
    if np.any(p < _P_CLAMP):
        raise ChannelValidationError("density evaluated significantly below zero; invalid channel")
    p = np.maximum(p, 0.0)
    return float(p[0]) if single else p


def _modulation(spec: ChannelSpec, alpha_batch: np.ndarray) -> np.ndarray:
    mod = np.full(alpha_batch.shape[0], spec.zero_weight)
    for c, g in zip(spec.pair_weights, spec.pair_centers):
        # Im(γ†α) per row; kernel e^{γ†α - α†γ} has unit modulus
        phase = 2.0 * np.imag(alpha_batch @ np.conj(g))
        mod = mod + 2.0 * (c.real * np.cos(phase) - c.imag * np.sin(phase))
    return mod


# -- sampling -----------------------------------------------------------------


def sample_displacements_batch(spec: ChannelSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` exact samples of p via rejection from the zero-peak Gaussian.

    Proposal: per-quadrature N(0, 1/(4σ²)); accept with probability m(α)/M.
    Hard cap of 1e6 rounds per sample (expected rounds = M <= 2).
    """
    if not spec.samplable:
        raise ChannelValidationError("per-peak widths: density and sampling are unavailable")
    if count < 0:
        raise ValueError("count must be >= 0")
    out = np.empty((count, spec.n), dtype=np.complex128)
    pending = count
    idx = np.arange(count)
    total = spec.total_weight
    std = 1.0 / (2.0 * spec.sigma)
    rounds = 0
    while pending:
        rounds += 1
        if rounds > _MAX_REJECTION_ROUNDS:
            raise RuntimeError("rejection sampling exceeded the 1e6-trial cap")
        draws = rng.standard_normal((pending, spec.n, 2)) * std
        cand = draws[..., 0] + 1j * draws[..., 1]
        u = rng.random(pending)
        accept = u * total < _modulation(spec, cand)
        out[idx[accept]] = cand[accept]
        idx = idx[~accept]
        pending = idx.size
    return out


def sample_displacement(spec: ChannelSpec, stream: RandomStream) -> DisplacementSample:
    """Draw one displacement; acceptance_trials counts proposals consumed."""
    if not spec.samplable:
        raise ChannelValidationError("per-peak widths: density and sampling are unavailable")
    rng = stream.generator()
    total = spec.total_weight
    std = 1.0 / (2.0 * spec.sigma)
    for trial in range(1, _MAX_REJECTION_ROUNDS + 1):
        draws = rng.standard_normal((spec.n, 2)) * std
        cand = draws[:, 0] + 1j * draws[:, 1]
        if rng.random() * total < float(_modulation(spec, cand.reshape(1, -1))[0]):
            return DisplacementSample(alpha=cand, acceptance_trials=trial)
    raise RuntimeError("rejection sampling exceeded the 1e6-trial cap")
