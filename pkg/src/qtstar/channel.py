"""Averaged Galilean-fluctuation channels.

Random translations a ~ N(0, alpha dt) act in the velocity representation as the phase
exp(-i m (v - w) a / hbar) on W(v, w); random boosts u ~ N(0, beta dt) act in the
position representation as exp(i m (x - y) u / hbar) on W(x, y). Averaging gives the
Gaussian multipliers applied here. Kernels given in the other representation are
converted, multiplied and converted back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, GalileanConfig
from .kernel import DensityKernel, Rep, to_position_rep, to_velocity_rep

# "for all practical purposes zero", relative to the kernel's sup norm
FAPP_ZERO = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    rate: float
    delta_t: float
    mass: float
    hbar: float

    def __post_init__(self):
        if not (self.rate > 0 and self.mass > 0 and self.hbar > 0):
            raise DomainError("rate, mass and hbar must be positive")
        if not (math.isfinite(self.delta_t) and self.delta_t >= 0):
            raise DomainError(f"delta_t must be non-negative, got {self.delta_t!r}")

    @property
    def variance(self) -> float:
        return self.rate * self.delta_t

    @property
    def width(self) -> float:
        """Width of the damping Gaussian across the diagonal (inf for dt = 0)."""
        if self.delta_t == 0:
            return math.inf
        return self.hbar / (self.mass * math.sqrt(self.variance))

    @property
    def coefficient(self) -> float:
        # exponent of the multiplier per squared separation
        return self.mass ** 2 * self.variance / (2.0 * self.hbar ** 2)


def translation_params(cfg: GalileanConfig, mass: float, delta_t: float | None = None) -> ChannelParams:
    dt = cfg.resolved_delta_t(mass) if delta_t is None else delta_t
    return ChannelParams(cfg.alpha, dt, mass, cfg.hbar)


def boost_params(cfg: GalileanConfig, mass: float, delta_t: float | None = None) -> ChannelParams:
    dt = cfg.resolved_delta_t(mass) if delta_t is None else delta_t
    return ChannelParams(cfg.beta, dt, mass, cfg.hbar)


def damping_profile(p: ChannelParams, separation) -> np.ndarray | float:
    sep = np.asarray(separation, dtype=float)
    if np.any(sep < 0):
        raise DomainError("separation must be non-negative")
    out = np.exp(-p.coefficient * sep ** 2)
    return float(out) if out.ndim == 0 else out


def _multiplier(points: np.ndarray, p: ChannelParams) -> np.ndarray:
    diff = points[:, None] - points[None, :]
    return np.exp(-p.coefficient * diff ** 2)


def _apply(k: DensityKernel, p: ChannelParams, rep: Rep) -> DensityKernel:
    if p.delta_t == 0:
        return k
    if abs(p.mass - k.mass) > 1e-12 * k.mass or abs(p.hbar - k.hbar) > 1e-12 * k.hbar:
        raise DomainError("channel parameters and kernel disagree on mass or hbar")
    natural = k.in_rep(rep)
    out = natural.with_data(natural.data * _multiplier(natural.grid.points, p))
    return out.in_rep(k.rep)


def apply_translation_channel(k: DensityKernel, p: ChannelParams) -> DensityKernel:
    return _apply(k, p, Rep.VELOCITY)


def apply_boost_channel(k: DensityKernel, p: ChannelParams) -> DensityKernel:
    return _apply(k, p, Rep.POSITION)


def apply_galilean_decoherence(k: DensityKernel, cfg: GalileanConfig, delta_t: float | None = None,
                               order: str = "SB") -> DensityKernel:
    """Random translations followed by random boosts (``order="BS"`` swaps them)."""
    ps = translation_params(cfg, k.mass, delta_t)
    pb = boost_params(cfg, k.mass, delta_t)
    if order == "SB":
        return apply_boost_channel(apply_translation_channel(k, ps), pb)
    if order == "BS":
        return apply_translation_channel(apply_boost_channel(k, pb), ps)
    raise ValueError(f"order must be 'SB' or 'BS', got {order!r}")


@dataclass(frozen=True)
class MonteCarloAverage:
    kernel: DensityKernel
    standard_error: np.ndarray
    samples: int


def monte_carlo_channel(k: DensityKernel, p: ChannelParams, which: str, samples: int = 100_000,
                        seed: int = 0, chunk: int = 2_000) -> MonteCarloAverage:
    """Average of the unitarily transformed kernel over sampled translations or boosts.

    Each sample acts on W by the phase exp(-/+ i m (g_i - g_j) s / hbar), in the
    velocity representation for translations and the position representation for
    boosts. On a uniform grid the phase depends only on i - j, so the empirical mean
    is accumulated over the 2n - 1 distinct differences. The result (and the
    per-entry standard error) is returned in that natural representation.
    """
    if which not in ("translation", "boost"):
        raise ValueError("which must be 'translation' or 'boost'")
    rep = Rep.VELOCITY if which == "translation" else Rep.POSITION
    sign = -1.0 if which == "translation" else 1.0
    natural = k.in_rep(rep)
    n = natural.grid.n
    offsets = np.arange(-(n - 1), n) * natural.grid.step
    rng = np.random.default_rng(seed)
    scale = math.sqrt(p.variance)
    total = np.zeros(offsets.size, dtype=complex)
    total_sq = np.zeros(offsets.size)
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        s = rng.normal(0.0, scale, size=m)
        ph = np.exp(sign * 1j * (p.mass / p.hbar) * np.outer(s, offsets))
        total += ph.sum(axis=0)
        total_sq += (np.abs(ph) ** 2).sum(axis=0)
        done += m
    mean = total / samples
    var = np.maximum(total_sq / samples - np.abs(mean) ** 2, 0.0)
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :] + (n - 1)
    factor = mean[diff]
    se = np.sqrt(var[diff] / samples) * np.abs(natural.data)
    out = natural.with_data(natural.data * factor)
    return MonteCarloAverage(out, se, samples)
