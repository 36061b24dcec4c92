"""Deterministic synthetic heteroscedastic regression sets.

Random numbers come from a counter-based SplitMix64 stream: draw ``k`` of
record ``i`` is a pure function of ``(seed, i, k)``, so any subset of records
can be regenerated independently and in any order. Gaussian variates use the
inverse normal CDF on open-interval uniforms.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import ndtri

from uqeval.data import EvaluationSet
from uqeval.errors import InvalidConfig

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MASK64 = (1 << 64) - 1

# per-record draw slots; member jitter draws follow
_SIGMA, _LATENT, _NOISE, _SHIFT = range(4)
_N_FIXED = 4


@dataclass(frozen=True)
class SynthConfig:
    n: int = 1000
    m: int = 5
    seed: int = 0
    sigma_lo: float = 0.5
    sigma_hi: float = 2.0
    miscalibration: float = 1.0
    shift_fraction: float = 0.0
    shift_scale: float = 0.0
    member_jitter: float = 0.0
    latent_scale: float = 10.0

    def __post_init__(self):
        checks = [
            (self.n >= 1, "n must be >= 1"),
            (self.m >= 1, "m must be >= 1"),
            (0 <= self.seed <= _MASK64, "seed must be a 64-bit unsigned integer"),
            (0 < self.sigma_lo <= self.sigma_hi, "need 0 < sigma_lo <= sigma_hi"),
            (self.miscalibration > 0, "miscalibration must be > 0"),
            (0 <= self.shift_fraction <= 1, "shift_fraction must be in [0, 1]"),
            (self.shift_scale >= 0, "shift_scale must be >= 0"),
            (self.member_jitter >= 0, "member_jitter must be >= 0"),
            (self.latent_scale >= 0, "latent_scale must be >= 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InvalidConfig(msg)
        if not np.isfinite([self.sigma_lo, self.sigma_hi, self.miscalibration,
                            self.shift_scale, self.member_jitter,
                            self.latent_scale]).all():
            raise InvalidConfig("synth parameters must be finite")

    @property
    def sigma_range(self):
        return (self.sigma_lo, self.sigma_hi)

    def to_dict(self) -> dict:
        return asdict(self)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    """Open-interval (0, 1) uniforms at the given SplitMix64 stream positions."""
    base = _mix64(np.array([seed], dtype=np.uint64))[0]
    with np.errstate(over="ignore"):
        z = base + (counters.astype(np.uint64) + np.uint64(1)) * _GAMMA
        bits = _mix64(z) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * 2.0**-53


def generate(config: SynthConfig) -> EvaluationSet:
    n, m = config.n, config.m
    stride = _N_FIXED + m
    counters = np.arange(n, dtype=np.uint64)[:, None] * np.uint64(stride) + np.arange(
        stride, dtype=np.uint64
    )
    u = uniforms(config.seed, counters)

    sigma = config.sigma_lo + (config.sigma_hi - config.sigma_lo) * u[:, _SIGMA]
    latent = config.latent_scale * ndtri(u[:, _LATENT])
    y_true = latent + sigma * ndtri(u[:, _NOISE])
    shifted = u[:, _SHIFT] < config.shift_fraction
    # shifted records are biased but report the same variance
    bias = np.where(shifted, config.shift_scale, 0.0)
    means = latent[:, None] + config.member_jitter * ndtri(u[:, _N_FIXED:]) + bias[:, None]
    variances = np.repeat(((config.miscalibration * sigma) ** 2)[:, None], m, axis=1)
    ids = [str(i) for i in range(n)]
    return EvaluationSet.from_arrays(ids, y_true, means, variances)


def shifted_mask(config: SynthConfig) -> np.ndarray:
    """Which records :func:`generate` biased, recomputed from the same stream."""
    stride = _N_FIXED + config.m
    counters = np.arange(config.n, dtype=np.uint64) * np.uint64(stride) + np.uint64(_SHIFT)
    return uniforms(config.seed, counters) < config.shift_fraction
