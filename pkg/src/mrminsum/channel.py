"""BPSK over AWGN.

Bit 1 is sent as +1 and bit 0 as -1, so a positive received value already
slices to 1. The received samples are handed to the decoders unscaled: every
Min-Sum operation is positively homogeneous, so scaling by 2/sigma^2 would
not change any decision.

SNR is per channel symbol (Es/N0) by default. ``convention="ebn0"`` reads it as
Eb/N0 instead, which lowers the per-symbol SNR by ``10 log10(rate)`` dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


CONVENTIONS = ("esn0", "ebn0")


@dataclass(frozen=True)
class ChannelConfig:
    """AWGN settings. ``rate`` is k/n; ``convention`` says how ``snr_db`` is read."""

    snr_db: float
    rate: float
    seed: int = 0
    convention: str = "esn0"

    def __post_init__(self):
        if not math.isfinite(self.snr_db):
            raise ValueError(f"snr_db must be finite, got {self.snr_db}")
        if not 0.0 < self.rate < 1.0:
            raise ValueError(f"rate must be in (0, 1), got {self.rate}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")

    @property
    def sigma(self) -> float:
        return noise_sigma(self.snr_db, self.rate, self.convention)


def noise_sigma(snr_db: float, rate: float, convention: str = "esn0") -> float:
    """Per-dimension noise standard deviation for unit-energy BPSK.

    ``esn0``: sigma^2 = 1 / (2 * 10^(snr/10)).
    ``ebn0``: sigma^2 = 1 / (2 * rate * 10^(snr/10)).
    """
    if convention == "esn0":
        return math.sqrt(1.0 / (2.0 * 10.0 ** (snr_db / 10.0)))
    if convention == "ebn0":
        return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (snr_db / 10.0)))
    raise ValueError(f"unknown SNR convention {convention!r}")


def frame_rng(seed: int, frame_index: int = 0) -> np.random.Generator:
    """Independent generator for one frame, derived from ``(seed, frame_index)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), frame_index])))


def modulate(bits) -> np.ndarray:
    b = np.asarray(bits)
    return np.where(b.astype(bool), 1.0, -1.0)


def add_awgn(x, cfg: ChannelConfig, frame_index: int = 0) -> np.ndarray:
    """Return ``x`` plus Gaussian noise; deterministic in ``(cfg.seed, frame_index)``."""
    x = np.asarray(x, dtype=np.float64)
    rng = frame_rng(cfg.seed, frame_index)
    return x + cfg.sigma * rng.standard_normal(x.shape)


def slice_bits(s) -> np.ndarray:
    """Hard decision: 1 where ``s > 0``, else 0."""
    return (np.asarray(s) > 0).astype(np.uint8)


def raw_ber(r, bits) -> float:
    """Fraction of positions where the sliced channel output differs from ``bits``."""
    r = np.asarray(r)
    if r.size == 0:
        return 0.0
    return raw_bit_errors(r, bits) / r.size


def raw_bit_errors(r, bits) -> int:
    r = np.asarray(r)
    b = np.asarray(bits)
    if r.shape != b.shape:
        raise ValueError(f"length mismatch: {r.shape} vs {b.shape}")
    return int(np.count_nonzero(slice_bits(r) != (b.astype(np.uint8) & 1)))
