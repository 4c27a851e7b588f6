"""Comparison denoisers: truncated-SVD subspace filtering and Haar wavelet
coefficient thresholding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "SvdFilterConfig",
    "WaveletFilterConfig",
    "haar_analysis",
    "haar_synthesis",
    "svd_denoise",
    "wavelet_denoise",
]

_SQRT2 = np.sqrt(2.0)


@dataclass
class SvdFilterConfig:
    rank: int | None = None
    energy_fraction: float | None = None  # smallest rank capturing this spectral energy

    def __post_init__(self):
        if self.rank is not None and self.energy_fraction is not None:
            raise ConfigError("choose either rank or energy_fraction, not both")
        if self.rank is None and self.energy_fraction is None:
            self.energy_fraction = 0.95
        if self.rank is not None and self.rank < 1:
            raise ConfigError("rank must be >= 1")
        if self.energy_fraction is not None and not (0.0 < self.energy_fraction <= 1.0):
            raise ConfigError("energy_fraction must lie in (0, 1]")


@dataclass
class WaveletFilterConfig:
    levels: int = 2
    keep_fraction: float = 0.1  # fraction of largest-magnitude coefficients retained

    def __post_init__(self):
        if self.levels < 1:
            raise ConfigError("levels must be >= 1")
        if not (0.0 < self.keep_fraction <= 1.0):
            raise ConfigError("keep_fraction must lie in (0, 1]")


def svd_denoise(X, cfg: SvdFilterConfig | None = None):
    """Best low-rank approximation of X; the retained rank is either fixed or
    the smallest one holding the configured fraction of squared singular values."""
    cfg = cfg or SvdFilterConfig()
    X = np.asarray(X, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ConfigError("input contains non-finite entries")
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    if cfg.rank is not None:
        k = cfg.rank
        if k > len(s):
            raise ConfigError(f"rank {k} exceeds min dimension {len(s)}")
    else:
        energy = np.cumsum(s * s)
        total = energy[-1]
        if total == 0.0:
            return np.zeros_like(X)
        k = int(np.searchsorted(energy, cfg.energy_fraction * total) + 1)
        k = min(k, len(s))
    return (U[:, :k] * s[:k]) @ Vt[:k]


def _haar_fwd_1d(x, axis):
    a = np.take(x, range(0, x.shape[axis], 2), axis=axis)
    b = np.take(x, range(1, x.shape[axis], 2), axis=axis)
    return (a + b) / _SQRT2, (a - b) / _SQRT2


def _haar_inv_1d(lo, hi, axis):
    a = (lo + hi) / _SQRT2
    b = (lo - hi) / _SQRT2
    out_shape = list(lo.shape)
    out_shape[axis] *= 2
    out = np.empty(out_shape, dtype=float)
    sl_even = [slice(None)] * lo.ndim
    sl_odd = [slice(None)] * lo.ndim
    sl_even[axis] = slice(0, None, 2)
    sl_odd[axis] = slice(1, None, 2)
    out[tuple(sl_even)] = a
    out[tuple(sl_odd)] = b
    return out


def haar_analysis(img, levels):
    """Orthonormal 2-D Haar transform, coefficients in quadrant (Mallat) layout.

    Both dimensions must be divisible by 2**levels.
    """
    img = np.asarray(img, dtype=float)
    n = 2 ** levels
    if img.shape[0] % n or img.shape[1] % n:
        raise ConfigError(f"dimensions {img.shape} not divisible by 2^{levels}")
    coef = img.copy()
    r, c = img.shape
    for _ in range(levels):
        block = coef[:r, :c]
        lo_r, hi_r = _haar_fwd_1d(block, axis=0)
        stacked = np.concatenate([lo_r, hi_r], axis=0)
        lo_c, hi_c = _haar_fwd_1d(stacked, axis=1)
        coef[:r, :c] = np.concatenate([lo_c, hi_c], axis=1)
        r //= 2
        c //= 2
    return coef


def haar_synthesis(coef, levels):
    coef = np.asarray(coef, dtype=float)
    n = 2 ** levels
    if coef.shape[0] % n or coef.shape[1] % n:
        raise ConfigError(f"dimensions {coef.shape} not divisible by 2^{levels}")
    out = coef.copy()
    sizes = [(coef.shape[0] >> k, coef.shape[1] >> k) for k in range(levels)]
    for r, c in reversed(sizes):
        block = out[:r, :c]
        lo_c = block[:, : c // 2]
        hi_c = block[:, c // 2:]
        stacked = _haar_inv_1d(lo_c, hi_c, axis=1)
        lo_r = stacked[: r // 2]
        hi_r = stacked[r // 2:]
        out[:r, :c] = _haar_inv_1d(lo_r, hi_r, axis=0)
    return out


def wavelet_denoise(img, cfg: WaveletFilterConfig | None = None):
    """Keep the top keep_fraction of Haar coefficients by magnitude, zero the
    rest, and synthesize.  Non-divisible sizes are padded reflectively."""
    cfg = cfg or WaveletFilterConfig()
    img = np.asarray(img, dtype=float)
    n = 2 ** cfg.levels
    if cfg.levels > int(np.log2(min(img.shape))):
        raise ConfigError(f"too many levels {cfg.levels} for image {img.shape}")
    pad_r = (-img.shape[0]) % n
    pad_c = (-img.shape[1]) % n
    padded = np.pad(img, ((0, pad_r), (0, pad_c)), mode="reflect") if pad_r or pad_c else img
    coef = haar_analysis(padded, cfg.levels)
    if cfg.keep_fraction < 1.0:
        keep = max(1, int(np.ceil(cfg.keep_fraction * coef.size)))
        flat = np.abs(coef).ravel()
        if keep < coef.size:
            cutoff = np.partition(flat, coef.size - keep)[coef.size - keep]
            coef = np.where(np.abs(coef) >= cutoff, coef, 0.0)
    out = haar_synthesis(coef, cfg.levels)
    return out[: img.shape[0], : img.shape[1]]
