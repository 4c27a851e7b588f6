"""SSIM and NMSE, used for every before/after-denoising comparison."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .errors import ConfigError, DomainError

__all__ = ["SsimParams", "nmse", "ssim", "ssim_stack"]


@dataclass
class SsimParams:
    window_size: int = 11
    window_sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    data_range: float = 1.0

    def __post_init__(self):
        if self.k1 <= 0 or self.k2 <= 0:
            raise ConfigError("stabilizers k1, k2 must be > 0")
        if self.window_size < 1 or self.window_sigma <= 0:
            raise ConfigError("invalid window")

    def window(self):
        half = (self.window_size - 1) / 2.0
        g = np.exp(-0.5 * ((np.arange(self.window_size) - half) / self.window_sigma) ** 2)
        w = np.outer(g, g)
        return w / w.sum()


def _local_stats(a, b, w):
    mu_a = fftconvolve(a, w, mode="valid")
    mu_b = fftconvolve(b, w, mode="valid")
    var_a = fftconvolve(a * a, w, mode="valid") - mu_a * mu_a
    var_b = fftconvolve(b * b, w, mode="valid") - mu_b * mu_b
    cov = fftconvolve(a * b, w, mode="valid") - mu_a * mu_b
    return mu_a, mu_b, var_a, var_b, cov


def ssim(a, b, params: SsimParams | None = None):
    """Mean structural similarity between two images in [0, 1].

    Local Gaussian-window statistics when the image fits the window, a single
    global-statistics comparison otherwise (small frontal-style images stay
    well defined).  Symmetric in its arguments; 1.0 for identical images.
    """
    if params is None:
        params = SsimParams()
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ConfigError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.ndim == 1:
        a = a[:, None]
        b = b[:, None]
    c1 = (params.k1 * params.data_range) ** 2
    c2 = (params.k2 * params.data_range) ** 2
    if min(a.shape) < params.window_size:
        mu_a, mu_b = a.mean(), b.mean()
        var_a, var_b = a.var(), b.var()
        cov = ((a - mu_a) * (b - mu_b)).mean()
    else:
        mu_a, mu_b, var_a, var_b, cov = _local_stats(a, b, params.window())
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def ssim_stack(stack, ref_stack, image_shape, params: SsimParams | None = None):
    """Column-wise SSIM of two vectorized image stacks; returns the per-column array."""
    stack = np.asarray(stack, dtype=float)
    ref_stack = np.asarray(ref_stack, dtype=float)
    if stack.shape != ref_stack.shape:
        raise ConfigError(f"shape mismatch {stack.shape} vs {ref_stack.shape}")
    rows, cols = image_shape
    if rows * cols != stack.shape[0]:
        raise ConfigError("image_shape inconsistent with stack pixel count")
    out = np.empty(stack.shape[1])
    for q in range(stack.shape[1]):
        out[q] = ssim(
            stack[:, q].reshape(rows, cols, order="F"),
            ref_stack[:, q].reshape(rows, cols, order="F"),
            params,
        )
    return out


def nmse(a, ref):
    """||a - ref||_F^2 / ||ref||_F^2."""
    a = np.asarray(a, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if a.shape != ref.shape:
        raise ConfigError(f"shape mismatch {a.shape} vs {ref.shape}")
    denom = float(np.sum(ref * ref))
    if denom == 0.0:
        raise DomainError("reference has zero energy")
    diff = a - ref
    return float(np.sum(diff * diff)) / denom
