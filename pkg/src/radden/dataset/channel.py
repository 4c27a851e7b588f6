"""Parametric multipath surrogate for the wall propagation channel.

The channel is a sum of a (possibly attenuated) direct term, exponentially
decaying in-wall ringing taps, and lateral-wall image reflections.  Stochastic
realizations perturb tap gains and delays with seeded Gaussian jitter so each
realization index is deterministic and independent.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DomainError

__all__ = ["ChannelModel", "WallClass", "channel_response", "SPEED_OF_LIGHT"]

SPEED_OF_LIGHT = 3.0e8  # m/s, radar convention


class WallClass(enum.Enum):
    FREE_SPACE = "free_space"
    LOW_CONDUCTIVITY = "low"
    MEDIUM_CONDUCTIVITY = "medium"
    HIGH_CONDUCTIVITY = "high"


# per-class defaults: direct-path gain, ringing decay, image-reflection gains
_CLASS_DEFAULTS = {
    WallClass.FREE_SPACE: dict(direct_gain=1.0, tap_decay=0.0, image_gains=()),
    WallClass.LOW_CONDUCTIVITY: dict(direct_gain=0.35, tap_decay=0.55,
                                     image_gains=(0.15, 0.08)),
    WallClass.MEDIUM_CONDUCTIVITY: dict(direct_gain=0.05, tap_decay=0.3,
                                        image_gains=(0.55, 0.35)),
    WallClass.HIGH_CONDUCTIVITY: dict(direct_gain=0.0, tap_decay=0.0,
                                      image_gains=(0.85, 0.5)),
}


@dataclass
class ChannelModel:
    wall_class: WallClass = WallClass.FREE_SPACE
    epsilon_r: float = 4.0
    sigma_s_per_m: float = 0.05
    relative_spread: float = 0.3
    tap_count: int = 4
    image_count: int = 2
    realizations: int = 1
    seed: int = 0
    wall_thickness: float = 0.2
    image_offsets: tuple[float, ...] = (1.0, 2.0)  # lateral wall distances, m
    # explicit overrides; None picks the wall-class default
    direct_gain: float | None = None
    tap_decay: float | None = None
    image_gains: tuple[float, ...] | None = None

    def __post_init__(self):
        if isinstance(self.wall_class, str):
            self.wall_class = WallClass(self.wall_class)
        if self.realizations < 1:
            raise ConfigError("realization count M must be >= 1")
        if self.relative_spread < 0:
            raise ConfigError("relative_spread must be >= 0")
        defaults = _CLASS_DEFAULTS[self.wall_class]
        if self.direct_gain is None:
            self.direct_gain = defaults["direct_gain"]
        if self.tap_decay is None:
            self.tap_decay = defaults["tap_decay"]
        if self.image_gains is None:
            self.image_gains = defaults["image_gains"]
        if self.wall_class is WallClass.FREE_SPACE:
            self.tap_count = 0
            self.image_count = 0
        self.image_count = min(self.image_count, len(self.image_gains),
                               len(self.image_offsets))
        if self.wall_class is WallClass.LOW_CONDUCTIVITY and self.tap_count < 1:
            raise ConfigError("low-conductivity walls need at least one ringing tap")

    @property
    def ring_delay_step(self):
        """In-wall round-trip delay: 2 * thickness * sqrt(eps_r) / c."""
        return 2.0 * self.wall_thickness * np.sqrt(self.epsilon_r) / SPEED_OF_LIGHT

    def _jitter(self, eta):
        """Per-realization multiplicative gain and additive delay jitter.

        Deterministic in (seed, eta); realization 0 of the stream is never
        used so free-space stays exactly analytic.
        """
        n_terms = 1 + self.tap_count + self.image_count
        rng = np.random.default_rng([self.seed, int(eta)])
        gains = 1.0 + self.relative_spread * rng.standard_normal(n_terms)
        delays = self.relative_spread * self.ring_delay_step * rng.standard_normal(n_terms)
        return gains, delays


def channel_response(channel: ChannelModel, rho, f, eta):
    """Complex one-way channel response H at ground range rho and frequency f.

    Free space is exactly exp(-j 2 pi f rho / c) / sqrt(rho); walls add the
    ringing taps and lateral-image terms of the surrogate model.  `rho` and
    `f` broadcast together.
    """
    rho = np.asarray(rho, dtype=float)
    f = np.asarray(f, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("ground range rho must be > 0")
    if not (1 <= int(eta) <= channel.realizations):
        raise ConfigError(
            f"realization index {eta} outside 1..{channel.realizations}"
        )
    c = SPEED_OF_LIGHT
    direct = np.exp(-2j * np.pi * f * rho / c) / np.sqrt(rho)
    if channel.wall_class is WallClass.FREE_SPACE:
        return direct
    gains, delays = channel._jitter(eta)
    H = channel.direct_gain * gains[0] * direct
    step = channel.ring_delay_step
    for k in range(1, channel.tap_count + 1):
        g = channel.direct_gain * channel.tap_decay ** k * gains[k]
        delay = k * step + delays[k]
        H = H + g * np.exp(-2j * np.pi * f * (rho / c + delay)) / np.sqrt(rho)
    for m in range(channel.image_count):
        idx = 1 + channel.tap_count + m
        path = np.hypot(rho, 2.0 * channel.image_offsets[m])
        g = channel.image_gains[m] * gains[idx]
        delay = delays[idx]
        H = H + g * np.exp(-2j * np.pi * f * (path / c + delay)) / np.sqrt(path)
    return H
