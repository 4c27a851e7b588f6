"""Hyperparameter grid search over training-spec candidates.

The paper-style regularizers have no published values, so the harness exposes
a small helper that scores candidate training specs for one algorithm at a
fixed grid point and returns them best-first by after-denoising SSIM.
"""
from __future__ import annotations

from dataclasses import replace

from ..errors import ConfigError
from .config import ExperimentConfig, TrainSpec
from .sweep import evaluate_grid_point

__all__ = ["grid_search"]

_TRAINABLE = ("dae", "sparse_dae", "stacked_sdae")


def grid_search(cfg: ExperimentConfig, algorithm, candidates, value=None,
                seed=None):
    """Score TrainSpec candidates; returns [(spec, mean ssim_ad)] best-first.

    `value` and `seed` default to the first configured sweep value and seed;
    each candidate is evaluated on the same train/test split so scores are
    directly comparable.
    """
    if algorithm not in _TRAINABLE:
        raise ConfigError(f"cannot tune algorithm {algorithm!r}")
    candidates = list(candidates)
    if not candidates:
        raise ConfigError("need at least one candidate training spec")
    for cand in candidates:
        if not isinstance(cand, TrainSpec):
            raise ConfigError("candidates must be TrainSpec instances")
    if value is None:
        value = cfg.sweep.values[0]
    if seed is None:
        seed = cfg.sweep.seeds[0]
    scored = []
    for cand in candidates:
        local = replace(cfg, train=cand,
                        sweep=replace(cfg.sweep, algorithms=(algorithm,)))
        (row,) = evaluate_grid_point(local, value, seed)
        scored.append((cand, row.ssim_ad))
    scored.sort(key=lambda pair: pair[1], reverse=True)
    return scored
