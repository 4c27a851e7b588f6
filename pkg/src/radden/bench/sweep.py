"""Grid sweeps: train every algorithm at every grid point and record metrics.

Each (grid value, seed) pair is an independent job, so jobs may run in a
process pool; the CSV is assembled in sorted order regardless of completion
order.  Timing columns are excluded from the reproducibility hash.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ..autoencoders import (TrainOptions, infer, train_dae, train_sparse_dae,
                            train_stacked_sdae)
from ..baselines import (SvdFilterConfig, WaveletFilterConfig, svd_denoise,
                         wavelet_denoise)
from ..dataset import WallClass, shuffle_labels
from ..errors import ConfigError
from ..metrics import nmse, ssim_stack
from ..sparse_solvers import IstaOptions
from .config import ExperimentConfig
from .datasets import generate_pair

__all__ = ["ResultRow", "csv_content_hash", "load_rows", "run_sweep", "write_rows"]

CSV_COLUMNS = [
    "kind", "algorithm", "carrier_hz", "wall_class", "snr_db", "scr_db",
    "mismatch_pct", "ssim_bd", "ssim_ad", "nmse_bd", "nmse_ad",
    "train_seconds", "test_ms", "seed",
]

TIMING_COLUMNS = ("train_seconds", "test_ms")


@dataclass
class ResultRow:
    kind: str
    algorithm: str
    carrier_hz: float
    wall_class: str
    snr_db: float
    scr_db: float
    mismatch_pct: float
    ssim_bd: float
    ssim_ad: float
    nmse_bd: float
    nmse_ad: float
    train_seconds: float
    test_ms: float
    seed: int

    def __post_init__(self):
        for name in ("ssim_bd", "ssim_ad"):
            v = getattr(self, name)
            if np.isfinite(v) and not (-1.0 <= v <= 1.0):
                raise ConfigError(f"{name}={v} outside [-1, 1]")
        if self.train_seconds < 0 or self.test_ms < 0:
            raise ConfigError("times must be >= 0")

    @property
    def diverged(self):
        return not np.isfinite(self.ssim_ad)


def _split_columns(Q, split, seed):
    perm = np.random.default_rng([seed, 11]).permutation(Q)
    n_train = int(np.floor(split * Q))
    if n_train < 1 or n_train >= Q:
        raise ConfigError("split leaves an empty train or test set")
    return perm[:n_train], perm[n_train:]


def _mean_nmse(approx, reference):
    vals = [nmse(approx[:, q], reference[:, q]) for q in range(reference.shape[1])]
    return float(np.mean(vals))


def _train_model(algorithm, clean_tr, corrupt_tr, cfg: ExperimentConfig, seed):
    t = cfg.train
    opts = TrainOptions(
        outer_iterations=t.outer_iterations, outer_tolerance=t.outer_tolerance,
        seed=seed,
        ista=IstaOptions(max_iterations=t.ista_iterations,
                         relative_tolerance=t.ista_tolerance))
    if algorithm == "dae":
        return train_dae(clean_tr, corrupt_tr, t.dae_nodes, lam=t.dae_lambda,
                         opts=opts)
    if algorithm == "sparse_dae":
        return train_sparse_dae(clean_tr, corrupt_tr, t.sparse_nodes,
                                lam=t.sparse_lambda, mu=t.sparse_mu, opts=opts)
    return train_stacked_sdae(clean_tr, corrupt_tr, t.stacked_sizes,
                              mu_layers=t.stacked_mu,
                              lam_layers=t.stacked_lambda, opts=opts)


def _baseline_denoise(algorithm, stack_cols, shape, cfg: ExperimentConfig):
    b = cfg.baselines
    out = np.empty_like(stack_cols)
    for q in range(stack_cols.shape[1]):
        img = stack_cols[:, q].reshape(shape, order="F")
        if algorithm == "svd":
            den = svd_denoise(img, SvdFilterConfig(energy_fraction=b.svd_energy))
        else:
            den = wavelet_denoise(img, WaveletFilterConfig(
                levels=b.wavelet_levels, keep_fraction=b.wavelet_keep))
        out[:, q] = den.ravel(order="F")
    return np.clip(out, 0.0, 1.0)


def _timed_inference(algorithm, weights, corrupt_te, shape, cfg, passes=100):
    if algorithm in ("svd", "wavelet"):
        run = lambda: _baseline_denoise(algorithm, corrupt_te, shape, cfg)
    else:
        run = lambda: infer(weights, corrupt_te)
    out = run()
    t0 = time.perf_counter()
    for _ in range(passes):
        run()
    per_pass_ms = (time.perf_counter() - t0) / passes * 1e3
    return out, per_pass_ms


def evaluate_grid_point(cfg: ExperimentConfig, value, seed):
    """Train/evaluate every configured algorithm at one grid point."""
    spec = replace(cfg.dataset, seed=seed)
    mismatch = cfg.sweep.mismatch
    if cfg.sweep.axis == "snr":
        spec = replace(spec, snr_db=float(value))
    elif cfg.sweep.axis == "scr":
        spec = replace(spec, scr_db=float(value), pfa=max(spec.pfa, 0.06))
    elif cfg.sweep.axis == "mismatch":
        mismatch = float(value)
    clean, corrupt = generate_pair(spec)
    train_idx, test_idx = _split_columns(clean.count, cfg.sweep.split, seed)

    clean_tr = clean.select(train_idx)
    if mismatch > 0.0:
        clean_tr = shuffle_labels(clean_tr, mismatch, seed=[seed, 13])
    corrupt_tr = corrupt.data[:, train_idx]
    clean_te = clean.data[:, test_idx]
    corrupt_te = corrupt.data[:, test_idx]
    shape = spec.image_shape

    ssim_bd = float(np.mean(ssim_stack(corrupt_te, clean_te, shape)))
    nmse_bd = _mean_nmse(corrupt_te, clean_te)
    nodes = cfg.train.dae_nodes if cfg.sweep.axis != "nodes" else int(value)

    rows = []
    for algorithm in cfg.sweep.algorithms:
        train_seconds = 0.0
        weights = None
        diverged = False
        if algorithm in ("dae", "sparse_dae", "stacked_sdae"):
            local = cfg
            if cfg.sweep.axis == "nodes":
                local = dataclasses.replace(
                    cfg, train=replace(cfg.train, dae_nodes=nodes,
                                       sparse_nodes=nodes))
            t0 = time.perf_counter()
            weights, trace = _train_model(algorithm, clean_tr.data, corrupt_tr,
                                          local, seed)
            train_seconds = time.perf_counter() - t0
            diverged = not all(np.isfinite(v) for v in trace.objectives)
        if diverged:
            ssim_ad = nmse_ad = float("nan")
            test_ms = 0.0
        else:
            denoised, test_ms = _timed_inference(algorithm, weights, corrupt_te,
                                                 shape, cfg)
            ssim_ad = float(np.mean(ssim_stack(denoised, clean_te, shape)))
            nmse_ad = _mean_nmse(denoised, clean_te)
        rows.append(ResultRow(
            kind=spec.kind, algorithm=algorithm, carrier_hz=spec.carrier_hz,
            wall_class=WallClass(spec.wall_class).value,
            snr_db=spec.snr_db, scr_db=spec.scr_db,
            mismatch_pct=100.0 * mismatch, ssim_bd=ssim_bd, ssim_ad=ssim_ad,
            nmse_bd=nmse_bd, nmse_ad=nmse_ad, train_seconds=train_seconds,
            test_ms=test_ms, seed=seed))
    return rows


def _job(args):
    cfg, value, seed = args
    return evaluate_grid_point(cfg, value, seed)


def run_sweep(cfg: ExperimentConfig, jobs=1):
    """All grid points x seeds, sorted by (kind, algorithm, grid position)."""
    tasks = [(cfg, value, seed) for value in cfg.sweep.values
             for seed in cfg.sweep.seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_job, tasks))
    else:
        chunks = [_job(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    order = {v: i for i, v in enumerate(cfg.sweep.values)}
    axis_of = {"snr": "snr_db", "scr": "scr_db", "mismatch": "mismatch_pct",
               "nodes": "mismatch_pct"}[cfg.sweep.axis]

    def grid_pos(row):
        if cfg.sweep.axis == "mismatch":
            return order.get(row.mismatch_pct / 100.0, row.mismatch_pct)
        if cfg.sweep.axis == "nodes":
            return row.seed  # node count is not a row field; seeds break ties
        return order.get(getattr(row, axis_of), getattr(row, axis_of))

    rows.sort(key=lambda r: (r.kind, r.algorithm, grid_pos(r), r.seed))
    return rows


def write_rows(rows, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([getattr(row, c) for c in CSV_COLUMNS])
    return path


def load_rows(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"results file not found: {path}")
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ConfigError(f"unexpected CSV header in {path}")
        for rec in reader:
            rows.append(ResultRow(
                kind=rec["kind"], algorithm=rec["algorithm"],
                carrier_hz=float(rec["carrier_hz"]),
                wall_class=rec["wall_class"], snr_db=float(rec["snr_db"]),
                scr_db=float(rec["scr_db"]),
                mismatch_pct=float(rec["mismatch_pct"]),
                ssim_bd=float(rec["ssim_bd"]), ssim_ad=float(rec["ssim_ad"]),
                nmse_bd=float(rec["nmse_bd"]), nmse_ad=float(rec["nmse_ad"]),
                train_seconds=float(rec["train_seconds"]),
                test_ms=float(rec["test_ms"]), seed=int(rec["seed"])))
    return rows


def csv_content_hash(path):
    """SHA-256 of the CSV with the wall-clock timing columns blanked out."""
    skip = [CSV_COLUMNS.index(c) for c in TIMING_COLUMNS]
    digest = hashlib.sha256()
    with open(path, newline="", encoding="utf-8") as fh:
        for record in csv.reader(fh):
            cells = [v for i, v in enumerate(record) if i not in skip]
            digest.update("\x1f".join(cells).encode())
            digest.update(b"\n")
    return digest.hexdigest()
