"""Alternating-minimization denoising autoencoders: DAE, SparseDAE, StackedSDAE.

All three variants are trained by cycling exact block updates: ridge least
squares for the weight matrices and ISTA for the sparse hidden codes.  No
gradient descent is involved anywhere.
"""
from __future__ import annotations

import struct
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, FormatError
from .sparse_solvers import IstaOptions, RidgeDesign, ista_solve, solve_least_squares

__all__ = [
    "Activation",
    "AutoencoderWeights",
    "TrainOptions",
    "TrainTrace",
    "inference_flops",
    "infer",
    "load_weights",
    "objective_value",
    "save_weights",
    "train_dae",
    "train_sparse_dae",
    "train_stacked_sdae",
]

_ACTIVATION_KINDS = ("linear", "tanh", "sigmoid")
_VARIANTS = ("dae", "sparse_dae", "stacked_sdae")


@dataclass
class Activation:
    kind: str = "linear"
    inverse_clamp: float = 1e-6  # keeps tanh/sigmoid inverses finite at the range edge

    def __post_init__(self):
        if self.kind not in _ACTIVATION_KINDS:
            raise ConfigError(f"unknown activation {self.kind!r}")
        if not (0.0 < self.inverse_clamp < 0.1):
            raise ConfigError("inverse_clamp must lie in (0, 0.1)")

    def apply(self, v):
        v = np.asarray(v, dtype=float)
        if self.kind == "linear":
            return v
        if self.kind == "tanh":
            return np.tanh(v)
        return 1.0 / (1.0 + np.exp(-v))

    def invert(self, v):
        v = np.asarray(v, dtype=float)
        eps = self.inverse_clamp
        if self.kind == "linear":
            return v
        if self.kind == "tanh":
            return np.arctanh(np.clip(v, -1.0 + eps, 1.0 - eps))
        u = np.clip(v, eps, 1.0 - eps)
        return np.log(u / (1.0 - u))


@dataclass
class AutoencoderWeights:
    variant: str
    activation: Activation
    matrices: dict[str, np.ndarray]

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        expected = ("W11", "W12", "W21", "W22") if self.stacked else ("W1", "W2")
        if tuple(sorted(self.matrices)) != tuple(sorted(expected)):
            raise ConfigError(f"variant {self.variant} expects matrices {expected}")
        for name, M in self.matrices.items():
            if not np.all(np.isfinite(M)):
                raise ConfigError(f"{name} contains non-finite entries")
        if self.stacked:
            l0, l1, l2 = self.layer_sizes
            if not (l0 > l1 > l2):
                raise ConfigError("stacked layer sizes must strictly decrease")

    @property
    def stacked(self):
        return self.variant == "stacked_sdae"

    @property
    def pixel_count(self):
        key = "W11" if self.stacked else "W1"
        return self.matrices[key].shape[1]

    @property
    def layer_sizes(self):
        if self.stacked:
            return (
                self.matrices["W11"].shape[0],
                self.matrices["W12"].shape[0],
                self.matrices["W21"].shape[0],
            )
        return (self.matrices["W1"].shape[0],)


@dataclass
class TrainOptions:
    outer_iterations: int = 50
    outer_tolerance: float = 1e-4
    seed: int = 0
    ridge: float | None = None
    ista: IstaOptions = field(default_factory=IstaOptions)

    def __post_init__(self):
        if self.outer_iterations < 1:
            raise ConfigError("outer_iterations must be >= 1")
        if self.outer_tolerance <= 0:
            raise ConfigError("outer_tolerance must be > 0")


@dataclass
class TrainTrace:
    objectives: list[float] = field(default_factory=list)
    wall_times: list[float] = field(default_factory=list)


def _init_matrix(rng, rows, cols):
    # i.i.d. Gaussian, std 1/sqrt(fan-in): keeps initial activations order-1
    return rng.standard_normal((rows, cols)) / np.sqrt(cols)


def _check_pair(X, Xhat):
    X = np.asarray(X, dtype=float)
    Xhat = np.asarray(Xhat, dtype=float)
    if X.ndim != 2 or X.shape != Xhat.shape:
        raise ConfigError(f"clean/corrupt shape mismatch {X.shape} vs {Xhat.shape}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Xhat))):
        raise DomainError("training stacks contain non-finite entries")
    return X, Xhat


def objective_value(weights, codes, X, Xhat, lam=1.0, mu=0.0,
                    mu_layers=(1.0, 1.0, 1.0), lam_layers=(0.0, 0.0, 0.0)):
    """Exact training objective of the given variant at the given point.

    Shallow variants pass a single code matrix Z; the stacked variant passes
    (Z0, Z1, Z2).  `mu` is the shallow l1 weight; `mu_layers`/`lam_layers` are
    the stacked coupling and sparsity weights.
    """
    X, Xhat = _check_pair(X, Xhat)
    act = weights.activation
    if weights.stacked:
        Z0, Z1, Z2 = codes
        W11, W12 = weights.matrices["W11"], weights.matrices["W12"]
        W21, W22 = weights.matrices["W21"], weights.matrices["W22"]
        m0, m1, m2 = mu_layers
        s0, s1, s2 = lam_layers
        terms = [
            np.sum((X - W22 @ Z2) ** 2),
            m2 * np.sum((act.invert(Z2) - W21 @ Z1) ** 2),
            m1 * np.sum((act.invert(Z1) - W12 @ Z0) ** 2),
            m0 * np.sum((act.invert(Z0) - W11 @ Xhat) ** 2),
            s0 * np.sum(np.abs(Z0)),
            s1 * np.sum(np.abs(Z1)),
            s2 * np.sum(np.abs(Z2)),
        ]
        return float(sum(terms))
    Z = codes
    W1, W2 = weights.matrices["W1"], weights.matrices["W2"]
    obj = np.sum((X - W2 @ Z) ** 2) + lam * np.sum((Z - act.apply(W1 @ Xhat)) ** 2)
    if weights.variant == "sparse_dae":
        obj += mu * np.sum(np.abs(Z))
    return float(obj)


def _shallow_train(X, Xhat, nodes, lam, mu, opts, activation, sparse):
    X, Xhat = _check_pair(X, Xhat)
    P, Q = X.shape
    if not (0 < nodes < P):
        raise ConfigError(f"hidden size {nodes} must satisfy 0 < l < P={P}")
    if lam < 0:
        raise ConfigError("lambda must be >= 0")
    if mu < 0:
        raise DomainError("mu must be >= 0")
    act = activation or Activation()
    rng = np.random.default_rng(opts.seed)
    W1 = _init_matrix(rng, nodes, P)
    W2 = _init_matrix(rng, P, nodes)
    encoder_design = RidgeDesign(Xhat, ridge=opts.ridge)
    variant = "sparse_dae" if sparse else "dae"
    weights = AutoencoderWeights(variant, act, {"W1": W1, "W2": W2})
    E = act.apply(W1 @ Xhat)
    Z = E.copy()
    trace = TrainTrace()
    eye = np.eye(nodes)
    sqrt_lam = np.sqrt(lam)
    for _ in range(opts.outer_iterations):
        t0 = time.perf_counter()
        # code update
        if sparse:
            D = np.vstack([W2, sqrt_lam * eye])
            T = np.vstack([X, sqrt_lam * E])
            Z = ista_solve(D, T, mu, Z, opts.ista).z
        elif lam == 0.0:
            Z = np.linalg.lstsq(W2, X, rcond=None)[0]
        else:
            Z = np.linalg.solve(W2.T @ W2 + lam * eye, W2.T @ X + lam * E)
        # weight updates: encoder against the inverse-activation codes, then decoder
        W1 = encoder_design.solve(act.invert(Z))
        E = act.apply(W1 @ Xhat)
        W2 = solve_least_squares(Z, X, ridge=opts.ridge)
        weights.matrices["W1"], weights.matrices["W2"] = W1, W2
        obj = objective_value(weights, Z, X, Xhat, lam=lam, mu=mu)
        trace.objectives.append(obj)
        trace.wall_times.append(time.perf_counter() - t0)
        if len(trace.objectives) >= 2:
            prev = trace.objectives[-2]
            if abs(prev - obj) <= opts.outer_tolerance * max(abs(prev), 1e-300):
                break
    return weights, trace


def train_dae(X, Xhat, nodes, lam=1.0, opts: TrainOptions | None = None,
              activation: Activation | None = None):
    """Single-layer DAE trained by alternating closed-form block minimization."""
    return _shallow_train(X, Xhat, nodes, lam, 0.0, opts or TrainOptions(),
                          activation, sparse=False)


def train_sparse_dae(X, Xhat, nodes, lam=1.0, mu=0.1,
                     opts: TrainOptions | None = None,
                     activation: Activation | None = None):
    """SparseDAE: DAE plus an l1 penalty on the code, solved by ISTA on the
    vertically stacked system [W2; sqrt(lam) I]."""
    return _shallow_train(X, Xhat, nodes, lam, mu, opts or TrainOptions(),
                          activation, sparse=True)


def train_stacked_sdae(X, Xhat, sizes, mu_layers=(1.0, 1.0, 1.0),
                       lam_layers=(0.1, 0.1, 0.1),
                       opts: TrainOptions | None = None,
                       activation: Activation | None = None):
    """Three-hidden-layer stacked sparse DAE.

    Each outer cycle runs the four per-layer least-squares weight updates
    followed by the three ISTA code updates, warm-started from the previous
    codes so the composite objective never increases.
    """
    opts = opts or TrainOptions()
    X, Xhat = _check_pair(X, Xhat)
    P, Q = X.shape
    l0, l1, l2 = sizes
    if not (l0 > l1 > l2 >= 1):
        raise ConfigError(f"layer sizes must strictly decrease, got {sizes}")
    if any(m < 0 for m in mu_layers) or any(s < 0 for s in lam_layers):
        raise ConfigError("regularizers must be >= 0")
    act = activation or Activation()
    rng = np.random.default_rng(opts.seed)
    W11 = _init_matrix(rng, l0, P)
    W12 = _init_matrix(rng, l1, l0)
    W21 = _init_matrix(rng, l2, l1)
    W22 = _init_matrix(rng, P, l2)
    Z0 = act.apply(W11 @ Xhat)
    Z1 = act.apply(W12 @ Z0)
    Z2 = act.apply(W21 @ Z1)
    m0, m1, m2 = mu_layers
    s0, s1, s2 = lam_layers
    weights = AutoencoderWeights(
        "stacked_sdae", act, {"W11": W11, "W12": W12, "W21": W21, "W22": W22}
    )
    input_design = RidgeDesign(Xhat, ridge=opts.ridge)
    trace = TrainTrace()
    for _ in range(opts.outer_iterations):
        t0 = time.perf_counter()
        W11 = input_design.solve(act.invert(Z0))
        W12 = solve_least_squares(Z0, act.invert(Z1), ridge=opts.ridge)
        W21 = solve_least_squares(Z1, act.invert(Z2), ridge=opts.ridge)
        W22 = solve_least_squares(Z2, X, ridge=opts.ridge)
        # code updates, deepest-coupling weights as printed in the update equations
        D0 = np.vstack([W12, np.sqrt(m0) * np.eye(l0)])
        T0 = np.vstack([act.invert(Z1), np.sqrt(m0) * act.apply(W11 @ Xhat)])
        Z0 = ista_solve(D0, T0, s0, Z0, opts.ista).z
        D1 = np.vstack([np.sqrt(m2) * W21, np.sqrt(m1) * np.eye(l1)])
        T1 = np.vstack([np.sqrt(m2) * act.invert(Z2), np.sqrt(m1) * act.apply(W12 @ Z0)])
        Z1 = ista_solve(D1, T1, s1, Z1, opts.ista).z
        D2 = np.vstack([W22, np.sqrt(m2) * np.eye(l2)])
        T2 = np.vstack([X, np.sqrt(m2) * act.apply(W21 @ Z1)])
        Z2 = ista_solve(D2, T2, s2, Z2, opts.ista).z
        for name, M in (("W11", W11), ("W12", W12), ("W21", W21), ("W22", W22)):
            weights.matrices[name] = M
        obj = objective_value(weights, (Z0, Z1, Z2), X, Xhat,
                              mu_layers=mu_layers, lam_layers=lam_layers)
        trace.objectives.append(obj)
        trace.wall_times.append(time.perf_counter() - t0)
        if len(trace.objectives) >= 2:
            prev = trace.objectives[-2]
            if abs(prev - obj) <= opts.outer_tolerance * max(abs(prev), 1e-300):
                break
    return weights, trace


def infer(weights: AutoencoderWeights, xhat, clamp=True):
    """Reconstruct denoised images from corrupt input columns.

    Accepts a single vector or a P x Q stack; output is clamped to [0, 1]
    unless `clamp` is disabled.
    """
    x = np.asarray(xhat, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[:, None]
    if x.shape[0] != weights.pixel_count:
        raise ConfigError(
            f"input pixel count {x.shape[0]} != weights P={weights.pixel_count}"
        )
    act = weights.activation
    if weights.stacked:
        M = weights.matrices
        out = M["W22"] @ act.apply(
            M["W21"] @ act.apply(M["W12"] @ act.apply(M["W11"] @ x))
        )
    else:
        out = weights.matrices["W2"] @ act.apply(weights.matrices["W1"] @ x)
    if clamp:
        out = np.clip(out, 0.0, 1.0)
    return out[:, 0] if single else out


def inference_flops(weights: AutoencoderWeights):
    """Multiply-accumulate count of one single-image inference pass."""
    P = weights.pixel_count
    if weights.stacked:
        l0, l1, l2 = weights.layer_sizes
        return P * l0 + l0 * l1 + l1 * l2 + l2 * P
    (l,) = weights.layer_sizes
    return 2 * P * l


_WEIGHTS_MAGIC = b"RDAEW1"
_VARIANT_TAGS = {v: i for i, v in enumerate(_VARIANTS)}
_ACT_TAGS = {a: i for i, a in enumerate(_ACTIVATION_KINDS)}


def save_weights(weights: AutoencoderWeights, path):
    """Binary weights file: magic, variant/activation tags, layer sizes, then
    the matrices in declared order as little-endian float64, column-major."""
    names = ("W11", "W12", "W21", "W22") if weights.stacked else ("W1", "W2")
    sizes = (weights.pixel_count,) + weights.layer_sizes
    with open(path, "wb") as fh:
        fh.write(_WEIGHTS_MAGIC)
        fh.write(struct.pack("<BBd", _VARIANT_TAGS[weights.variant],
                             _ACT_TAGS[weights.activation.kind],
                             weights.activation.inverse_clamp))
        fh.write(struct.pack("<H", len(sizes)))
        fh.write(struct.pack(f"<{len(sizes)}I", *sizes))
        for name in names:
            fh.write(np.asfortranarray(weights.matrices[name]).tobytes(order="F"))


def load_weights(path):
    with open(path, "rb") as fh:
        magic = fh.read(len(_WEIGHTS_MAGIC))
        if magic != _WEIGHTS_MAGIC:
            raise FormatError(f"bad magic in {path}")
        try:
            vtag, atag, clamp = struct.unpack("<BBd", fh.read(10))
            (nsizes,) = struct.unpack("<H", fh.read(2))
            sizes = struct.unpack(f"<{nsizes}I", fh.read(4 * nsizes))
        except struct.error as exc:
            raise FormatError(f"truncated header in {path}") from exc
        variants = {i: v for v, i in _VARIANT_TAGS.items()}
        acts = {i: a for a, i in _ACT_TAGS.items()}
        if vtag not in variants or atag not in acts:
            raise FormatError(f"unknown variant/activation tag in {path}")
        variant = variants[vtag]
        act = Activation(acts[atag], clamp)
        P = sizes[0]
        if variant == "stacked_sdae":
            if nsizes != 4:
                raise FormatError("stacked weights need 4 layer sizes")
            l0, l1, l2 = sizes[1:]
            shapes = {"W11": (l0, P), "W12": (l1, l0), "W21": (l2, l1), "W22": (P, l2)}
            order = ("W11", "W12", "W21", "W22")
        else:
            if nsizes != 2:
                raise FormatError("shallow weights need 2 layer sizes")
            (l,) = sizes[1:]
            shapes = {"W1": (l, P), "W2": (P, l)}
            order = ("W1", "W2")
        matrices = {}
        for name in order:
            r, c = shapes[name]
            buf = fh.read(8 * r * c)
            if len(buf) != 8 * r * c:
                raise FormatError(f"truncated matrix {name} in {path}")
            matrices[name] = np.frombuffer(buf, dtype="<f8").reshape((r, c), order="F").copy()
        return AutoencoderWeights(variant, act, matrices)
