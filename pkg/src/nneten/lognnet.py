"""The NNetEn pipeline: reservoir projection, normalization, output-layer
training, and the entropy / learning-inertia measures.

The network is 784(+bias):25:10 — a fixed reservoir matrix built from the
analyzed time series projects each input vector to 25 features, which are
min-max normalized (coefficients fitted on the training split), extended
with a bias component, and classified by a single sigmoid output layer
trained with the per-sample delta rule.  NNetEn at an epoch checkpoint is
the test-set classification accuracy expressed as a fraction.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import mnist
from .reservoir import FillMethod, RESERVOIR_COLS, RESERVOIR_ROWS, fill
from .signals import NOISE_GENERATOR_NAME, as_series

N_RESERVOIR = RESERVOIR_ROWS   # 25
N_CLASSES = 10
N_FEATURES = N_RESERVOIR + 1   # bias + normalized reservoir outputs

DEFAULT_CHECKPOINTS = (100, 400)


@dataclass(frozen=True)
class NetworkConfig:
    """Training configuration; ``epochs=None`` trains to the last checkpoint."""

    epochs: int | None = None
    learning_rate: float = 0.1
    seed: int = 0
    train_size: int | None = None
    test_size: int | None = None
    epoch_checkpoints: tuple = DEFAULT_CHECKPOINTS

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be > 0")
        if not self.epoch_checkpoints:
            raise ValueError("at least one epoch checkpoint is required")
        if any(cp < 1 for cp in self.epoch_checkpoints):
            raise ValueError("epoch checkpoints must be >= 1")
        if self.epochs is not None and self.epochs < max(self.epoch_checkpoints):
            raise ValueError(
                f"epochs={self.epochs} is below the last checkpoint "
                f"{max(self.epoch_checkpoints)}")

    @property
    def total_epochs(self) -> int:
        return self.epochs if self.epochs is not None else max(self.epoch_checkpoints)

    def digest(self) -> str:
        key = (self.total_epochs, self.learning_rate, self.seed, self.train_size,
               self.test_size, tuple(self.epoch_checkpoints))
        return hashlib.sha256(repr(key).encode()).hexdigest()[:16]


@dataclass
class EntropyResult:
    """NNetEn at each epoch checkpoint plus learning inertia and provenance."""

    nneten_at: dict
    learning_inertia: float | None
    metadata: dict = field(default_factory=dict)


@njit(cache=True, nogil=True)
def _delta_rule_epochs(features, labels, w2, lr, n_epochs):
    # Sequential per-sample updates in file order; order is semantically
    # significant, so this loop must not be batched.
    n, d = features.shape
    n_out = w2.shape[0]
    for _ in range(n_epochs):
        for s in range(n):
            x = features[s]
            lab = labels[s]
            for j in range(n_out):
                acc = 0.0
                for i in range(d):
                    acc += w2[j, i] * x[i]
                o = 1.0 / (1.0 + math.exp(-acc))
                t = 1.0 if lab == j else 0.0
                g = lr * (t - o) * o * (1.0 - o)
                for i in range(d):
                    w2[j, i] += g * x[i]


def delta_rule_step(w2, x, label, lr) -> np.ndarray:
    """One per-sample delta-rule update; returns the updated copy of w2."""
    w2 = np.array(w2, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    _delta_rule_epochs(x[None, :], np.asarray([label], dtype=np.int64), w2, lr, 1)
    return w2


def sample_loss(w2, x, label) -> float:
    """Per-sample squared error 0.5*sum((sigmoid(w2 x) - onehot)^2)."""
    o = 1.0 / (1.0 + np.exp(-(np.asarray(w2) @ np.asarray(x))))
    t = np.zeros(w2.shape[0])
    t[label] = 1.0
    return 0.5 * float(np.sum((o - t) ** 2))


def init_output_weights(seed: int, n_out: int = N_CLASSES,
                        n_in: int = N_FEATURES) -> np.ndarray:
    """Seeded uniform initialization in [-0.5, 0.5)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform(-0.5, 0.5, (n_out, n_in))


def reservoir_transform(w1, y) -> np.ndarray:
    """Project input vector(s) through the reservoir: S_j = sum_i w1[j,i]*y[i]."""
    w1 = np.asarray(w1)
    y = np.asarray(y)
    if w1.shape[1] != y.shape[-1]:
        raise ValueError(
            f"shape mismatch: reservoir expects {w1.shape[1]} inputs, vector has {y.shape[-1]}")
    return y @ w1.T


def compute_norm_coeffs(w1, train_vectors):
    """Per-component (min, max) of the reservoir outputs over the training split."""
    s = reservoir_transform(w1, np.asarray(train_vectors))
    if s.ndim != 2 or s.shape[0] < 1:
        raise ValueError("training split must be non-empty")
    return s.min(axis=0), s.max(axis=0)


def apply_norm(s, mins, maxs) -> np.ndarray:
    """Min-max normalize reservoir outputs; degenerate components map to 0.5."""
    s = np.asarray(s, dtype=np.float64)
    span = maxs - mins
    degenerate = span == 0
    safe_span = np.where(degenerate, 1.0, span)
    out = (s - mins) / safe_span
    out[..., degenerate] = 0.5
    return out


def _classifier_features(w1, vectors, mins, maxs) -> np.ndarray:
    """Normalized reservoir outputs with a leading bias column."""
    s = apply_norm(reservoir_transform(w1, vectors), mins, maxs)
    feats = np.empty((s.shape[0], s.shape[1] + 1))
    feats[:, 0] = 1.0
    feats[:, 1:] = s
    return feats


def evaluate_accuracy(w2, features, labels) -> float:
    scores = features @ np.asarray(w2).T
    pred = np.argmax(scores, axis=1)
    return float(np.mean(pred == labels))


def train_classifier(w1, config: NetworkConfig, train_vectors, train_labels,
                     test_vectors, test_labels):
    """Train the output layer, snapshotting test accuracy at each checkpoint.

    Returns (w2, {checkpoint_epoch: accuracy}).  One continuous run covers
    all checkpoints; samples are visited in file order every epoch.
    """
    checkpoints = sorted(set(int(c) for c in config.epoch_checkpoints))
    total = config.total_epochs

    n_train = len(train_labels) if config.train_size is None else min(
        config.train_size, len(train_labels))
    n_test = len(test_labels) if config.test_size is None else min(
        config.test_size, len(test_labels))
    if n_train < 1 or n_test < 1:
        raise ValueError("train and test splits must be non-empty")

    tr_vec = np.ascontiguousarray(train_vectors[:n_train])
    tr_lab = np.ascontiguousarray(train_labels[:n_train], dtype=np.int64)
    te_vec = np.ascontiguousarray(test_vectors[:n_test])
    te_lab = np.ascontiguousarray(test_labels[:n_test], dtype=np.int64)

    mins, maxs = compute_norm_coeffs(w1, tr_vec)
    train_feats = np.ascontiguousarray(_classifier_features(w1, tr_vec, mins, maxs))
    test_feats = _classifier_features(w1, te_vec, mins, maxs)

    w2 = init_output_weights(config.seed)
    lr = config.learning_rate
    accuracy_at = {}
    done = 0
    for cp in checkpoints:
        _delta_rule_epochs(train_feats, tr_lab, w2, lr, cp - done)
        done = cp
        accuracy_at[cp] = evaluate_accuracy(w2, test_feats, te_lab)
    if total > done:
        _delta_rule_epochs(train_feats, tr_lab, w2, lr, total - done)
    return w2, accuracy_at


def learning_inertia(result: EntropyResult, ep1: int, ep2: int) -> float:
    """LI(ep1/ep2) = (NNetEn(ep2) - NNetEn(ep1)) / NNetEn(ep2)."""
    for ep in (ep1, ep2):
        if ep not in result.nneten_at:
            raise ValueError(f"no entropy recorded at checkpoint {ep}")
    e2 = result.nneten_at[ep2]
    if e2 == 0:
        raise ZeroDivisionError("NNetEn at the second checkpoint is zero")
    return (e2 - result.nneten_at[ep1]) / e2


def nneten_from_vectors(series, method, config: NetworkConfig,
                        train_vectors, train_labels, test_vectors, test_labels,
                        truncate: str = "first") -> EntropyResult:
    """NNetEn of a series against pre-vectorized image data.

    The vector arrays are the cached output of :func:`mnist.images_to_vectors`;
    sweeps reuse them across grid points.
    """
    x = as_series(series)
    method = FillMethod(method)
    w1 = fill(x, method, truncate=truncate)
    _, accuracy_at = train_classifier(
        w1, config, train_vectors, train_labels, test_vectors, test_labels)
    nneten_at = {ep: acc for ep, acc in accuracy_at.items()}

    checkpoints = sorted(nneten_at)
    li = None
    if len(checkpoints) >= 2 and nneten_at[checkpoints[-1]] != 0:
        ep1, ep2 = checkpoints[0], checkpoints[-1]
        li = (nneten_at[ep2] - nneten_at[ep1]) / nneten_at[ep2]

    metadata = {
        "seed": config.seed,
        "method": int(method),
        "series_length": int(x.size),
        "config": config.digest(),
        "generator": NOISE_GENERATOR_NAME,
    }
    return EntropyResult(nneten_at=nneten_at, learning_inertia=li, metadata=metadata)


def nneten(series, method, config: NetworkConfig, dataset: mnist.MnistDataset,
           permutation=None, truncate: str = "first") -> EntropyResult:
    """NNetEn of a time series: fill the reservoir, train, read accuracy.

    Every value in ``nneten_at`` is a classification-accuracy fraction in
    [0, 1].  The computation is deterministic for fixed inputs and seed.
    """
    n_train = config.train_size if config.train_size is not None else len(dataset.train)
    n_test = config.test_size if config.test_size is not None else len(dataset.test)
    train_vec = mnist.images_to_vectors(dataset.train.images[:n_train], permutation)
    test_vec = mnist.images_to_vectors(dataset.test.images[:n_test], permutation)
    return nneten_from_vectors(series, method, config,
                               train_vec, dataset.train.labels[:n_train],
                               test_vec, dataset.test.labels[:n_test],
                               truncate=truncate)
