"""MNIST IDX ingestion and image-to-vector conversion.

File layout (big endian): images carry magic 0x00000803 followed by int32
count/rows/cols and raw pixel bytes; labels carry magic 0x00000801 followed
by int32 count and raw label bytes.  Files with a ``.gz`` suffix are read
through gzip transparently.
"""
from __future__ import annotations

import gzip
import hashlib
import os
import struct
from dataclasses import dataclass

import numpy as np

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801

IMAGE_SIDE = 28
N_PIXELS = IMAGE_SIDE * IMAGE_SIDE  # 784
VECTOR_LEN = N_PIXELS + 1           # bias component + pixels

# Canonical file names looked up by dataset-from-directory loading.
TRAIN_IMAGES = "train-images-idx3-ubyte"
TRAIN_LABELS = "train-labels-idx1-ubyte"
TEST_IMAGES = "t10k-images-idx3-ubyte"
TEST_LABELS = "t10k-labels-idx1-ubyte"


class IdxFormatError(ValueError):
    """Raised for bad magic numbers or truncated IDX payloads."""


@dataclass
class MnistSplit:
    images: np.ndarray  # (n, 28, 28) uint8
    labels: np.ndarray  # (n,) uint8

    def __len__(self):
        return len(self.labels)


@dataclass
class MnistDataset:
    train: MnistSplit
    test: MnistSplit


def _open(path):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rb")
    return open(path, "rb")


def _read_header(f, n_ints):
    raw = f.read(4 * n_ints)
    if len(raw) < 4 * n_ints:
        raise IdxFormatError("truncated IDX header")
    return struct.unpack(f">{n_ints}i", raw)


def load_idx_images(path) -> np.ndarray:
    with _open(path) as f:
        magic, count, n_rows, n_cols = _read_header(f, 4)
        if magic != IMAGE_MAGIC:
            raise IdxFormatError(
                f"bad image magic 0x{magic:08x} in {path} (expected 0x{IMAGE_MAGIC:08x})")
        payload = f.read()
    expected = count * n_rows * n_cols
    if len(payload) < expected:
        raise IdxFormatError(
            f"truncated image payload in {path}: {len(payload)} bytes, expected {expected}")
    return np.frombuffer(payload[:expected], dtype=np.uint8).reshape(count, n_rows, n_cols)


def load_idx_labels(path) -> np.ndarray:
    with _open(path) as f:
        magic, count = _read_header(f, 2)
        if magic != LABEL_MAGIC:
            raise IdxFormatError(
                f"bad label magic 0x{magic:08x} in {path} (expected 0x{LABEL_MAGIC:08x})")
        payload = f.read()
    if len(payload) < count:
        raise IdxFormatError(
            f"truncated label payload in {path}: {len(payload)} bytes, expected {count}")
    return np.frombuffer(payload[:count], dtype=np.uint8)


def load_mnist(images_path, labels_path) -> MnistSplit:
    """Load and cross-validate one image/label split."""
    images = load_idx_images(images_path)
    labels = load_idx_labels(labels_path)
    if images.shape[1:] != (IMAGE_SIDE, IMAGE_SIDE):
        raise ValueError(
            f"expected {IMAGE_SIDE}x{IMAGE_SIDE} images, got {images.shape[1]}x{images.shape[2]}")
    if len(images) != len(labels):
        raise ValueError(
            f"image/label count mismatch: {len(images)} images vs {len(labels)} labels")
    if labels.size and labels.max() > 9:
        raise ValueError(f"label out of range 0-9: {int(labels.max())}")
    return MnistSplit(images=images, labels=labels)


def dataset_paths(directory) -> dict:
    """Resolve the four canonical IDX files (plain or .gz) in a directory."""
    def find(name):
        for candidate in (name, name + ".gz"):
            p = os.path.join(directory, candidate)
            if os.path.exists(p):
                return p
        raise FileNotFoundError(
            f"missing MNIST file {name} (or {name}.gz) in {directory}")

    return {
        "train_images": find(TRAIN_IMAGES),
        "train_labels": find(TRAIN_LABELS),
        "test_images": find(TEST_IMAGES),
        "test_labels": find(TEST_LABELS),
    }


def load_dataset(directory) -> MnistDataset:
    """Load both splits from a directory holding the canonical file names."""
    paths = dataset_paths(directory)
    return MnistDataset(
        train=load_mnist(paths["train_images"], paths["train_labels"]),
        test=load_mnist(paths["test_images"], paths["test_labels"]),
    )


def write_idx_images(path, images) -> None:
    images = np.ascontiguousarray(images, dtype=np.uint8)
    n, r, c = images.shape
    with open(path, "wb") as f:
        f.write(struct.pack(">4i", IMAGE_MAGIC, n, r, c))
        f.write(images.tobytes())


def write_idx_labels(path, labels) -> None:
    labels = np.ascontiguousarray(labels, dtype=np.uint8)
    with open(path, "wb") as f:
        f.write(struct.pack(">2i", LABEL_MAGIC, len(labels)))
        f.write(labels.tobytes())


def image_to_vector(image, permutation=None) -> np.ndarray:
    """Flatten one image to the 785-vector (bias 1, then pixels scaled to [0,1]).

    ``permutation`` optionally reorders the 784 pixel components; it is the
    hook for substituting a custom flattening pattern.
    """
    image = np.asarray(image)
    if image.shape != (IMAGE_SIDE, IMAGE_SIDE):
        raise ValueError(f"expected a {IMAGE_SIDE}x{IMAGE_SIDE} image, got {image.shape}")
    vec = np.empty(VECTOR_LEN)
    vec[0] = 1.0
    flat = image.reshape(N_PIXELS).astype(np.float64) / 255.0
    vec[1:] = flat[permutation] if permutation is not None else flat
    return vec


def images_to_vectors(images, permutation=None) -> np.ndarray:
    """Vectorize a whole (n, 28, 28) image stack to an (n, 785) array."""
    images = np.asarray(images)
    n = images.shape[0]
    out = np.empty((n, VECTOR_LEN))
    out[:, 0] = 1.0
    flat = images.reshape(n, N_PIXELS).astype(np.float64) / 255.0
    out[:, 1:] = flat[:, permutation] if permutation is not None else flat
    return out


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
