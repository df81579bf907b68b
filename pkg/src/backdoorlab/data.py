"""Loading, writing and subsampling of the two supported binary image formats.

Images are kept in memory as float32 arrays of shape (N, C, H, W) with values
in [0, 1]; raw bytes are divided by 255 at load time so that all downstream
arithmetic is real-valued.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
CIFAR10_RECORD_BYTES = 3073  # 1 label byte + 3 * 32 * 32 pixel bytes


class DataFormatError(ValueError):
    """A dataset file does not match its declared binary layout."""


class DatasetMismatchError(ValueError):
    """Two files that must describe the same samples disagree."""


class TruncatedFileError(OSError):
    """A dataset file ends before its header-declared payload does."""


@dataclass(frozen=True)
class LabeledDataset:
    """Immutable labeled image dataset; safe to share across threads."""

    images: np.ndarray  # (N, C, H, W) float32, values in [0, 1]
    labels: np.ndarray  # (N,) int64, values in [0, num_classes)
    num_classes: int
    split: str = "train"

    def __post_init__(self) -> None:
        images = np.asarray(self.images, dtype=np.float32)
        labels = np.asarray(self.labels, dtype=np.int64)
        if images.ndim != 4:
            raise ValueError(f"images must be (N, C, H, W), got shape {images.shape}")
        if labels.ndim != 1 or len(labels) != len(images):
            raise ValueError(
                f"labels length {labels.shape} does not match {len(images)} images"
            )
        if self.num_classes < 1:
            raise ValueError("num_classes must be >= 1")
        if len(labels) and (labels.min() < 0 or labels.max() >= self.num_classes):
            raise ValueError("labels out of range [0, num_classes)")
        if len(images) and (images.min() < 0.0 or images.max() > 1.0):
            raise ValueError("pixel values outside [0, 1]")
        images = images.copy() if images.base is not None else images
        labels = labels.copy() if labels.base is not None else labels
        images.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.images)

    @property
    def image_shape(self) -> tuple[int, int, int]:
        return self.images.shape[1:]

    def class_indices(self, cls: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cls)

    def class_histogram(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)


def _read_exact(f, n: int, path: Path, what: str) -> bytes:
    buf = f.read(n)
    if len(buf) != n:
        raise TruncatedFileError(f"{path}: truncated while reading {what}")
    return buf


def load_idx(images_path: str | Path, labels_path: str | Path,
             num_classes: int = 10, split: str = "train") -> LabeledDataset:
    """Load an IDX image/label file pair (big-endian, MNIST layout)."""
    images_path, labels_path = Path(images_path), Path(labels_path)

    with open(labels_path, "rb") as f:
        magic, n_labels = struct.unpack(">II", _read_exact(f, 8, labels_path, "header"))
        if magic != IDX_LABELS_MAGIC:
            raise DataFormatError(
                f"{labels_path}: bad labels magic 0x{magic:08x}, "
                f"expected 0x{IDX_LABELS_MAGIC:08x}"
            )
        labels = np.frombuffer(_read_exact(f, n_labels, labels_path, "labels"), np.uint8)

    with open(images_path, "rb") as f:
        magic, n_images, rows, cols = struct.unpack(
            ">IIII", _read_exact(f, 16, images_path, "header"))
        if magic != IDX_IMAGES_MAGIC:
            raise DataFormatError(
                f"{images_path}: bad images magic 0x{magic:08x}, "
                f"expected 0x{IDX_IMAGES_MAGIC:08x}"
            )
        if n_images != n_labels:
            raise DatasetMismatchError(
                f"{images_path} holds {n_images} images but "
                f"{labels_path} holds {n_labels} labels"
            )
        raw = _read_exact(f, n_images * rows * cols, images_path, "pixels")

    pixels = np.frombuffer(raw, np.uint8).reshape(n_images, 1, rows, cols)
    images = pixels.astype(np.float32) / np.float32(255.0)
    return LabeledDataset(images, labels.astype(np.int64), num_classes, split)


def write_idx(dataset: LabeledDataset, images_path: str | Path,
              labels_path: str | Path) -> None:
    """Write a single-channel dataset back out as an IDX file pair."""
    n, c, h, w = dataset.images.shape
    if c != 1:
        raise ValueError("IDX writer supports single-channel images only")
    pixels = np.round(dataset.images * 255.0).astype(np.uint8)
    with open(images_path, "wb") as f:
        f.write(struct.pack(">IIII", IDX_IMAGES_MAGIC, n, h, w))
        f.write(pixels.tobytes())
    with open(labels_path, "wb") as f:
        f.write(struct.pack(">II", IDX_LABELS_MAGIC, n))
        f.write(dataset.labels.astype(np.uint8).tobytes())


def load_cifar10(batch_paths: list[str | Path], split: str = "train") -> LabeledDataset:
    """Load CIFAR-10 binary batches (3073-byte records, channel-major pixels)."""
    chunks, labels = [], []
    for path in map(Path, batch_paths):
        raw = path.read_bytes()
        if len(raw) % CIFAR10_RECORD_BYTES != 0:
            raise DataFormatError(
                f"{path}: length {len(raw)} is not a multiple of {CIFAR10_RECORD_BYTES}"
            )
        records = np.frombuffer(raw, np.uint8).reshape(-1, CIFAR10_RECORD_BYTES)
        batch_labels = records[:, 0]
        if len(batch_labels) and batch_labels.max() > 9:
            raise DataFormatError(
                f"{path}: label byte {batch_labels.max()} exceeds 9"
            )
        labels.append(batch_labels)
        chunks.append(records[:, 1:].reshape(-1, 3, 32, 32))
    pixels = (np.concatenate(chunks) if chunks
              else np.empty((0, 3, 32, 32), np.uint8))
    label_arr = np.concatenate(labels) if labels else np.empty(0, np.uint8)
    images = pixels.astype(np.float32) / np.float32(255.0)
    return LabeledDataset(images, label_arr.astype(np.int64), 10, split)


def write_cifar10(dataset: LabeledDataset, path: str | Path) -> None:
    """Write a 3x32x32 dataset as one CIFAR-10 binary batch."""
    n, c, h, w = dataset.images.shape
    if (c, h, w) != (3, 32, 32):
        raise ValueError("CIFAR-10 writer requires 3x32x32 images")
    records = np.empty((n, CIFAR10_RECORD_BYTES), np.uint8)
    records[:, 0] = dataset.labels.astype(np.uint8)
    records[:, 1:] = np.round(dataset.images * 255.0).astype(np.uint8).reshape(n, -1)
    Path(path).write_bytes(records.tobytes())


def subsample(dataset: LabeledDataset, per_class: int, seed: int) -> LabeledDataset:
    """Pick exactly `per_class` seeded samples of every class.

    Selection order is class-ascending with one shared generator, so equal
    (dataset, per_class, seed) triples always select the same indices.
    """
    rng = np.random.default_rng(seed)
    selected = []
    for cls in range(dataset.num_classes):
        pool = dataset.class_indices(cls)
        if per_class > len(pool):
            raise ValueError(
                f"per_class={per_class} exceeds population {len(pool)} of class {cls}"
            )
        selected.append(rng.choice(pool, size=per_class, replace=False))
    order = np.sort(np.concatenate(selected))
    return LabeledDataset(dataset.images[order], dataset.labels[order],
                          dataset.num_classes, dataset.split)
