"""Procedural 28x28 digit renderer.

Produces a deterministic handwritten-digit stand-in for environments without
the real IDX files: each digit is a set of stroke polylines, jittered by a
seeded affine transform and rasterized with one-pixel anti-aliasing. Pixel
values are quantized to the 0..255 grid so rendered datasets round-trip
through the IDX writer bit-exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .data import LabeledDataset

GLYPH_SIZE = 28


def _arc(cx: float, cy: float, rx: float, ry: float,
         deg0: float, deg1: float, n: int = 12) -> list[tuple[float, float]]:
    ts = np.linspace(math.radians(deg0), math.radians(deg1), n)
    return [(cx + rx * math.cos(t), cy + ry * math.sin(t)) for t in ts]


# Stroke polylines per digit in a unit box; x grows right, y grows down.
_STROKES: dict[int, list[list[tuple[float, float]]]] = {
    0: [_arc(0.5, 0.5, 0.27, 0.38, 0, 360, 20)],
    1: [[(0.32, 0.3), (0.54, 0.1), (0.54, 0.9)]],
    2: [_arc(0.5, 0.32, 0.25, 0.2, 180, 345, 10)
        + [(0.7, 0.45), (0.27, 0.88), (0.76, 0.88)]],
    3: [_arc(0.47, 0.3, 0.23, 0.19, 200, 450, 12)
        + _arc(0.47, 0.69, 0.26, 0.21, 270, 520, 12)],
    4: [[(0.64, 0.1), (0.24, 0.6), (0.8, 0.6)], [(0.64, 0.33), (0.64, 0.92)]],
    5: [[(0.74, 0.12), (0.33, 0.12), (0.3, 0.45)]
        + _arc(0.47, 0.66, 0.26, 0.22, 235, 520, 14)],
    6: [_arc(0.6, 0.26, 0.33, 0.55, 255, 180, 8)
        + _arc(0.5, 0.68, 0.24, 0.2, 180, 520, 16)],
    7: [[(0.25, 0.12), (0.78, 0.12), (0.44, 0.9)]],
    8: [_arc(0.5, 0.3, 0.21, 0.19, 90, 450, 14),
        _arc(0.5, 0.7, 0.25, 0.22, 270, 630, 14)],
    9: [_arc(0.5, 0.33, 0.23, 0.21, 0, 360, 14),
        [(0.73, 0.35)] + _arc(0.4, 0.35, 0.33, 0.55, 0, 70, 8)],
}


def _segments(digit: int) -> np.ndarray:
    """All stroke segments of a digit as an (S, 2, 2) array in unit coords."""
    segs = []
    for line in _STROKES[digit]:
        pts = np.asarray(line, dtype=np.float64)
        segs.append(np.stack([pts[:-1], pts[1:]], axis=1))
    return np.concatenate(segs)


_PIXEL_CENTERS = np.stack(
    np.meshgrid(np.arange(GLYPH_SIZE) + 0.5, np.arange(GLYPH_SIZE) + 0.5,
                indexing="ij"),
    axis=-1,
).reshape(-1, 2)[:, ::-1]  # (784, 2) as (x, y)


def render_digit(digit: int, rng: np.random.Generator) -> np.ndarray:
    """Render one jittered digit as a (1, 28, 28) float32 image in [0, 1]."""
    segs = _segments(digit).reshape(-1, 2)

    theta = rng.uniform(-0.22, 0.22)
    scale = rng.uniform(0.85, 1.12, size=2)
    shear = rng.uniform(-0.18, 0.18)
    shift = rng.uniform(-0.06, 0.06, size=2)
    thickness = rng.uniform(0.55, 1.05)
    intensity = rng.uniform(0.88, 1.0)

    cos_t, sin_t = math.cos(theta), math.sin(theta)
    rot = np.array([[cos_t, -sin_t], [sin_t, cos_t]])
    aff = rot @ np.array([[scale[0], shear * scale[0]], [0.0, scale[1]]])
    pts = (segs - 0.5) @ aff.T + 0.5 + shift
    # glyph occupies a ~20px box centered in the 28px frame, like MNIST
    pts = pts * 20.0 + 4.0

    a = pts.reshape(-1, 2, 2)[:, 0]
    b = pts.reshape(-1, 2, 2)[:, 1]
    ab = b - a
    denom = np.maximum((ab * ab).sum(axis=1), 1e-12)
    ap = _PIXEL_CENTERS[:, None, :] - a[None, :, :]  # (784, S, 2)
    t = np.clip((ap * ab[None, :, :]).sum(axis=2) / denom, 0.0, 1.0)
    nearest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    dist = np.linalg.norm(_PIXEL_CENTERS[:, None, :] - nearest, axis=2).min(axis=1)

    ink = np.clip(thickness + 0.6 - dist, 0.0, 1.0) * intensity
    quantized = np.round(ink * 255.0) / 255.0
    return quantized.reshape(1, GLYPH_SIZE, GLYPH_SIZE).astype(np.float32)


def make_digits_dataset(per_class: int, seed: int, split: str = "train") -> LabeledDataset:
    """Deterministic balanced dataset of rendered digits, 0..255-quantized."""
    rng = np.random.default_rng([seed, 0 if split == "train" else 1])
    n = per_class * 10
    images = np.empty((n, 1, GLYPH_SIZE, GLYPH_SIZE), np.float32)
    labels = np.empty(n, np.int64)
    i = 0
    for digit in range(10):
        for _ in range(per_class):
            images[i] = render_digit(digit, rng)
            labels[i] = digit
            i += 1
    return LabeledDataset(images, labels, num_classes=10, split=split)
