"""Deterministic synthetic test images for benchmarking.

The generators produce integer-valued grayscale images spanning dark and
bright intensities (Poisson noise severity depends on brightness, so a
useful corpus must include low-count regions). Levels are drawn log-uniform
over [1, 250]. The photo entry is the classic public-domain cameraman
picture bundled with scikit-image, block-averaged down to 256x256.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .images import write_image

__all__ = [
    "camera_photo",
    "disks_image",
    "make_corpus",
    "piecewise_blocks",
    "ramp_image",
    "rings_image",
    "stripes_image",
]


def _level(rng: np.random.Generator, low: float = 1.0, high: float = 250.0) -> float:
    return float(np.floor(np.exp(rng.uniform(np.log(low), np.log(high))) + 0.5))


def piecewise_blocks(seed: int, height: int = 128, width: int = 128,
                     rects: int = 10) -> np.ndarray:
    """Random constant background overlaid with random constant rectangles."""
    rng = np.random.default_rng(seed)
    img = np.full((height, width), _level(rng))
    for _ in range(rects):
        y0 = int(rng.integers(0, height - 3))
        x0 = int(rng.integers(0, width - 3))
        y1 = int(rng.integers(y0 + 2, height + 1))
        x1 = int(rng.integers(x0 + 2, width + 1))
        img[y0:y1, x0:x1] = _level(rng)
    return img


def disks_image(seed: int, height: int = 128, width: int = 128,
                disks: int = 6) -> np.ndarray:
    """Constant disks of random radius and level on a random background."""
    rng = np.random.default_rng(seed)
    img = np.full((height, width), _level(rng))
    yy, xx = np.mgrid[0:height, 0:width]
    for _ in range(disks):
        cy = int(rng.integers(0, height))
        cx = int(rng.integers(0, width))
        radius = int(rng.integers(min(height, width) // 16 + 2, min(height, width) // 4))
        img[(yy - cy) ** 2 + (xx - cx) ** 2 < radius * radius] = _level(rng)
    return img


def ramp_image(height: int = 128, width: int = 128, low: float = 2.0,
               high: float = 250.0, diagonal: bool = False) -> np.ndarray:
    """Linear intensity ramp, horizontal by default or along the diagonal."""
    cols = np.arange(width, dtype=np.float64)
    if diagonal:
        rows = np.arange(height, dtype=np.float64)[:, None]
        t = (rows + cols) / (height + width - 2)
    else:
        t = np.tile(cols / (width - 1), (height, 1))
    return np.floor(low + (high - low) * t + 0.5)


def stripes_image(seed: int, height: int = 128, width: int = 128,
                  period: int = 16) -> np.ndarray:
    """Vertical bands of alternating random levels."""
    rng = np.random.default_rng(seed)
    n_bands = (width + period - 1) // period
    levels = [_level(rng) for _ in range(n_bands)]
    img = np.empty((height, width))
    for band, value in enumerate(levels):
        img[:, band * period : (band + 1) * period] = value
    return img


def rings_image(seed: int, height: int = 128, width: int = 128,
                rings: int = 7) -> np.ndarray:
    """Concentric constant-level annuli around the image center."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width]
    r = np.sqrt((yy - (height - 1) / 2.0) ** 2 + (xx - (width - 1) / 2.0) ** 2)
    edges = np.linspace(0.0, float(r.max()) + 1.0, rings + 1)
    img = np.empty((height, width))
    for i in range(rings):
        img[(r >= edges[i]) & (r < edges[i + 1])] = _level(rng)
    return img


def camera_photo(size: int = 256) -> np.ndarray:
    """Cameraman test photograph, block-averaged from 512x512 and rounded."""
    from skimage import data  # deferred: pulls in the bundled sample images

    cam = data.camera().astype(np.float64)
    factor = cam.shape[0] // size
    if factor < 1 or cam.shape[0] % size or cam.shape[1] % size:
        raise ValueError(f"size must divide {cam.shape[0]}, got {size}")
    blocks = cam.reshape(size, factor, size, factor)
    return np.floor(blocks.mean(axis=(1, 3)) + 0.5)


def make_corpus(out_dir, seed: int = 7) -> list[Path]:
    """Write the ten-image benchmark corpus plus a manifest.txt.

    Returns the image paths in manifest order. Fully deterministic for a
    given seed.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = [
        ("01_blocks.pgm", piecewise_blocks(seed)),
        ("02_blocks.pgm", piecewise_blocks(seed + 1)),
        ("03_disks.pgm", disks_image(seed + 2)),
        ("04_disks.pgm", disks_image(seed + 3)),
        ("05_ramp_h.pgm", ramp_image()),
        ("06_ramp_diag.pgm", ramp_image(diagonal=True)),
        ("07_stripes.pgm", stripes_image(seed + 4)),
        ("08_rings.pgm", rings_image(seed + 5)),
        ("09_blocks_wide.pgm", piecewise_blocks(seed + 6, height=96, width=128)),
        ("10_camera.pgm", camera_photo()),
    ]
    paths = []
    for name, img in entries:
        path = out / name
        write_image(img, path)
        paths.append(path)
    manifest = out / "manifest.txt"
    manifest.write_text("".join(p.name + "\n" for p in paths), encoding="ascii")
    return paths
