"""Grayscale image container conventions and file I/O.

An image is a 2-D ``float64`` numpy array, row-major, ``shape == (height,
width)``, holding gray levels nominally in [0, 255]. Files are 8-bit
grayscale PGM (P2 or P5, maxval up to 255) or 8-bit grayscale PNG; color or
deeper files are rejected, never converted.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
from PIL import Image as PILImage

from .errors import DomainError, FormatError, ShapeError

__all__ = ["as_image", "quantize", "read_image", "write_image"]

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_WS = b" \t\r\n"


def as_image(data) -> np.ndarray:
    """Coerce to a valid image array (2-D float64, at least 2x2, all finite)."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"image must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 2 or arr.shape[1] < 2:
        raise ShapeError(f"image must be at least 2x2, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise DomainError("image contains non-finite values")
    return arr


def quantize(img) -> np.ndarray:
    """Clamp to [0, 255] and round half-up, as done when writing to file."""
    arr = as_image(img)
    return np.floor(np.clip(arr, 0.0, 255.0) + 0.5)


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # PGM headers allow '#' comments running to end of line anywhere between
    # tokens.
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WS:
            pos += 1
        elif c == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    if pos >= n:
        raise FormatError("truncated PGM header")
    start = pos
    while pos < n and data[pos] not in _WS and data[pos] != ord("#"):
        pos += 1
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _next_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"invalid PGM {what}: {token!r}") from None
    return value, pos


def _read_pgm(data: bytes) -> np.ndarray:
    magic, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"unsupported PGM magic {magic!r}")
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 2 or height < 2:
        raise FormatError(f"image too small: {width}x{height}")
    if not 0 < maxval < 256:
        raise FormatError(f"only 8-bit PGM supported, got maxval {maxval}")

    if magic == b"P5":
        # Exactly one whitespace byte separates maxval from the raster.
        if pos >= len(data) or data[pos] not in _WS:
            raise FormatError("corrupt P5 header")
        raster = data[pos + 1 : pos + 1 + width * height]
        if len(raster) < width * height:
            raise FormatError("truncated P5 pixel data")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\r\n]*", b"", data[pos:])
        tokens = body.split()
        if len(tokens) != width * height:
            raise FormatError(
                f"P2 expects {width * height} samples, found {len(tokens)}"
            )
        try:
            values = np.array([int(t) for t in tokens], dtype=np.int64)
        except ValueError:
            raise FormatError("non-numeric P2 sample") from None
        if values.min() < 0:
            raise FormatError("negative P2 sample")

    if values.max(initial=0) > maxval:
        raise FormatError("sample exceeds declared maxval")
    return values.astype(np.float64).reshape(height, width)


def _read_png(path: Path) -> np.ndarray:
    with PILImage.open(path) as im:
        mode = im.mode
        if mode != "L":
            if mode in ("I", "I;16", "I;16B", "I;16L", "I;16N"):
                raise FormatError("16-bit PNG not supported, need 8-bit grayscale")
            raise FormatError(f"PNG mode {mode!r} is not 8-bit grayscale")
        arr = np.asarray(im, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 2:
        raise FormatError(f"image too small: {arr.shape}")
    return arr


def read_image(path) -> np.ndarray:
    """Read an 8-bit grayscale PGM/PNG file as a float64 image in [0, 255].

    The format is detected from the file content, not the extension. Raises
    ``OSError`` for missing/unreadable files and :class:`FormatError` for
    unsupported or corrupt content (color images and 16-bit depths included).
    """
    path = Path(path)
    data = path.read_bytes()
    if data[:2] in (b"P2", b"P5"):
        return _read_pgm(data)
    if data[:8] == _PNG_MAGIC:
        return _read_png(path)
    raise FormatError(f"{path.name}: not a PGM or PNG file")


def write_image(img, path) -> None:
    """Write an image as 8-bit grayscale; the extension picks the format.

    ``.pgm`` produces binary P5, ``.png`` an 8-bit grayscale PNG. Values are
    clamped to [0, 255] and rounded half-up, so a read-back returns exactly
    ``quantize(img)``.
    """
    path = Path(path)
    stored = quantize(img).astype(np.uint8)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        height, width = stored.shape
        header = f"P5\n{width} {height}\n255\n".encode("ascii")
        path.write_bytes(header + stored.tobytes())
    elif suffix == ".png":
        PILImage.fromarray(stored, mode="L").save(path, format="PNG")
    else:
        raise FormatError(f"unsupported output extension {suffix!r} (use .pgm or .png)")
