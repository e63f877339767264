"""Grayscale image IO: PGM (P2/P5, maxval 255) plus optional PNG.

Images live in memory as float arrays in the nominal 0..255 range; all
quantization (clamping and rounding) happens at write time only.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import PnmFormatError

# refuse absurd header dimensions before allocating
_MAX_PIXELS = 1 << 26


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            while pos < n and data[pos : pos + 1] != b"\n":
                pos += 1
        else:
            break
    if pos >= n:
        raise PnmFormatError("unexpected end of header")
    start = pos
    while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _next_token(data, pos)
    try:
        return int(token), pos
    except ValueError:
        raise PnmFormatError(f"malformed {what} field {token!r}") from None


def read_pgm(path) -> np.ndarray:
    """Read a P2 or P5 PGM file with maxval 255 as a float array."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise PnmFormatError(f"unsupported magic {magic!r} (need P2 or P5)")
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width <= 0 or height <= 0:
        raise PnmFormatError(f"bad dimensions {width}x{height}")
    if width * height > _MAX_PIXELS:
        raise PnmFormatError(f"dimension overflow: {width}x{height}")
    if maxval != 255:
        raise PnmFormatError(f"unsupported maxval {maxval} (only 255)")
    count = width * height
    if magic == b"P5":
        if pos >= len(data) or not data[pos : pos + 1].isspace():
            raise PnmFormatError("missing whitespace before binary raster")
        raster = data[pos + 1 : pos + 1 + count]
        if len(raster) < count:
            raise PnmFormatError(f"raster truncated: {len(raster)} of {count} bytes")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = b" ".join(line.split(b"#", 1)[0] for line in data[pos:].split(b"\n"))
        tokens = body.split()
        if len(tokens) < count:
            raise PnmFormatError(f"raster truncated: {len(tokens)} of {count} samples")
        try:
            values = np.array(tokens[:count], dtype=np.int64)
        except ValueError:
            raise PnmFormatError("non-numeric sample in ASCII raster") from None
        if values.min() < 0 or values.max() > 255:
            raise PnmFormatError("sample outside 0..255")
    return values.reshape(height, width).astype(float)


def quantize(img: np.ndarray) -> np.ndarray:
    """Clamp to [0, 255] and round half away from zero to uint8."""
    clipped = np.clip(img, 0.0, 255.0)
    return np.floor(clipped + 0.5).astype(np.uint8)


def write_pgm(path, img: np.ndarray) -> None:
    """Write a float image as binary (P5) PGM, quantizing on the way."""
    if img.ndim != 2:
        raise PnmFormatError(f"need a 2D image, got shape {img.shape}")
    raster = quantize(img)
    height, width = raster.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(raster.tobytes())


def _is_png(path) -> bool:
    return os.fspath(path).lower().endswith(".png")


def read_image(path) -> np.ndarray:
    """Read a grayscale image (PGM required; PNG supported via Pillow)."""
    if _is_png(path):
        from PIL import Image

        with Image.open(path) as im:
            return np.asarray(im.convert("L"), dtype=float)
    return read_pgm(path)


def write_image(path, img: np.ndarray) -> None:
    """Write a grayscale image, choosing the format from the suffix."""
    if _is_png(path):
        from PIL import Image

        Image.fromarray(quantize(img), mode="L").save(path)
        return
    write_pgm(path, img)


def write_mask(path, edge_map) -> None:
    """Write a binary edge map as a 0/255 image."""
    write_image(path, np.where(edge_map.mask, 255.0, 0.0))


def mosaic_field(xhat: np.ndarray) -> np.ndarray:
    """Tile the absolute parameter maps into one jointly scaled image.

    Maps are arranged in a (K+1) x (K+1) grid (vertical degree down,
    horizontal degree across) and min-max scaled together to 0..255, so
    relative magnitudes between maps stay visible.
    """
    p, m, n = xhat.shape
    side = int(round(np.sqrt(p)))
    if side * side != p:
        raise ValueError(f"{p} maps do not tile a square mosaic")
    mags = np.abs(xhat)
    lo, hi = mags.min(), mags.max()
    scaled = (mags - lo) * (255.0 / (hi - lo)) if hi > lo else np.zeros_like(mags)
    return scaled.reshape(side, side, m, n).transpose(0, 2, 1, 3).reshape(side * m, side * n)


def write_mosaic(path, xhat: np.ndarray) -> None:
    write_image(path, mosaic_field(xhat))
