"""Deterministic synthetic scenes for demos and evaluation runs.

All generators return float images in the 0..255 range.  They stand in
for the classic photo test images when those are not available, and give
scenes whose true edges are known by construction.
"""

from __future__ import annotations

import numpy as np


def _unit_axes(m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.linspace(0.0, 1.0, m)[:, None]
    s = np.linspace(0.0, 1.0, n)[None, :]
    return t, s


def quadrant_scene(m: int = 64, n: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Four quadratic patches meeting at one vertical and one horizontal
    boundary; returns the image and the true edge mask (the two pixel
    rows/columns adjacent to each boundary)."""
    t, s = _unit_axes(m, n)
    i0, j0 = m // 2, n // 2
    tt = np.broadcast_to(t, (m, n))
    ss = np.broadcast_to(s, (m, n))
    upper = np.arange(m)[:, None] < i0
    left = np.arange(n)[None, :] < j0
    img = np.where(
        upper & left,
        40.0 + 60.0 * tt**2 + 30.0 * ss,
        np.where(
            upper & ~left,
            160.0 - 50.0 * ss**2 + 40.0 * tt,
            np.where(
                ~upper & left,
                190.0 + 60.0 * tt * ss - 40.0 * tt**2,
                70.0 + 90.0 * (1.0 - ss) ** 2 + 20.0 * tt,
            ),
        ),
    )
    mask = np.zeros((m, n), dtype=bool)
    mask[i0 - 1 : i0 + 1, :] = True
    mask[:, j0 - 1 : j0 + 1] = True
    return img, mask


def disks_scene(m: int = 246, n: int = 300, seed: int = 7) -> np.ndarray:
    """Coin-like bright disks with gentle interior shading on a dark
    background; positions jittered reproducibly from ``seed``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = np.arange(m)[:, None]
    cols = np.arange(n)[None, :]
    img = 18.0 + 10.0 * cols / max(n - 1, 1)
    spacing = 62
    for ci in range(spacing // 2, m, spacing):
        for cj in range(spacing // 2, n, spacing):
            cy = ci + rng.integers(-6, 7)
            cx = cj + rng.integers(-6, 7)
            radius = float(rng.integers(18, 27))
            level = float(rng.integers(130, 210))
            r2 = (rows - cy) ** 2 + (cols - cx) ** 2
            inside = r2 <= radius**2
            shading = level - 35.0 * r2 / radius**2
            img = np.where(inside, shading, img)
    return np.clip(img, 0.0, 255.0)


def grains_scene(m: int = 256, n: int = 256, seed: int = 11) -> np.ndarray:
    """Rice-like bright ellipses scattered over a graded background."""
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = np.arange(m)[:, None].astype(float)
    cols = np.arange(n)[None, :].astype(float)
    img = 35.0 + 45.0 * rows / max(m - 1, 1)
    for _ in range(140):
        cy = float(rng.integers(6, m - 6))
        cx = float(rng.integers(6, n - 6))
        angle = float(rng.random() * np.pi)
        a, b = float(rng.integers(9, 14)), float(rng.integers(3, 5))
        level = float(rng.integers(150, 230))
        ca, sa = np.cos(angle), np.sin(angle)
        u = (rows - cy) * ca + (cols - cx) * sa
        v = -(rows - cy) * sa + (cols - cx) * ca
        inside = (u / a) ** 2 + (v / b) ** 2 <= 1.0
        img = np.where(inside, level, img)
    return np.clip(img, 0.0, 255.0)


def blocks_scene(m: int = 256, n: int = 256) -> np.ndarray:
    """Piecewise-smooth scene: graded sky, dark tower, triangle roof,
    bright ground band."""
    t, s = _unit_axes(m, n)
    img = 170.0 - 60.0 * t + 20.0 * s * (1.0 - s)
    img = np.broadcast_to(img, (m, n)).copy()
    rows = np.arange(m)[:, None]
    cols = np.arange(n)[None, :]
    tower = (rows >= int(0.25 * m)) & (rows < int(0.8 * m)) & (
        cols >= int(0.55 * n)
    ) & (cols < int(0.7 * n))
    img[tower] = 45.0
    roof = (rows >= int(0.15 * m)) & (rows < int(0.25 * m)) & (
        np.abs(cols - int(0.625 * n)) <= (rows - int(0.15 * m)) * 1.2
    )
    img[roof] = 60.0
    ground = rows >= int(0.8 * m)
    img[np.broadcast_to(ground, (m, n))] = 200.0 - 80.0 * np.broadcast_to(s, (m, n))[
        np.broadcast_to(ground, (m, n))
    ]
    box = (rows >= int(0.62 * m)) & (rows < int(0.78 * m)) & (cols >= int(0.12 * n)) & (
        cols < int(0.3 * n)
    )
    img[box] = 110.0
    return np.clip(img, 0.0, 255.0)
