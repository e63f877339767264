"""Sobel gradients, binary edge maps, and the two model-based detectors.

Besides the plain Sobel baseline there are two ways to turn a solved
coefficient field into edges: run Sobel on the synthesized image, or run
Sobel on every parameter map and combine the magnitudes pixelwise with an
l2 norm.  Both end in normalization and thresholding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .model import SynthesisOperator

# Normative kernel values for this project; gy is the transpose of gx.
SOBEL_GX = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_GY = SOBEL_GX.T.copy()


@dataclass(frozen=True)
class GradMap:
    """Nonnegative gradient magnitudes, optionally scaled to max 1."""

    values: np.ndarray
    normalized: bool


@dataclass(frozen=True)
class EdgeMap:
    """Binary edge mask plus the threshold that produced it."""

    mask: np.ndarray
    threshold_used: float


def _sobel_raw(img: np.ndarray) -> np.ndarray:
    # replicate padding: constant regions give zero response out to the border
    gx = ndimage.correlate(img, SOBEL_GX, mode="nearest")
    gy = ndimage.correlate(img, SOBEL_GY, mode="nearest")
    return np.hypot(gx, gy)


def _normalize(values: np.ndarray) -> np.ndarray:
    peak = values.max()
    return values / peak if peak > 0 else values.copy()


def sobel_magnitude(img: np.ndarray, normalize: bool = True) -> GradMap:
    """Sobel gradient magnitude of a grayscale image.

    Uses the fixed 3x3 kernel pair with replicate padding; with
    ``normalize`` the result is scaled so its maximum is 1 (a constant
    image stays all-zero).
    """
    if img.ndim != 2 or min(img.shape) < 3:
        raise ValueError(f"image of shape {img.shape} is smaller than the 3x3 kernel")
    mag = _sobel_raw(img)
    if normalize:
        return GradMap(_normalize(mag), True)
    return GradMap(mag, False)


def threshold_map(g: GradMap, t: float) -> EdgeMap:
    """Binary mask of pixels with gradient value >= ``t``."""
    if not g.normalized:
        raise ValueError("threshold_map expects a normalized gradient map")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {t}")
    return EdgeMap(g.values >= t, float(t))


def synthesis_gradient(xhat: np.ndarray, op: SynthesisOperator) -> GradMap:
    """Sobel magnitude of the synthesized (denoised) image."""
    return sobel_magnitude(op.apply(xhat))


def edges_from_synthesis(xhat: np.ndarray, op: SynthesisOperator, t: float) -> EdgeMap:
    """Detector 1: synthesize, then Sobel, then threshold."""
    return threshold_map(synthesis_gradient(xhat, op), t)


def parameter_map_gradient(xhat: np.ndarray) -> GradMap:
    """Pixelwise l2 of the raw Sobel magnitudes of every parameter map.

    The per-map magnitudes are combined without any per-map rescaling,
    then the single combined map is normalized to max 1.
    """
    if xhat.ndim != 3 or min(xhat.shape[1:]) < 3:
        raise ValueError(f"coefficient field of shape {xhat.shape} too small for Sobel")
    sq = np.zeros(xhat.shape[1:])
    for chan in xhat:
        mag = _sobel_raw(chan)
        sq += mag * mag
    return GradMap(_normalize(np.sqrt(sq)), True)


def edges_from_parameter_maps(xhat: np.ndarray, t: float) -> EdgeMap:
    """Detector 2: combined parameter-map gradient, then threshold."""
    return threshold_map(parameter_map_gradient(xhat), t)
