"""Difference operators, the group l21 norm, and proximal projections.

Difference fields keep the map axis first: vertical differences of a
``(P, M, N)`` field have shape ``(P, M-1, N)``, horizontal ones
``(P, M, N-1)``.  A "group" is the P-vector of values across maps at one
difference pixel; all group operations reduce over axis 0.
"""

from __future__ import annotations

import numpy as np


def diff_vertical(x: np.ndarray) -> np.ndarray:
    """Forward differences down the columns of each map."""
    if x.shape[-2] < 2:
        raise ValueError(f"need at least 2 rows for vertical differences, got {x.shape[-2]}")
    return np.diff(x, axis=-2)


def diff_horizontal(x: np.ndarray) -> np.ndarray:
    """Forward differences along the rows of each map."""
    if x.shape[-1] < 2:
        raise ValueError(f"need at least 2 columns for horizontal differences, got {x.shape[-1]}")
    return np.diff(x, axis=-1)


def diff_vertical_adjoint(d: np.ndarray) -> np.ndarray:
    """Adjoint of the vertical forward difference (negative divergence)."""
    shape = d.shape[:-2] + (d.shape[-2] + 1, d.shape[-1])
    out = np.zeros(shape)
    out[..., :-1, :] -= d
    out[..., 1:, :] += d
    return out


def diff_horizontal_adjoint(d: np.ndarray) -> np.ndarray:
    """Adjoint of the horizontal forward difference."""
    shape = d.shape[:-1] + (d.shape[-1] + 1,)
    out = np.zeros(shape)
    out[..., :-1] -= d
    out[..., 1:] += d
    return out


def group_norms(d: np.ndarray) -> np.ndarray:
    """Per-pixel l2 norm across the map axis."""
    # fused multiply-reduce avoids a full-size temporary
    return np.sqrt(np.einsum("k...,k...->...", d, d))


def norm_l21(d: np.ndarray) -> float:
    """Sum of per-pixel group l2 norms."""
    return float(group_norms(d).sum())


def group_soft_threshold(d: np.ndarray, tau: float) -> np.ndarray:
    """Shrink every pixel group radially by ``tau``; zero groups stay zero."""
    if tau < 0:
        raise ValueError(f"threshold must be nonnegative, got {tau}")
    norms = group_norms(d)
    # max(|g| - tau, 0) / |g|, with zero groups guarded to stay zero
    scale = np.maximum(norms - tau, 0.0)
    scale /= np.where(norms > 0.0, norms, 1.0)
    return d * scale


def dual_ball_step(p: np.ndarray, radius: float) -> np.ndarray:
    """Groupwise projection onto the l2 ball of the given radius:
    ``g -> g * min(1, radius / |g|)``.

    Identical (up to rounding) to ``p - group_soft_threshold(p, radius)``,
    the residual form in which it appears inside the solver derivation;
    this is how the dual variables stay feasible.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    norms = group_norms(p)
    scale = np.minimum(radius / np.where(norms > 0.0, norms, 1.0), 1.0)
    return p * scale


def project_l2_ball(z: np.ndarray, center: np.ndarray, delta: float) -> np.ndarray:
    """Closest point to ``z`` within l2 distance ``delta`` of ``center``."""
    if z.shape != center.shape:
        raise ValueError(f"shape mismatch: {z.shape} vs {center.shape}")
    if delta < 0:
        raise ValueError(f"radius must be nonnegative, got {delta}")
    r = z - center
    dist = float(np.linalg.norm(r))
    if dist <= delta:
        return z.copy()
    return center + r * (delta / dist)
