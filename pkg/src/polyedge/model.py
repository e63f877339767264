"""Coefficient fields and the overcomplete synthesis operator.

A coefficient field stacks the ``(K+1)**2`` parameter maps of an image as
an ndarray of shape ``((K+1)**2, M, N)``, ordered to match the basis
images.  The synthesis operator multiplies each map elementwise with its
basis image and sums; it is never materialized as a matrix (it would be a
block of diagonals), so apply/adjoint are streaming elementwise passes.
"""

from __future__ import annotations

import numpy as np

from .basis import Basis2D


def field_shape(basis: Basis2D) -> tuple[int, int, int]:
    """Shape of a coefficient field compatible with ``basis``."""
    m, n = basis.image_shape
    return basis.n_images, m, n


def zero_field(basis: Basis2D) -> np.ndarray:
    return np.zeros(field_shape(basis))


def flatten_field(x: np.ndarray) -> np.ndarray:
    """Stack a field into one vector: per-map column-major, maps in order.

    This is the vector layout the (conceptual) synthesis matrix acts on;
    the dense test oracles rely on it.
    """
    p, m, n = x.shape
    return x.transpose(0, 2, 1).reshape(p * m * n)


def unflatten_field(vec: np.ndarray, shape: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`flatten_field` for the given field shape."""
    p, m, n = shape
    if vec.size != p * m * n:
        raise ValueError(f"vector of size {vec.size} does not fill field {shape}")
    return vec.reshape(p, n, m).transpose(0, 2, 1)


class SynthesisOperator:
    """Maps a coefficient field to an image through the basis images.

    apply:   ``y = sum_k images[k] * x[k]`` (elementwise products).
    adjoint: ``x[k] = images[k] * y``.
    """

    def __init__(self, basis: Basis2D):
        self.basis = basis

    @property
    def degree(self) -> int:
        return self.basis.degree

    @property
    def image_shape(self) -> tuple[int, int]:
        return self.basis.image_shape

    @property
    def n_maps(self) -> int:
        return self.basis.n_images

    def _check_field(self, x: np.ndarray) -> None:
        if x.shape != field_shape(self.basis):
            raise ValueError(
                f"field shape {x.shape} incompatible with operator {field_shape(self.basis)}"
            )

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Synthesize the image from a coefficient field."""
        self._check_field(x)
        return np.einsum("kmn,kmn->mn", self.basis.images, x)

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        """Adjoint map: one basis-weighted copy of the image per map."""
        if y.shape != self.image_shape:
            raise ValueError(
                f"image shape {y.shape} incompatible with operator {self.image_shape}"
            )
        return self.basis.images * y[None, :, :]

    def max_diag_ppt(self) -> float:
        """Largest diagonal entry of P P^T: max over pixels of the
        summed squared basis images (P P^T is diagonal by construction)."""
        return float((self.basis.images**2).sum(axis=0).max())
