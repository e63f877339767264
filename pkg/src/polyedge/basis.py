"""Polynomial bases in 1D and their separable 2D extensions.

A 1D basis of degree ``K`` consists of ``K + 1`` vectors sampled on a
uniform grid over ``[0, 1]``.  The 2D basis images are the outer products
of one vertical and one horizontal 1D vector, giving ``(K + 1)**2``
images that define the overcomplete synthesis model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateBasisError

STANDARD = "standard"
ORTHONORMAL = "orthonormal"

# Gram deviation accepted for a basis advertised as orthonormal.
_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class Basis1D:
    """A sampled polynomial basis on a uniform grid.

    Attributes
    ----------
    degree : int
        Highest polynomial degree ``K``; the basis has ``K + 1`` vectors.
    length : int
        Number of grid samples.
    vectors : ndarray, shape (degree + 1, length)
        Row ``k`` holds the k-th basis vector.
    kind : str
        Either ``"standard"`` (monomials on the grid) or ``"orthonormal"``.
    """

    degree: int
    length: int
    vectors: np.ndarray
    kind: str


@dataclass(frozen=True)
class Basis2D:
    """Separable 2D basis: all outer products of two 1D bases.

    ``images`` has shape ``((K+1)**2, M, N)`` where entry ``k*(K+1) + l``
    is the outer product of vertical vector ``k`` and horizontal vector
    ``l`` (row-degree-major ordering, fixed project-wide).
    """

    vertical: Basis1D
    horizontal: Basis1D
    images: np.ndarray

    @property
    def degree(self) -> int:
        return self.vertical.degree

    @property
    def image_shape(self) -> tuple[int, int]:
        return self.vertical.length, self.horizontal.length

    @property
    def n_images(self) -> int:
        return (self.degree + 1) ** 2


def sample_grid(length: int) -> np.ndarray:
    """Uniform sample positions ``t_n = n / (length - 1)`` on ``[0, 1]``."""
    if length < 1:
        raise DegenerateBasisError(f"grid needs at least one sample, got {length}")
    if length == 1:
        return np.zeros(1)
    return np.arange(length, dtype=float) / (length - 1)


def _check_args(degree: int, length: int) -> None:
    if degree < 0:
        raise DegenerateBasisError(f"degree must be >= 0, got {degree}")
    if length < degree + 1:
        raise DegenerateBasisError(
            f"{length} samples cannot carry a degree-{degree} basis "
            f"(need at least {degree + 1})"
        )


def make_standard_basis(degree: int, length: int) -> Basis1D:
    """Monomial basis ``1, t, t**2, ...`` sampled on the uniform grid.

    Parameters
    ----------
    degree : int
        Highest power included.
    length : int
        Number of samples; must be at least ``degree + 1``.
    """
    _check_args(degree, length)
    t = sample_grid(length)
    vectors = np.stack([t**k for k in range(degree + 1)])
    return Basis1D(degree, length, vectors, STANDARD)


def make_orthonormal_basis(degree: int, length: int) -> Basis1D:
    """Orthonormalized polynomial basis spanning the monomials.

    Modified Gram-Schmidt applied to the standard basis in increasing
    degree order, with one re-orthogonalization pass; deterministic for
    fixed inputs.
    """
    _check_args(degree, length)
    vectors = make_standard_basis(degree, length).vectors.astype(float).copy()
    for k in range(degree + 1):
        for _ in range(2):  # second pass cleans up rounding residue
            for j in range(k):
                vectors[k] -= (vectors[j] @ vectors[k]) * vectors[j]
        norm = np.linalg.norm(vectors[k])
        if norm < 1e-12 * max(1.0, np.linalg.norm(vectors[0])):
            raise DegenerateBasisError(
                f"rank loss while orthonormalizing vector {k} of degree-{degree} basis"
            )
        vectors[k] /= norm
    gram = vectors @ vectors.T
    if np.max(np.abs(gram - np.eye(degree + 1))) > _ORTHO_TOL:
        raise DegenerateBasisError("orthonormalization failed to reach tolerance")
    return Basis1D(degree, length, vectors, ORTHONORMAL)


def make_basis(kind: str, degree: int, length: int) -> Basis1D:
    """Dispatch on basis kind name (``"standard"`` or ``"orthonormal"``)."""
    if kind == STANDARD:
        return make_standard_basis(degree, length)
    if kind == ORTHONORMAL:
        return make_orthonormal_basis(degree, length)
    raise ConfigurationError(f"unknown basis kind {kind!r}")


def make_basis2d(vertical: Basis1D, horizontal: Basis1D) -> Basis2D:
    """Build all outer-product images of two 1D bases of equal degree."""
    if vertical.degree != horizontal.degree:
        raise ConfigurationError(
            f"vertical degree {vertical.degree} != horizontal degree {horizontal.degree}"
        )
    n = vertical.degree + 1
    images = np.einsum("km,ln->klmn", vertical.vectors, horizontal.vectors)
    images = images.reshape(n * n, vertical.length, horizontal.length)
    return Basis2D(vertical, horizontal, images)
