"""Group decompositions of GL(n,R) and the triangular Borel character.

Conventions used throughout the package:

* the Borel subgroup is LOWER triangular, so the triangular (Iwasawa)
  factorization reads g = k * diag(a) * n with k orthogonal, a strictly
  positive and n unit lower-triangular;
* the polar (Cartan) factorization reads g = k1 * diag(a) * k2 with both
  k-factors orthogonal and a the singular values, non-increasing.

Matrices are plain numpy arrays.  Internal helpers accept stacked inputs of
shape (..., n, n) and broadcast over the leading axes; the public functions
take a single matrix and return factor records with residual checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteEntryError, SingularMatrixError, TriangularInputError
from .params import SpectralParams

# Inputs with |det g| below DET_GUARD * (max |entry|)^n are rejected as
# singular; the scale factor makes the guard invariant under g -> t*g.
DET_GUARD = 1e-12


def as_group_element(g, *, name: str = "g") -> np.ndarray:
    """Validate a square real matrix intended as a GL(n,R) element."""
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise NonFiniteEntryError(f"{name} contains non-finite entries")
    return g


def _check_invertible(g: np.ndarray, *, name: str = "g") -> None:
    scale = np.abs(g).max()
    if scale == 0.0 or abs(np.linalg.det(g)) <= DET_GUARD * scale ** g.shape[-1]:
        raise SingularMatrixError(f"{name} is singular within tolerance")


@dataclass(frozen=True)
class IwasawaFactors:
    """Factors of g = k * diag(a) * n (lower-triangular convention)."""

    k: np.ndarray
    a: np.ndarray
    n_factor: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.k @ (self.a[:, None] * self.n_factor)

    def residual(self, g) -> float:
        """Frobenius reconstruction error against the original matrix."""
        return float(np.linalg.norm(self.reconstruct() - np.asarray(g, dtype=float)))


@dataclass(frozen=True)
class CartanFactors:
    """Factors of g = k1 * diag(a) * k2 with a non-increasing."""

    k1: np.ndarray
    a: np.ndarray
    k2: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.k1 @ (self.a[:, None] * self.k2)

    def residual(self, g) -> float:
        return float(np.linalg.norm(self.reconstruct() - np.asarray(g, dtype=float)))


def _iwasawa_kab(g: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stacked triangular factorization g = k b, b = diag(a) n lower-triangular.

    Returns (k, a, b) where a = diag(b) > 0.  Uses Householder QR on the
    index-reversed matrix: with J the exchange matrix, JgJ = QR (R upper
    triangular, diagonal made positive) gives k = JQJ and b = JRJ.
    """
    flipped = g[..., ::-1, ::-1]
    q, r = np.linalg.qr(flipped)
    d = np.where(np.diagonal(r, axis1=-2, axis2=-1) < 0, -1.0, 1.0)
    q = q * d[..., None, :]
    r = r * d[..., :, None]
    k = q[..., ::-1, ::-1]
    b = r[..., ::-1, ::-1]
    a = np.diagonal(b, axis1=-2, axis2=-1)
    return k, a, b


def _cartan_kak(g: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stacked polar factorization g = k1 diag(a) k2, singular values sorted."""
    u, s, vh = np.linalg.svd(g)
    return u, s, vh


def iwasawa_decompose(g) -> IwasawaFactors:
    """Factor g = k * diag(a) * n with a > 0; unique for invertible g.

    Raises `SingularMatrixError` when |det g| falls below the guard and
    `NonFiniteEntryError` on NaN or infinite entries.
    """
    g = as_group_element(g)
    _check_invertible(g)
    k, a, b = _iwasawa_kab(g)
    n_factor = b / a[:, None]
    # scrub roundoff so the factor is triangular by construction
    n_factor = np.tril(n_factor)
    np.fill_diagonal(n_factor, 1.0)
    return IwasawaFactors(k=k, a=a.copy(), n_factor=n_factor)


def cartan_decompose(g) -> CartanFactors:
    """Factor g = k1 * diag(a) * k2 with a the singular values, descending."""
    g = as_group_element(g)
    _check_invertible(g)
    k1, a, k2 = _cartan_kak(g)
    return CartanFactors(k1=k1, a=a, k2=k2)


def _check_lower_triangular(b: np.ndarray) -> None:
    n = b.shape[-1]
    if n > 1:
        upper = b[np.triu_indices(n, k=1)]
        scale = max(np.abs(b).max(), 1.0)
        if np.abs(upper).max() > 1e-12 * scale:
            raise TriangularInputError("matrix is not lower-triangular")
    diag = np.diagonal(b)
    if np.any(diag == 0.0):
        raise TriangularInputError("triangular matrix has a zero diagonal entry")


def borel_character(p: SpectralParams, b) -> complex:
    """Character of the lower-triangular subgroup at b.

    Value: prod_j sign(b_jj)^eps_j * |b_jj|^(i*gamma_j + rho_j).
    Multiplicative in b; powers of |b_jj| are taken through the real
    logarithm, so there is no branch ambiguity.
    """
    b = as_group_element(b, name="b")
    if b.shape[0] != p.n:
        raise ValueError(f"matrix has dimension {b.shape[0]}, params expect {p.n}")
    _check_lower_triangular(b)
    diag = np.diagonal(b)
    exponent = 1j * np.asarray(p.gamma) + np.asarray(p.rho)
    value = complex(np.exp(np.sum(exponent * np.log(np.abs(diag)))))
    sign_flip = sum(e for e, d in zip(p.epsilon, diag) if d < 0)
    return -value if sign_flip % 2 else value


def borel_character_positive_diag(a: np.ndarray, gamma, rho) -> np.ndarray:
    """Spherical-shape character prod_j a_j^(i*gamma_j + rho_j) for stacked a > 0.

    `a` has shape (..., n); the exponent is applied entrywise and the product
    taken over the last axis.
    """
    exponent = 1j * np.asarray(gamma) + np.asarray(rho)
    return np.exp(np.log(a) @ exponent)
