"""Exterior-power matrix elements of GL(n,R) and related vectors.

The wedge basis of the full exterior algebra of C^n is labelled by
signatures.  In that basis the matrix element between two signatures of
equal weight k is the k x k minor of g taken on the rows and columns where
the respective signatures are set, both in ascending index order (this
fixes the sign convention; signatures of unequal weight pair to zero).

`delta_w` is the sum of all principal minors weighted by the dimensions of
the exterior powers.  Convolving against it on the orthogonal group acts as
a projector, and multiplying the radial Gaussian kernel by it produces the
operator whose eigenvalues are the Archimedean L-factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import comb

import numpy as np

from .matrices import (
    _iwasawa_kab,
    borel_character_positive_diag,
    iwasawa_decompose,
)
from .params import Signature, SpectralParams, all_signatures

MAX_POLY_DIM = 8


def _submatrix_det(g: np.ndarray, rows, cols) -> np.ndarray:
    """Determinant of g[rows, cols] over stacked matrices (..., n, n).

    Grades 0..2 use the direct formulas; larger minors go through the LU
    path in `np.linalg.det`.
    """
    k = len(rows)
    if k == 0:
        return np.ones(g.shape[:-2])
    if k == 1:
        return g[..., rows[0], cols[0]]
    if k == 2:
        r0, r1 = rows
        c0, c1 = cols
        return g[..., r0, c0] * g[..., r1, c1] - g[..., r0, c1] * g[..., r1, c0]
    sub = g[..., rows, :][..., :, cols]
    return np.linalg.det(sub)


def minor_matrix_element(eps_row: Signature, eps_col: Signature, g) -> float:
    """Wedge-basis matrix element of g between two signatures.

    Returns the minor on rows `eps_row`, columns `eps_col` (ascending), or
    0.0 when the weights differ.  Grade zero gives 1.
    """
    eps_row = Signature.of(eps_row)
    eps_col = Signature.of(eps_col)
    g = np.asarray(g, dtype=float)
    if g.shape[-1] != len(eps_row) or g.shape[-1] != len(eps_col):
        raise ValueError(
            f"signature lengths {len(eps_row)}, {len(eps_col)} do not match "
            f"matrix dimension {g.shape[-1]}"
        )
    if eps_row.weight != eps_col.weight:
        return 0.0
    return float(_submatrix_det(g, eps_row.indices, eps_col.indices))


def minor_batch(g: np.ndarray, eps_row: Signature, eps_col: Signature) -> np.ndarray:
    """Stacked version of `minor_matrix_element` over (..., n, n) input."""
    if eps_row.weight != eps_col.weight:
        return np.zeros(g.shape[:-2])
    return _submatrix_det(g, eps_row.indices, eps_col.indices)


def delta_w(g) -> float:
    """Sum of all principal minors of g weighted by binomial(n, grade)."""
    g = np.asarray(g, dtype=float)
    return float(delta_w_batch(g))


def delta_w_batch(g: np.ndarray) -> np.ndarray:
    n = g.shape[-1]
    total = np.ones(g.shape[:-2])  # grade-0 term
    for sig in all_signatures(n):
        k = sig.weight
        if k == 0:
            continue
        idx = sig.indices
        total = total + comb(n, k) * _submatrix_det(g, idx, idx)
    return total


def delta_w_charpoly_oracle(g) -> float:
    """Independent route to `delta_w` through elementary symmetric functions.

    det(tI + g) = sum_k e_k(g) t^(n-k), and the weighted-minor sum equals
    sum_k binomial(n, k) e_k(g).  The coefficients come from the eigenvalues
    of g, so no minor is ever enumerated.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    coeffs = np.poly(-g)  # [1, e_1, ..., e_n]
    return float(np.real(sum(comb(n, k) * coeffs[k] for k in range(n + 1))))


@dataclass(frozen=True)
class MultilinearPolynomial:
    """Finite sum of signed monomials in matrix entries, each of power <= 1.

    `terms` maps a frozenset of zero-based (row, col) index pairs to its
    complex coefficient; the empty frozenset is the constant term.  Within a
    monomial no row or column index repeats, which is what makes the
    entrywise Fourier rule applicable.
    """

    n: int
    terms: dict[frozenset, complex]

    def __post_init__(self):
        for mono in self.terms:
            rows = [i for i, _ in mono]
            cols = [j for _, j in mono]
            if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
                raise ValueError(f"monomial {sorted(mono)} repeats a row or column")
            if rows and not all(0 <= i < self.n and 0 <= j < self.n for i, j in mono):
                raise ValueError(f"monomial {sorted(mono)} has indices outside 0..{self.n - 1}")

    def evaluate(self, g) -> complex:
        g = np.asarray(g)
        if g.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n}x{self.n} matrix, got {g.shape}")
        total = 0j
        for mono, coeff in self.terms.items():
            value = coeff
            for i, j in mono:
                value = value * g[i, j]
            total += value
        return complex(total)

    def max_coefficient_difference(self, other: "MultilinearPolynomial") -> float:
        keys = set(self.terms) | set(other.terms)
        return max(
            abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) for k in keys
        )


def delta_w_polynomial(n: int) -> MultilinearPolynomial:
    """Exact signed-monomial expansion of `delta_w` in dimension n."""
    if n > MAX_POLY_DIM:
        raise ValueError(f"dimension {n} too large for expansion (max {MAX_POLY_DIM})")
    if n < 1:
        raise ValueError("dimension must be at least 1")
    terms: dict[frozenset, complex] = {frozenset(): 1.0 + 0j}
    for sig in all_signatures(n):
        k = sig.weight
        if k == 0:
            continue
        idx = sig.indices
        weight = comb(n, k)
        for perm in permutations(range(k)):
            sign = _permutation_sign(perm)
            mono = frozenset((idx[i], idx[perm[i]]) for i in range(k))
            terms[mono] = terms.get(mono, 0j) + weight * sign
    return MultilinearPolynomial(n=n, terms=terms)


def _permutation_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def phi_basis(eps_row: Signature, p: SpectralParams, g) -> complex:
    """Basis matrix element: wedge element on the orthogonal part of g times
    the spherical-shape character on its diagonal part.

    Vanishes when |eps_row| differs from |p.epsilon|; equals the Kronecker
    delta at g = identity.
    """
    eps_row = Signature.of(eps_row)
    if len(eps_row) != p.n:
        raise ValueError("signature length does not match spectral parameters")
    if eps_row.weight != p.epsilon.weight:
        return 0.0
    factors = iwasawa_decompose(g)
    el = minor_matrix_element(eps_row, p.epsilon, factors.k)
    chi = borel_character_positive_diag(factors.a, p.gamma, p.rho)
    return complex(el * chi)


def epsilon_spherical(p: SpectralParams, g) -> complex:
    """The distinguished vector of the representation, normalized to 1 at g=I."""
    return phi_basis(p.epsilon, p, g)


def phi_basis_batch(eps_row: Signature, p: SpectralParams, g: np.ndarray) -> np.ndarray:
    """Stacked `phi_basis` over (..., n, n) without per-sample validation."""
    k, a, _ = _iwasawa_kab(g)
    el = minor_batch(k, eps_row, p.epsilon)
    return el * borel_character_positive_diag(a, p.gamma, p.rho)


def epsilon_spherical_batch(p: SpectralParams, g: np.ndarray) -> np.ndarray:
    return phi_basis_batch(p.epsilon, p, g)
