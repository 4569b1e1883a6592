"""Fourier-transform identities for Gaussian and Feynman matrix measures.

The transform used is (F f)(y) = int dg e^(2 pi i tr(g^T y)) f(g) on matrix
space.  Because every monomial of the weighted minor sum is squarefree in
the matrix entries, the transform of (polynomial) * (product Gaussian)
factorizes into one-dimensional transforms, where

    F[e^(-pi x^2)]    = e^(-pi y^2)
    F[x e^(-pi x^2)]  = i y e^(-pi y^2).

So each monomial of degree d just picks up i^d: the transformed minor sum
is the original evaluated at i*g.  The imaginary-Gaussian (Feynman) variant
picks up the phase e^(-i pi / 4) per entry and complex-conjugates, giving
the global phase e^(-i pi n^2 / 4).  Numeric verification regularizes the
oscillatory integrals by e^(-eps x^2) and truncates at |x| <= 8 / sqrt(eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .exterior import MultilinearPolynomial, delta_w_polynomial

FEYNMAN_KINDS = ("feynman", "x_feynman")
GAUSSIAN_KINDS = ("gaussian", "x_gaussian")


@dataclass(frozen=True)
class TransformRule:
    """Entrywise transform factors by monomial degree in a single entry."""

    degree0: complex = 1.0 + 0j
    degree1: complex = 1j


GAUSSIAN_RULE = TransformRule()


def fourier_monomial_gaussian(
    poly: MultilinearPolynomial, rule: TransformRule = GAUSSIAN_RULE
) -> MultilinearPolynomial:
    """Transform of poly(g) e^(-pi tr(g^T g)) divided by the Gaussian:
    each entry present in a monomial contributes the degree-1 factor.

    Squarefreeness is enforced by the polynomial type itself.
    """
    terms = {
        mono: coeff * rule.degree0 ** (poly.n * poly.n - len(mono)) * rule.degree1 ** len(mono)
        for mono, coeff in poly.terms.items()
    }
    return MultilinearPolynomial(n=poly.n, terms=terms)


def verify_modified_gaussian_identity(n: int) -> float:
    """Max coefficient error of the transformed minor sum against the minor
    sum evaluated at i*g (each degree-d coefficient scaled by i^d)."""
    poly = delta_w_polynomial(n)
    transformed = fourier_monomial_gaussian(poly)
    target = MultilinearPolynomial(
        n=n, terms={mono: coeff * 1j ** len(mono) for mono, coeff in poly.terms.items()}
    )
    return transformed.max_coefficient_difference(target)


def _gauss_quad(f, y: float, eps_reg: float) -> complex:
    def integrand_re(x):
        return np.real(f(x) * np.exp(2j * math.pi * x * y - eps_reg * x * x))

    def integrand_im(x):
        return np.imag(f(x) * np.exp(2j * math.pi * x * y - eps_reg * x * x))

    lim = 12.0
    re, _ = integrate.quad(integrand_re, -lim, lim, epsabs=1e-12, epsrel=1e-10, limit=200)
    im, _ = integrate.quad(integrand_im, -lim, lim, epsabs=1e-12, epsrel=1e-10, limit=200)
    return complex(re, im)


def _fresnel_panels(y: float, eps_reg: float, odd: bool) -> complex:
    """int e^(2 pi i x y) x^m e^(-i pi x^2 - eps x^2) dx (m = 1 if odd else 0)
    by composite Gauss-Legendre on panels of one phase period each.

    Folding the two half-lines turns the kernel into cos(2 pi x y) for the
    even integrand and i sin(2 pi x y) for the odd one.
    """
    if eps_reg <= 0:
        raise ValueError("oscillatory transform requires a positive regulator")
    cutoff = 8.0 / math.sqrt(eps_reg)
    n_panels = int(math.ceil(cutoff * cutoff)) + 1
    edges = np.sqrt(np.arange(n_panels + 1, dtype=float))
    edges[-1] = min(edges[-1], cutoff)
    nodes, weights = np.polynomial.legendre.leggauss(24)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    envelope = np.exp(-(eps_reg + 1j * math.pi) * x * x)
    if odd:
        values = 2j * x * np.sin(2.0 * math.pi * x * y) * envelope
    else:
        values = 2.0 * np.cos(2.0 * math.pi * x * y) * envelope
    return complex(np.sum(w * values))


def fresnel_tail_bound(eps_reg: float) -> float:
    """Crude bound on the mass dropped beyond the |x| <= 8/sqrt(eps) cutoff."""
    cutoff = 8.0 / math.sqrt(eps_reg)
    return math.exp(-eps_reg * cutoff * cutoff) / (eps_reg * cutoff)


def fourier_numeric_1d(kind: str, y: float, eps_reg: float = 0.0) -> complex:
    """One-dimensional transform int e^(2 pi i x y) f(x) e^(-eps x^2) dx for
    f among 'gaussian', 'x_gaussian' (e^(-pi x^2) profiles) and 'feynman',
    'x_feynman' (e^(-i pi x^2) profiles; these require eps_reg > 0).
    """
    if kind == "gaussian":
        return _gauss_quad(lambda x: np.exp(-math.pi * x * x), y, eps_reg)
    if kind == "x_gaussian":
        return _gauss_quad(lambda x: x * np.exp(-math.pi * x * x), y, eps_reg)
    if kind == "feynman":
        return _fresnel_panels(y, eps_reg, odd=False)
    if kind == "x_feynman":
        return _fresnel_panels(y, eps_reg, odd=True)
    raise ValueError(f"unknown integrand kind {kind!r}")


@dataclass(frozen=True)
class FeynmanPhaseReport:
    """Pointwise comparison of the transformed imaginary-Gaussian measure
    against phase * conjugate at regulator eps_reg, with a linear
    extrapolation of the error to zero regulator."""

    n: int
    eps_reg: float
    phase: complex
    points: tuple[np.ndarray, ...]
    errors: tuple[float, ...] = field(default=())
    extrapolated_errors: tuple[float, ...] = field(default=())
    tail_bound: float = 0.0

    @property
    def max_error(self) -> float:
        return max(self.errors)

    def passed(self, tol: float = 1e-2) -> bool:
        return self.max_error <= tol


def _modified_feynman_weight(poly: MultilinearPolynomial, g: np.ndarray) -> complex:
    """delta_w(g) e^(-i pi tr(g^T g)) through the monomial expansion."""
    phase = np.exp(-1j * math.pi * float(np.sum(g * g)))
    return poly.evaluate(g) * phase


def _numeric_feynman_transform(
    poly: MultilinearPolynomial, g: np.ndarray, eps_reg: float
) -> complex:
    """Entrywise-factorized numeric transform of the modified Feynman
    measure at matrix argument g.  Valid because every monomial is
    squarefree: each entry contributes one 1D transform, of the plain kind
    for absent entries and the monomial kind for present ones.
    """
    n = poly.n
    plain = {}
    dressed = {}
    total = 0j
    for mono, coeff in poly.terms.items():
        value = coeff
        for i in range(n):
            for j in range(n):
                yij = float(g[i, j])
                if (i, j) in mono:
                    if yij not in dressed:
                        dressed[yij] = fourier_numeric_1d("x_feynman", yij, eps_reg)
                    value *= dressed[yij]
                else:
                    if yij not in plain:
                        plain[yij] = fourier_numeric_1d("feynman", yij, eps_reg)
                    value *= plain[yij]
        total += value
    return total


def feynman_phase_check(n: int, eps_reg: float, sample_points) -> FeynmanPhaseReport:
    """Verify that the transform of delta_w(g) e^(-i pi tr(g^T g)) equals
    e^(-i pi n^2 / 4) times its complex conjugate, numerically at the given
    sample matrices.

    The error is also evaluated at 10x the regulator and linearly
    extrapolated to zero, which tightens the reported residual.
    """
    if n > 2:
        raise ValueError("numeric route is limited to n <= 2")
    poly = delta_w_polynomial(n)
    phase = np.exp(-1j * math.pi * n * n / 4.0)
    points = tuple(np.atleast_2d(np.asarray(pt, dtype=float)) for pt in sample_points)
    errors = []
    extrapolated = []
    for pt in points:
        if pt.shape != (n, n):
            raise ValueError(f"sample point has shape {pt.shape}, expected {(n, n)}")
        expected = phase * np.conjugate(_modified_feynman_weight(poly, pt))
        err_by_eps = []
        for eps in (eps_reg, 10.0 * eps_reg):
            numeric = _numeric_feynman_transform(poly, pt, eps)
            err_by_eps.append(numeric - expected)
        errors.append(abs(err_by_eps[0]))
        # error is ~linear in eps: e(0) ~ e(eps) - (e(10 eps) - e(eps)) / 9
        extrapolated.append(abs(err_by_eps[0] - (err_by_eps[1] - err_by_eps[0]) / 9.0))
    return FeynmanPhaseReport(
        n=n,
        eps_reg=eps_reg,
        phase=complex(phase),
        points=points,
        errors=tuple(errors),
        extrapolated_errors=tuple(extrapolated),
        tail_bound=fresnel_tail_bound(eps_reg),
    )
