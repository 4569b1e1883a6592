"""Complex log-Gamma and the closed-form Archimedean L-factor identities.

The L-factor attached to spectral data (s, c, gamma, epsilon) in dimension n
is the product over j = 1..n of

    c^(-(s + eps_j - i*gamma_j)/2) * Gamma((s + eps_j - i*gamma_j)/2).

Products are accumulated in log space and exponentiated once, so n Gamma
factors cannot overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import GammaPoleError
from .params import SpectralParams, Signature

# Lanczos coefficients, g = 7, 9 terms; double precision on Re(z) >= 1/2.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_POLE_TOL = 1e-12


def _is_nonpositive_integer(z: complex) -> bool:
    return abs(z.imag) < _POLE_TOL and z.real <= 0.5 and abs(z.real - round(z.real)) < _POLE_TOL


def log_gamma(z: complex) -> complex:
    """log Gamma(z) by the Lanczos rational approximation.

    Reflection handles Re(z) < 1/2.  The result may differ from the
    principal analytic continuation by a multiple of 2*pi*i after
    reflection; every consumer here exponentiates, so only the value of
    Gamma(z) itself matters.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise GammaPoleError(f"Gamma pole at z = {z}")
    if z.real < 0.5:
        # log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        return cmath.log(math.pi) - _log_sin_pi(z) - log_gamma(1.0 - z)
    z = z - 1.0
    series = _LANCZOS_C[0]
    for i, coeff in enumerate(_LANCZOS_C[1:], start=1):
        series += coeff / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_TWO_PI + (z + 0.5) * cmath.log(t) - t + cmath.log(series)


def _log_sin_pi(z: complex) -> complex:
    """log sin(pi z) without overflow for large |Im z|."""
    piz = math.pi * z
    if abs(z.imag) < 20.0:
        return cmath.log(cmath.sin(piz))
    # sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2i); factor out the large half:
    # Im z > 0 leaves e^{-i pi z} (1 - e^{2 i pi z}) / (-2i), Im z < 0 the mirror
    if z.imag > 0:
        return -1j * piz + cmath.log(1.0 - cmath.exp(2j * piz)) - cmath.log(-2j)
    return 1j * piz + cmath.log(1.0 - cmath.exp(-2j * piz)) - cmath.log(2j)


def gamma_fn(z: complex) -> complex:
    """Gamma(z) via `log_gamma`."""
    return cmath.exp(log_gamma(z))


@dataclass(frozen=True)
class LFactorValue:
    """An evaluated L-factor together with the spectral data it belongs to."""

    value: complex
    params: SpectralParams


def _log_l_terms(s: complex, c: float, epsilon: Signature, gamma) -> complex:
    total = 0j
    for j, (e, gm) in enumerate(zip(epsilon, gamma), start=1):
        arg = (s + e - 1j * gm) / 2.0
        if _is_nonpositive_integer(arg):
            raise GammaPoleError(f"Gamma pole in factor j={j}: argument {arg}")
        total += log_gamma(arg) - arg * math.log(c)
    return total


def l_factor(p: SpectralParams) -> LFactorValue:
    """Archimedean L-factor of the spectral data p."""
    return LFactorValue(value=cmath.exp(_log_l_terms(p.s, p.c, p.epsilon, p.gamma)), params=p)


def gl_c_l_factor(s: complex, c: float, gamma) -> complex:
    """L-factor of the corresponding complex-group representation.

    Defined as the product of the two real L-factors with trivial and full
    signatures; per factor this reduces to the Legendre duplication of the
    Gamma function.
    """
    gamma = tuple(float(g) for g in gamma)
    n = len(gamma)
    zeros = Signature.of((0,) * n)
    ones = Signature.of((1,) * n)
    log_total = _log_l_terms(s, c, zeros, gamma) + _log_l_terms(s, c, ones, gamma)
    return cmath.exp(log_total)


def gl_c_l_factor_duplication_oracle(s: complex, c: float, gamma) -> complex:
    """Single-Gamma closed form of `gl_c_l_factor` via Legendre duplication:
    per j the product of the two half-shifted factors is
    c^(-(z_j + 1/2)) * 2^(1 - z_j) * sqrt(pi) * Gamma(z_j), z_j = s - i*gamma_j.
    """
    total = 0j
    for gm in gamma:
        z = s - 1j * float(gm)
        total += (
            -(z + 0.5) * math.log(c)
            + (1.0 - z) * math.log(2.0)
            + 0.5 * math.log(math.pi)
            + log_gamma(z)
        )
    return cmath.exp(total)


def gamma_integral_oracle(x: complex, c: float = 1.0) -> complex:
    """Quadrature value of the radial integral
    int_0^inf (da/a) a^x e^(-c a^2)  =  (1/2) c^(-x/2) Gamma(x/2).

    Substituting a = e^u turns it into a smooth integral over the line,
    evaluated by adaptive quadrature on a truncated window.  Requires
    Re(x) > 0.
    """
    x = complex(x)
    c = float(c)
    if x.real <= 0:
        raise ValueError(f"integral diverges for Re(x) <= 0, got x = {x}")
    if c <= 0:
        raise ValueError("rate c must be positive")
    # lower tail ~ e^{Re(x) u}; upper tail killed by e^{-c e^{2u}}
    lo = -50.0 / min(x.real, 1.0) if x.real < 1.0 else -50.0
    hi = 2.0
    while c * math.exp(2.0 * hi) < 60.0 + abs(x) * hi:
        hi += 0.5

    def integrand_re(u):
        return np.real(np.exp(x * u - c * np.exp(2.0 * u)))

    def integrand_im(u):
        return np.imag(np.exp(x * u - c * np.exp(2.0 * u)))

    re, _ = integrate.quad(integrand_re, lo, hi, epsabs=1e-13, epsrel=1e-11, limit=300)
    im, _ = integrate.quad(integrand_im, lo, hi, epsabs=1e-13, epsrel=1e-11, limit=300)
    return complex(re, im)


def legendre_duplication_residual(s: complex) -> float:
    """Relative error of Gamma(s) = 2^(s-1) pi^(-1/2) Gamma(s/2) Gamma((s+1)/2)."""
    left = log_gamma(s)
    right = (s - 1) * math.log(2.0) - 0.5 * math.log(math.pi) + log_gamma(s / 2) + log_gamma((s + 1) / 2)
    return abs(cmath.exp(left - right) - 1.0)
