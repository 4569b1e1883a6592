"""Radial convolution kernels on GL(n,R) and their eigenvalue checks.

The kernel q_s is the bi-invariant Gaussian weighted by a power of the
determinant; multiplying it by the weighted minor sum `delta_w` gives the
operator q_hat whose convolution action on the distinguished vector of each
principal series multiplies it by the attached L-factor.  This module
estimates that action two independent ways:

* `convolve_vector`: importance sampling of the group convolution with the
  matrix Gaussian as proposal;
* `cartan_eigenvalue_estimate`: a polar-coordinates integral over
  O(n) x (R+)^n with log-normal radial proposals.

Haar measure convention.  The bi-invariant measure is normalized as

    dmu(g) = kappa_n * |det g|^(-n) * prod dg_ij,
    kappa_n = prod_{i=1..n} Gamma(i/2) / pi^(n(n+1)/4),

the unique scaling under which the triangular-coordinates factorization
(probability Haar on O(n), multiplicative measure on the diagonal, Lebesgue
on the unipotent part) carries no constant, and hence the one that makes
the eigenvalue exactly the L-factor.  kappa_1 = 1, kappa_2 = 1/pi.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateEvaluationPointError,
    ExcessSingularSamplesError,
    SingularMatrixError,
)
from .exterior import (
    delta_w_batch,
    epsilon_spherical,
    epsilon_spherical_batch,
    minor_batch,
)
from .lfactors import LFactorValue, l_factor
from .matrices import _iwasawa_kab, as_group_element, borel_character_positive_diag
from .montecarlo import (
    MCEstimate,
    RandomStream,
    gaussian_matrix_batch,
    haar_orthogonal_batch,
    mc_expectation,
)
from .params import Signature, SpectralParams, graded_dimension

# Samples whose |det| falls below this get weight zero; the run aborts if
# they exceed MASKED_FRACTION_LIMIT of the budget.
DET_FLOOR = 1e-12
MASKED_FRACTION_LIMIT = 1e-3

PHI_DEGENERACY_FLOOR = 1e-6


def haar_normalization(n: int) -> float:
    """kappa_n, the density constant of the Haar measure convention above."""
    log_k = sum(math.lgamma(i / 2.0) for i in range(1, n + 1))
    return math.exp(log_k - n * (n + 1) / 4.0 * math.log(math.pi))


def _selberg_polar_mass(n: int) -> float:
    """Value of the polar-coordinates lift of |det g|^(-n) dg against the
    reference Gaussian; a Laguerre-type Selberg product."""
    log_s = 0.0
    for j in range(n):
        log_s += (
            math.lgamma((1 + j) / 2.0)
            + math.lgamma(1 + (j + 1) / 2.0)
            - math.lgamma(1.5)
        )
    return math.exp(log_s - n * math.log(2.0) - n * n / 2.0 * math.log(math.pi))


def polar_normalization(n: int) -> float:
    """Constant converting the polar-coordinates expectation into the
    normalized Haar integral: kappa_n divided by the Selberg mass."""
    return haar_normalization(n) / _selberg_polar_mass(n)


def q_s(g, s: complex, c: float) -> complex | np.ndarray:
    """Bi-invariant Gaussian kernel
    (c/pi)^(l(l+1)/4) |det g|^(s + l/2) e^(-c tr(g^T g)),  l = n - 1.

    Accepts stacked input (..., n, n); invariant under g -> k1 g k2 for
    orthogonal k1, k2.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[-1]
    ell = n - 1
    absdet = np.abs(np.linalg.det(g))
    trace = np.einsum("...ij,...ij->...", g, g)
    pref = (c / math.pi) ** (ell * (ell + 1) / 4.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        power = np.where(
            absdet > 0.0,
            np.exp((s + ell / 2.0) * np.log(np.where(absdet > 0.0, absdet, 1.0))),
            0.0,
        )
    value = pref * power * np.exp(-c * trace)
    return complex(value) if value.ndim == 0 else value


def q_hat(g, s: complex, c: float) -> complex | np.ndarray:
    """The L-factor kernel: `delta_w(g) * q_s(g, s, c)`."""
    g = np.asarray(g, dtype=float)
    value = delta_w_batch(g) * q_s(g, s, c)
    return complex(value) if value.ndim == 0 else value


def _require_variance_guard(p: SpectralParams) -> None:
    if p.s.real <= p.n / 2.0:
        raise ValueError(
            f"Re(s) = {p.s.real} is not above the square-integrability bound "
            f"{p.n / 2.0} for dimension {p.n}; the Monte Carlo variance diverges"
        )


class _MaskTally:
    """Thread-safe count of weight-zeroed samples."""

    def __init__(self):
        self.count = 0
        self._lock = threading.Lock()

    def add(self, k: int):
        if k:
            with self._lock:
                self.count += k


def convolve_vector(
    p: SpectralParams,
    g_tilde,
    n_samples: int,
    stream: RandomStream,
    *,
    workers: int = 1,
    with_delta_w: bool = True,
) -> MCEstimate:
    """Convolution of the kernel against the distinguished vector at g_tilde.

    Importance sampling: g is drawn from the matrix Gaussian at the kernel's
    own rate c, and the weight carries the minor sum, the determinant power
    s + l/2 - n (the -n being the Haar density), the vector evaluated at
    g^(-1) g_tilde, and the measure constants.  `with_delta_w=False` drops
    the minor-sum prefactor, leaving the purely radial kernel.

    Requires Re(s) > n/2 so the weights are square integrable.
    """
    _require_variance_guard(p)
    g_tilde = as_group_element(g_tilde, name="g_tilde")
    n = p.n
    if g_tilde.shape[0] != n:
        raise ValueError(f"g_tilde has dimension {g_tilde.shape[0]}, params expect {n}")
    ell = n - 1
    c = p.c
    pref = (
        haar_normalization(n)
        * (c / math.pi) ** (ell * (ell + 1) / 4.0)
        * (math.pi / c) ** (n * n / 2.0)
    )
    det_exponent = p.s + ell / 2.0 - n
    eye = np.eye(n)
    tally = _MaskTally()

    def integrand(g):
        det = np.linalg.det(g)
        absdet = np.abs(det)
        ok = absdet > DET_FLOOR
        tally.add(int(np.size(ok) - np.count_nonzero(ok)))
        g_safe = np.where(ok[:, None, None], g, eye)
        h = np.linalg.solve(g_safe, np.broadcast_to(g_tilde, g_safe.shape))
        phi = epsilon_spherical_batch(p, h)
        absdet_safe = np.where(ok, absdet, 1.0)
        w = pref * np.exp(det_exponent * np.log(absdet_safe)) * phi
        if with_delta_w:
            w = w * delta_w_batch(g)
        return np.where(ok, w, 0.0)

    estimate = mc_expectation(
        integrand,
        lambda rng, count: gaussian_matrix_batch(rng, n, c, count),
        n_samples,
        stream,
        workers=workers,
    )
    if tally.count > MASKED_FRACTION_LIMIT * n_samples:
        raise ExcessSingularSamplesError(
            f"{tally.count} of {n_samples} samples fell below the determinant floor"
        )
    return estimate


@dataclass(frozen=True)
class EigencheckReport:
    """Per-point comparison of the convolution eigenvalue against the L-factor."""

    params: SpectralParams
    points: tuple[np.ndarray, ...]
    ratios: tuple[MCEstimate, ...]
    reference: LFactorValue
    tol_sigma: float

    @property
    def z_scores(self) -> tuple[float, ...]:
        return tuple(r.z_score(self.reference.value) for r in self.ratios)

    @property
    def passed(self) -> tuple[bool, ...]:
        return tuple(z <= self.tol_sigma for z in self.z_scores)

    @property
    def all_passed(self) -> bool:
        return all(self.passed)


def eigenvalue_check(
    p: SpectralParams,
    g_tilde_list: Sequence,
    n_samples: int,
    stream: RandomStream,
    *,
    tol_sigma: float = 4.0,
    workers: int = 1,
) -> EigencheckReport:
    """Estimate the eigenvalue ratio (convolution / vector value) at each
    evaluation point and compare it to the L-factor at `tol_sigma` standard
    errors.  Each point draws from an independent substream.
    """
    reference = l_factor(p)
    points = []
    ratios = []
    for i, g_tilde in enumerate(g_tilde_list):
        g_tilde = as_group_element(g_tilde, name=f"g_tilde[{i}]")
        phi_val = epsilon_spherical(p, g_tilde)
        if abs(phi_val) <= PHI_DEGENERACY_FLOOR:
            raise DegenerateEvaluationPointError(
                f"|phi(g_tilde[{i}])| = {abs(phi_val):.2e} is too small; "
                "choose another evaluation point"
            )
        conv = convolve_vector(p, g_tilde, n_samples, stream.substream(i), workers=workers)
        ratios.append(
            MCEstimate(
                mean=conv.mean / phi_val,
                stderr=conv.stderr / abs(phi_val),
                samples=conv.samples,
            )
        )
        points.append(g_tilde)
    return EigencheckReport(
        params=p,
        points=tuple(points),
        ratios=tuple(ratios),
        reference=reference,
        tol_sigma=tol_sigma,
    )


def cartan_eigenvalue_estimate(
    p: SpectralParams,
    n_samples: int,
    stream: RandomStream,
    *,
    workers: int = 1,
) -> MCEstimate:
    """Second, independent route to the eigenvalue through polar coordinates.

    Draws k1 from Haar O(n) and log a_i i.i.d. standard normal; the weight
    carries the radial Vandermonde |prod_{i<j} (a_i/a_j - a_j/a_i)|, the
    kernel on the diagonal, the character and wedge element built from the
    triangular factorization of (k1 a)^(-1), and the polar normalization
    constant.
    """
    _require_variance_guard(p)
    n = p.n
    ell = n - 1
    c = p.c
    eps = p.epsilon
    gamma = np.asarray(p.gamma)
    rho = np.asarray(p.rho)
    const = polar_normalization(n)
    kernel_pref = (c / math.pi) ** (ell * (ell + 1) / 4.0)
    log_norm = -0.5 * n * math.log(2.0 * math.pi)

    def sampler(rng, count):
        return haar_orthogonal_batch(rng, n, count), rng.standard_normal((count, n))

    def integrand(sample):
        k1, u = sample
        a = np.exp(u)
        log_density = log_norm - 0.5 * (u * u).sum(axis=1)
        vandermonde = np.ones(len(a))
        for i in range(n):
            for j in range(i + 1, n):
                vandermonde *= np.abs(a[:, i] / a[:, j] - a[:, j] / a[:, i])
        kernel = kernel_pref * np.exp((p.s + ell / 2.0) * u.sum(axis=1) - c * (a * a).sum(axis=1))
        inv = np.swapaxes(k1, -1, -2) / a[:, :, None]  # (k1 a)^(-1)
        k_of_inv, a_of_inv, _ = _iwasawa_kab(inv)
        chi = borel_character_positive_diag(a_of_inv, gamma, rho)
        wedge = minor_batch((k1 * a[:, None, :]) @ k_of_inv, eps, eps)
        return const * vandermonde * kernel * chi * wedge / np.exp(log_density)

    return mc_expectation(integrand, sampler, n_samples, stream, workers=workers)


def spherical_function(
    p: SpectralParams,
    g,
    n_samples: int,
    stream: RandomStream,
    *,
    workers: int = 1,
) -> MCEstimate:
    """Matrix coefficient int dk conj(phi(k)) phi(g^(-1) k) over Haar O(n).

    At g = identity the value is 1 / binomial(n, |epsilon|).
    """
    g = as_group_element(g)
    n = p.n
    if g.shape[0] != n:
        raise ValueError(f"matrix has dimension {g.shape[0]}, params expect {n}")
    try:
        g_inv = np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("evaluation matrix is singular") from exc
    eps = p.epsilon

    def integrand(k):
        left = minor_batch(k, eps, eps)  # orthogonal argument: character factor is 1
        return left * epsilon_spherical_batch(p, g_inv @ k)

    return mc_expectation(
        integrand,
        lambda rng, count: haar_orthogonal_batch(rng, n, count),
        n_samples,
        stream,
        workers=workers,
    )


@dataclass(frozen=True)
class RadialProfile:
    """Bi-invariant profile |det g|^det_power * e^(-rate tr(g^T g)).

    Depends on g only through |det| and the trace, hence invariant under
    g -> k1 g k2 by construction.
    """

    det_power: float
    rate: float

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("profile rate must be positive for rapid decay")
        if self.det_power < 0:
            raise ValueError("determinant power must be non-negative")

    def __call__(self, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=float)
        absdet = np.abs(np.linalg.det(g))
        trace = np.einsum("...ij,...ij->...", g, g)
        with np.errstate(divide="ignore"):
            power = np.where(
                absdet > 0.0,
                np.exp(self.det_power * np.log(np.where(absdet > 0.0, absdet, 1.0))),
                1.0 if self.det_power == 0.0 else 0.0,
            )
        return power * np.exp(-self.rate * trace)


@dataclass(frozen=True)
class RamifiedConvolutionReport:
    """Comparison of a graded-matrix-element convolution with its predicted
    factorized form coefficient * wedge element * scalar convolution."""

    left: MCEstimate
    scalar: MCEstimate
    coefficient: float
    wedge_at_eval: float
    tol_sigma: float

    @property
    def predicted(self) -> complex:
        return self.coefficient * self.wedge_at_eval * self.scalar.mean

    @property
    def combined_sigma(self) -> float:
        return math.hypot(
            self.left.stderr, abs(self.coefficient * self.wedge_at_eval) * self.scalar.stderr
        )

    @property
    def z_score(self) -> float:
        sigma = self.combined_sigma
        if sigma == 0.0:
            return 0.0 if self.left.mean == self.predicted else math.inf
        return abs(self.left.mean - self.predicted) / sigma

    @property
    def ratio(self) -> complex | None:
        return None if self.predicted == 0 else self.left.mean / self.predicted

    @property
    def passed(self) -> bool:
        return self.z_score <= self.tol_sigma


def ramified_convolution_check(
    profile_f: RadialProfile,
    profile_g: RadialProfile,
    e1: Signature,
    e1p: Signature,
    e2: Signature,
    e2p: Signature,
    g_tilde,
    n_samples: int,
    stream: RandomStream,
    *,
    tol_sigma: float = 4.0,
    workers: int = 1,
) -> RamifiedConvolutionReport:
    """Estimate both sides of the graded convolution law.

    Left side: convolution of wedge-element-dressed radial profiles.  Right
    side: (delta_{e1p,e2} / dim of the grade) times the wedge element of
    g_tilde between e1 and e2p times the scalar convolution of the bare
    profiles, the latter estimated from an independent substream.
    """
    e1, e1p, e2, e2p = map(Signature.of, (e1, e1p, e2, e2p))
    n = len(e1)
    if e1.weight != e1p.weight or e2.weight != e2p.weight:
        raise ValueError("paired signatures must have equal weights")
    g_tilde = as_group_element(g_tilde, name="g_tilde")
    if g_tilde.shape[0] != n:
        raise ValueError("evaluation matrix dimension does not match signatures")
    pref = haar_normalization(n) * (math.pi / profile_f.rate) ** (n * n / 2.0)
    f_det_exponent = profile_f.det_power - n
    eye = np.eye(n)
    tally = _MaskTally()

    def base_weight(g):
        absdet = np.abs(np.linalg.det(g))
        ok = absdet > DET_FLOOR
        tally.add(int(np.size(ok) - np.count_nonzero(ok)))
        g_safe = np.where(ok[:, None, None], g, eye)
        h = np.linalg.solve(g_safe, np.broadcast_to(g_tilde, g_safe.shape))
        absdet_safe = np.where(ok, absdet, 1.0)
        w = pref * np.exp(f_det_exponent * np.log(absdet_safe)) * profile_g(h)
        return np.where(ok, w, 0.0), g_safe, h

    def left_integrand(g):
        w, g_safe, h = base_weight(g)
        return w * minor_batch(g_safe, e1, e1p) * minor_batch(h, e2, e2p)

    def scalar_integrand(g):
        w, _, _ = base_weight(g)
        return w

    sampler = lambda rng, count: gaussian_matrix_batch(rng, n, profile_f.rate, count)
    left = mc_expectation(left_integrand, sampler, n_samples, stream, workers=workers)
    scalar = mc_expectation(
        scalar_integrand, sampler, n_samples, stream.substream(1), workers=workers
    )
    if tally.count > 2 * MASKED_FRACTION_LIMIT * n_samples:
        raise ExcessSingularSamplesError(
            f"{tally.count} of {2 * n_samples} samples fell below the determinant floor"
        )
    coefficient = (1.0 if e1p == e2 else 0.0) / graded_dimension(n, e1p.weight)
    wedge_at_eval = minor_batch(g_tilde[None], e1, e2p)[0]
    return RamifiedConvolutionReport(
        left=left,
        scalar=scalar,
        coefficient=coefficient,
        wedge_at_eval=float(wedge_at_eval),
        tol_sigma=tol_sigma,
    )
