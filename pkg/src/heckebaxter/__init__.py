"""Numerics for radial convolution operators on GL(n,R) whose eigenvalues
on distinguished principal-series vectors are Archimedean L-factors."""

from .errors import (
    DegenerateEvaluationPointError,
    ExcessSingularSamplesError,
    GammaPoleError,
    HeckeBaxterError,
    NonFiniteEntryError,
    NonFiniteIntegrandError,
    SingularMatrixError,
    TriangularInputError,
)
from .exterior import (
    MultilinearPolynomial,
    delta_w,
    delta_w_charpoly_oracle,
    delta_w_polynomial,
    epsilon_spherical,
    minor_matrix_element,
    phi_basis,
)
from .fourier import (
    FeynmanPhaseReport,
    TransformRule,
    feynman_phase_check,
    fourier_monomial_gaussian,
    fourier_numeric_1d,
    verify_modified_gaussian_identity,
)
from .lfactors import (
    LFactorValue,
    gamma_integral_oracle,
    gl_c_l_factor,
    l_factor,
    legendre_duplication_residual,
    log_gamma,
)
from .matrices import (
    CartanFactors,
    IwasawaFactors,
    borel_character,
    cartan_decompose,
    iwasawa_decompose,
)
from .montecarlo import (
    MCEstimate,
    RandomStream,
    compact_convolution,
    mc_expectation,
    sample_gaussian_matrix,
    sample_orthogonal,
    schur_orthogonality_check,
    schur_orthogonality_reference,
)
from .operators import (
    EigencheckReport,
    RadialProfile,
    RamifiedConvolutionReport,
    cartan_eigenvalue_estimate,
    convolve_vector,
    eigenvalue_check,
    haar_normalization,
    q_hat,
    q_s,
    ramified_convolution_check,
    spherical_function,
)
from .params import GradedDimension, Signature, SpectralParams, all_signatures, graded_dimension

__version__ = "0.1.0"

__all__ = [
    "CartanFactors",
    "DegenerateEvaluationPointError",
    "EigencheckReport",
    "ExcessSingularSamplesError",
    "FeynmanPhaseReport",
    "GammaPoleError",
    "GradedDimension",
    "HeckeBaxterError",
    "IwasawaFactors",
    "LFactorValue",
    "MCEstimate",
    "MultilinearPolynomial",
    "NonFiniteEntryError",
    "NonFiniteIntegrandError",
    "RadialProfile",
    "RamifiedConvolutionReport",
    "RandomStream",
    "Signature",
    "SingularMatrixError",
    "SpectralParams",
    "TransformRule",
    "TriangularInputError",
    "all_signatures",
    "borel_character",
    "cartan_decompose",
    "cartan_eigenvalue_estimate",
    "compact_convolution",
    "convolve_vector",
    "delta_w",
    "delta_w_charpoly_oracle",
    "delta_w_polynomial",
    "eigenvalue_check",
    "epsilon_spherical",
    "feynman_phase_check",
    "fourier_monomial_gaussian",
    "fourier_numeric_1d",
    "gamma_integral_oracle",
    "gl_c_l_factor",
    "graded_dimension",
    "haar_normalization",
    "iwasawa_decompose",
    "l_factor",
    "legendre_duplication_residual",
    "log_gamma",
    "mc_expectation",
    "minor_matrix_element",
    "phi_basis",
    "q_hat",
    "q_s",
    "ramified_convolution_check",
    "sample_gaussian_matrix",
    "sample_orthogonal",
    "schur_orthogonality_check",
    "schur_orthogonality_reference",
    "spherical_function",
    "verify_modified_gaussian_identity",
]
