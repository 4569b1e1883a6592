"""Exception types shared across the package."""


class HeckeBaxterError(ValueError):
    """Base class for all input and precondition errors raised here."""


class NonFiniteEntryError(HeckeBaxterError):
    """A matrix argument contains NaN or infinite entries."""


class SingularMatrixError(HeckeBaxterError):
    """A matrix required to be a group element is numerically singular."""


class TriangularInputError(HeckeBaxterError):
    """An argument required to be (lower) triangular is not."""


class GammaPoleError(HeckeBaxterError):
    """A Gamma-function argument landed on a pole (non-positive integer)."""


class DegenerateEvaluationPointError(HeckeBaxterError):
    """The distinguished vector nearly vanishes at the chosen evaluation point."""


class NonFiniteIntegrandError(HeckeBaxterError):
    """A Monte Carlo integrand produced a non-finite value."""

    def __init__(self, sample_index: int):
        super().__init__(f"integrand returned a non-finite value at sample {sample_index}")
        self.sample_index = sample_index


class ExcessSingularSamplesError(HeckeBaxterError):
    """Too many Monte Carlo samples fell below the determinant guard."""
