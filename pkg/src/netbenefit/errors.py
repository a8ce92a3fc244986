"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 2, numerical
failures (divergent weights, non-convergence) exit 3, anything else exit 4.
"""


class NetBenefitError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NetBenefitError):
    """Invalid input data, schema, or argument."""


class NumericError(NetBenefitError):
    """A computation could not be carried out reliably."""


class DivergentIntegralError(NumericError):
    """A cumulative weight integral diverges at a domain endpoint."""

    def __init__(self, message: str, endpoint: float):
        super().__init__(message)
        self.endpoint = endpoint


class NoDensityError(NumericError):
    """The weighting contains point masses and has no pointwise density."""


class FitError(NumericError):
    """Model fitting failed or did not converge."""
