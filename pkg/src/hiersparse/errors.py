"""Exception types shared across the package."""


class HiersparseError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(HiersparseError):
    """Vector/tensor shape does not match the grid or path arity."""


class ZeroChannel(HiersparseError):
    """Channel energy is zero; SNR is undefined."""


class ZeroNoise(HiersparseError):
    """Noise variance is zero; measured SNR is undefined."""


class ZeroVector(HiersparseError):
    """All samples of a candidate atom vanish; cannot normalize."""


class EmptyDomain(HiersparseError):
    """Target domain has non-positive width."""


class NonFiniteResidual(HiersparseError):
    """Residual contains NaN or infinite entries."""


class RankDeficientSupport(HiersparseError):
    """Active atom matrix is numerically rank deficient."""


class EmptyDictionary(HiersparseError):
    """Dictionary has no atoms."""


class ArityMismatch(HiersparseError):
    """Complexity-formula arguments inconsistent with the method."""


class LengthMismatch(HiersparseError):
    """Paired vectors have different lengths."""


class ZeroTruth(HiersparseError):
    """A reference vector has zero energy; normalization undefined."""


class BudgetExceeded(HiersparseError):
    """Requested configuration exceeds the multiplication budget."""

    def __init__(self, message: str, predicted: int, budget: int):
        super().__init__(message)
        self.predicted = predicted
        self.budget = budget


class ConfigError(HiersparseError):
    """Experiment configuration file is invalid."""
