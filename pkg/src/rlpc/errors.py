"""Exception hierarchy shared by all rlpc modules."""


class PrefixCodeError(Exception):
    """Base class for every error raised by this package."""


class EmptyOrSingletonError(PrefixCodeError):
    """A distribution needs at least two symbols."""


class NonPositiveWeightError(PrefixCodeError):
    """Weights and probabilities must be strictly positive."""


class NotNormalizedError(PrefixCodeError):
    """Input probabilities do not sum to one and normalization was not requested."""


class ParseError(PrefixCodeError):
    """A file (pmf or container) could not be parsed as its declared format."""


class IndexOutOfRangeError(PrefixCodeError):
    """A symbol index or prefix count lies outside the valid range."""


class SizeMismatchError(PrefixCodeError):
    """Paired sequences (probabilities and lengths) have different sizes."""


class InfeasibleError(PrefixCodeError):
    """No prefix code exists for this alphabet under the allowed lengths."""


class KraftViolationError(PrefixCodeError):
    """The length vector's Kraft sum exceeds one; no prefix code has these lengths."""


class CorruptGridError(PrefixCodeError):
    """Backtracking hit an unreachable grid entry; indicates an internal bug."""


class NotIncreasingError(PrefixCodeError):
    """A cost function table is not strictly increasing."""


class BadParameterError(PrefixCodeError):
    """A parameter value is outside its documented domain."""


class TooLargeError(PrefixCodeError):
    """The instance is too large for exhaustive search."""


class TruncatedError(PrefixCodeError):
    """The bit stream ended in the middle of a codeword."""


class InvalidCodeError(PrefixCodeError):
    """The bit stream contains a pattern that is not a codeword (possible when the
    Kraft sum is below one)."""
