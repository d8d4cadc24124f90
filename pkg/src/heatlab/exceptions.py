"""Exception hierarchy shared by every heatlab module."""


class HeatlabError(Exception):
    """Base class for all heatlab errors."""


class DimensionError(HeatlabError, ValueError):
    """Array or vector length does not match the grid / chain size."""


class DomainError(HeatlabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(HeatlabError, IndexError):
    """A Fourier mode index lies outside its admissible range."""


class ParityError(HeatlabError, ValueError):
    """Operation requires an even grid parameter."""


class InvalidVariantError(HeatlabError, ValueError):
    """Bound variant not available for this chain size."""


class StabilityError(HeatlabError, ValueError):
    """Scheme parameters violate the explicit-scheme stability condition."""


class ResourceError(HeatlabError, MemoryError):
    """Requested construction exceeds the configured cell budget."""


class DomainWarning(UserWarning):
    """Input is suspicious (e.g. not periodic) but computation proceeds."""
