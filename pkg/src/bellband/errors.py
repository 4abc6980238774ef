"""Exception types shared across the toolkit."""


class BellbandError(ValueError):
    """Base class for all toolkit errors."""


class DomainError(BellbandError):
    """An argument lies outside the domain an operation is defined on."""


class ShapeError(BellbandError):
    """Sequence lengths or array shapes are incompatible."""


class InfeasibleError(BellbandError):
    """The requested moments admit no probability distribution."""


class GridFormatError(BellbandError):
    """A grid-candidate document is malformed."""
