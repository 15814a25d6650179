"""Exception types shared across the library."""


class CovariantLabError(Exception):
    """Base class for all library errors."""


class GridMismatchError(CovariantLabError):
    """Two operands live on different grids."""


class GridTooSmallError(CovariantLabError):
    """Grid has too few points for the requested stencil."""


class DomainOverflowError(CovariantLabError):
    """A shift or quadrature window pushes significant mass off the grid."""


class PreconditionError(CovariantLabError):
    """An operation precondition failed; the message carries the offending metric."""


class SpectrumOverflowError(CovariantLabError):
    """A mode shift pushes non-negligible Fourier content outside the resolved band."""


class NearPoleError(CovariantLabError):
    """A Moebius denominator nearly vanished on the unit circle (invariant violation)."""


class ZeroStateError(CovariantLabError):
    """A state with zero norm was passed where a normalizable state is required."""


class AmbiguousKernelError(CovariantLabError):
    """The discretized operator has no singular value clearly separated from zero."""


class CoverageError(CovariantLabError):
    """Too many sample points fell outside the evaluable region."""

    def __init__(self, message: str, dropped=None):
        super().__init__(message)
        self.dropped = list(dropped or [])


class GeometryError(CovariantLabError):
    """Invalid disk/plane geometry (e.g. rho_max >= 1)."""


class SignalFormatError(CovariantLabError):
    """A signal file failed to parse; the message carries a line number when known."""
