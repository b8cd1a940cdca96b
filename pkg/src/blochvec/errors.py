"""Exception types raised by the library.

All errors derive from :class:`BlochvecError` (itself a ``ValueError``) so
callers can catch everything from this package with one handler while still
being able to distinguish failure kinds.
"""


class BlochvecError(ValueError):
    """Base class for all errors raised by blochvec."""


class DimensionError(BlochvecError):
    """Invalid Hilbert-space dimension (e.g. N < 2)."""


class LayoutError(BlochvecError):
    """Vector/matrix shapes or subsystem layout are inconsistent."""


class InconsistentBasisError(BlochvecError):
    """A basis failed its orthogonality / tracelessness / hermiticity checks."""


class HermiticityError(BlochvecError):
    """An operator expected to be Hermitian is not, beyond tolerance."""


class NormalizationError(BlochvecError):
    """A trace or state norm differs from one beyond tolerance."""


class StarUndefinedError(BlochvecError):
    """The star product is undefined for two-level systems (d-tensor is zero)."""


class UnsupportedOrderError(BlochvecError):
    """Requested invariant order outside the implemented range."""


class DomainError(BlochvecError):
    """Scalar argument outside its admissible range."""


class ConsistencyError(BlochvecError):
    """An internal numerical consistency check failed beyond tolerance."""
