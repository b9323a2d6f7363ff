"""Exception types shared across the package."""


class BogofockError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(BogofockError, ValueError):
    """Array dimensions are inconsistent with each other or with the mode count."""


class InvalidTransformError(BogofockError, ValueError):
    """A transform violates the symplectic identities beyond tolerance."""


class TruncationRiskError(BogofockError, RuntimeError):
    """The requested Fock cutoff is too small for the requested squeezing."""


class ResourceLimitError(BogofockError, RuntimeError):
    """A dense matrix or index lattice would exceed the configured size cap."""
