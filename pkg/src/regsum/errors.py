"""Exception types shared across the package."""


class RegsumError(Exception):
    """Base class for all package-specific errors."""


class PreconditionError(RegsumError, ValueError):
    """An operation was called with inputs violating its contract."""


class ConfigurationError(RegsumError, ValueError):
    """A configuration parameter is outside its legal range."""


class InputTooSmall(RegsumError, ValueError):
    """The input graph is too small to form an initial partition."""


class RefinementExhausted(RegsumError):
    """Classes can no longer be split; the refinement loop must stop."""


class DimensionMismatch(RegsumError, ValueError):
    """Two graphs or matrices that must be aligned have different sizes."""


class DuplicateId(RegsumError, ValueError):
    """A database entry with the same id already exists."""


class EmptyDatabase(RegsumError, ValueError):
    """A query was issued against a database with no entries."""


class Unreachable(RegsumError, ValueError):
    """A required vertex is not reachable (disconnected input)."""


class EmptyGroup(RegsumError):
    """A block-model group lost all of its members during fitting."""


class DegenerateFit(RegsumError):
    """Every restart of the block-model fit collapsed to empty groups."""
