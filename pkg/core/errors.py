"""
Exception hierarchy shared by the algebra engines and the CLI.
"""


class NilCoverError(Exception):
    """Base class for every error raised by the nilcover engines."""


class InvalidArgumentError(NilCoverError, ValueError):
    """An argument is outside the domain of the operation (zero rank, non-prime p, ...)."""


class ResourceGuardError(NilCoverError):
    """A configured size guard (basis cap, class cap, order bound) was exceeded."""


class ContextMismatchError(NilCoverError, ValueError):
    """Two elements from different free nilpotent contexts were combined."""


class NotInLayerError(NilCoverError):
    """An element has a nonzero exponent below the requested lower-central layer."""


class PcpFormatError(NilCoverError, ValueError):
    """Power-commutator presentation text could not be parsed."""


class InconsistentPresentationError(NilCoverError):
    """A power-commutator presentation does not define a group of order p^m."""


class SubgroupError(NilCoverError):
    """A subgroup precondition failed (not normal, quotient not abelian, too large)."""


class EngineInvariantError(NilCoverError):
    """An internal contract was violated; the computation cannot be trusted."""
