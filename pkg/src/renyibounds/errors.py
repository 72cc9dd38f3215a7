"""Exception types shared across the package.

Every error carries a short machine-readable ``category`` string; the CLI
maps categories to exit codes and prints them as JSON on stderr.
"""


class RenyiBoundsError(Exception):
    """Base class for all errors raised by this package."""

    category = "error"


class DomainError(RenyiBoundsError, ValueError):
    """An argument is outside the mathematical domain of an operation."""

    category = "domain"


class InstanceTooLargeError(RenyiBoundsError):
    """A computation was refused because the instance exceeds a hard cap.

    Raised instead of attempting an enumeration that cannot finish at desk
    scale (exhaustive aggregation maps, product-space guessing moments,
    type-class explosions, codebook materialization).
    """

    category = "instance-too-large"


class DegenerateBoundError(DomainError):
    """A bound formula degenerates (division by a non-positive margin)."""

    category = "degenerate-bound"
