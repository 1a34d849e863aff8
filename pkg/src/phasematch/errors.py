"""Exception types shared across the package."""


class PhasematchError(Exception):
    """Base class for all domain errors raised by this package."""


class DegenerateInputError(PhasematchError, ValueError):
    """Input is formally valid but makes the requested quantity meaningless.

    Examples: an initial state already equal to the marked state when solving
    the matching condition, a search geometry with zero or full marked weight,
    or a preparation angle step of zero.
    """


class NoSolutionError(PhasematchError):
    """The requested equation has no usable root for the given inputs."""


class InfeasibleIterationsError(PhasematchError):
    """No phase pair realizes the requested iteration count.

    Raised when the iteration count is below the minimum the geometry allows,
    or when the per-iteration rotation angle vanishes (no progress possible).
    """
