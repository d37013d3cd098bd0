"""Exception hierarchy. Input problems map to CLI exit code 2, consistency failures to 3."""


class DsmapsError(Exception):
    pass


class InputError(DsmapsError, ValueError):
    """Malformed or out-of-domain input."""


class DomainError(InputError):
    """A parameter set that does not describe a valid nonnegative W."""

    def __init__(self, message: str, index: tuple[int, int] | None = None):
        super().__init__(message)
        self.index = index


class SingularBoundaryError(InputError):
    """W is block diagonal; the vertex/edge/interior analysis does not apply."""


class SingularityError(DsmapsError):
    """Some z_i vanishes while x_i > 0, i.e. f is unbounded at that point."""

    def __init__(self, message: str, x=None):
        super().__init__(message)
        self.x = x


class ConsistencyError(DsmapsError, RuntimeError):
    """Two independent routes to the same quantity disagree."""
