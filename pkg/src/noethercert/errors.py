from dataclasses import dataclass


class ResourceBound(RuntimeError):
    """A configured step, degree or size cap was exceeded.

    Raised instead of returning a possibly wrong answer.
    """


class LinkageError(ValueError):
    """The double-link identity failed: the ideal is not unmixed, or the
    complete intersection chosen inside it is unsuitable."""


class SplitRejected(ValueError):
    """The Jacobian determinant vanishes on a whole component of the zero set."""


@dataclass(frozen=True)
class Limits:
    max_steps: int = 50_000
    max_degree: int = 80
    max_matrix_cells: int = 4_000_000
    max_resolution_length: int = 24


DEFAULT_LIMITS = Limits()
