"""Exception hierarchy shared by the library and the command line."""


class SIBError(Exception):
    """Base class for every error raised by :mod:`sib`."""


class InvalidInputError(SIBError, ValueError):
    """Non-finite coordinates, mismatched dimensions, malformed sets."""


class PreconditionError(SIBError):
    """An operation was called outside its domain (e.g. a subgradient
    requested at a point inside the target set)."""


class CommonPointError(SIBError):
    """The target sets share a point, so the optimal radius is zero.

    ``witness`` is a point lying in every set and ``iteration`` the solver
    iteration at which it was found (``None`` outside the solver).
    """

    def __init__(self, witness, iteration=None):
        self.witness = tuple(float(v) for v in witness)
        self.iteration = iteration
        where = "" if iteration is None else f" at iteration {iteration}"
        super().__init__(
            f"common point found{where}: x={list(self.witness)} (radius 0)"
        )


class SizeError(SIBError, ValueError):
    """Input too large for an exhaustive routine."""


class DegenerateError(SIBError, ValueError):
    """Geometrically degenerate input, such as two coincident points."""


class ParseError(SIBError, ValueError):
    """Problem file violates the schema."""


class UnsupportedFeatureError(ParseError):
    """Problem file asks for something the library does not model."""
