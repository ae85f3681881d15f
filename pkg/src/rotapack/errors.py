"""Exception hierarchy shared by every rotapack module."""


class PackingError(Exception):
    """Base class for all rotapack errors."""


# geometry
class DegenerateInput(PackingError):
    pass


class EmptySet(PackingError):
    pass


class InvalidPolygon(PackingError):
    pass


# layout model
class EmptyLayout(PackingError):
    pass


class InvalidSpan(PackingError):
    pass


class DuplicateId(PackingError):
    pass


class TooSmall(PackingError):
    pass


class MissingCircle(PackingError):
    pass


# placement / solver
class SolverError(PackingError):
    """Raised when a layout cannot be constructed for a permutation."""


class NoFeasibleTangentPlacement(SolverError):
    pass


class Unsolvable(SolverError):
    pass


class ConstructionStuck(SolverError):
    def __init__(self, message, *, placed=None, remaining=None, border=None):
        super().__init__(message)
        self.placed = placed
        self.remaining = remaining
        self.border = border


class TooFewCircles(SolverError):
    pass


# permutations / harness
class CountExceedsSpace(PackingError):
    pass


class AllRunsFailed(SolverError):
    pass


# io
class ParseError(PackingError):
    pass


class ValidationError(PackingError):
    pass
