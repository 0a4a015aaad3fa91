"""Exception hierarchy shared across the package.

Everything derives from ChordalmError so callers can catch library errors
in one clause.  Errors flagged ``internal = True`` signal a broken invariant
(for example a gluing postcondition failing) rather than bad input; the CLI
maps them to a distinct exit code.
"""


class ChordalmError(Exception):
    internal = False


# field / linear algebra

class UnsupportedOrder(ChordalmError):
    """q is not a prime power in the supported range 2..9."""


class DimensionMismatch(ChordalmError):
    """Vectors of different lengths were mixed."""


class ZeroVector(ChordalmError):
    """The zero vector has no projective representative."""


# matroid core

class UnknownLabel(ChordalmError):
    """A label that is not part of the ground set."""


class RankZero(ChordalmError):
    """Operation needs rank at least 1."""


class DependentContractionSet(ChordalmError):
    """Contraction sets must be independent."""


class FieldMismatch(ChordalmError):
    """Operands live over different fields."""


class NotAFlat(ChordalmError):
    """The given set is not closed."""


# constructions

class NonSimpleGraph(ChordalmError):
    """Graph input has a loop or a repeated edge."""


class DualNotSimple(ChordalmError):
    """The dual has a loop or a parallel pair."""


class BudgetExceeded(ChordalmError):
    """Search stopped before exhausting its space."""


class PointCollision(ChordalmError):
    """A point was added that is already present (or invalid)."""


class NotProjectiveGuts(ChordalmError):
    """Glue flat is not a full projective geometry."""


class NotModularGuts(ChordalmError):
    """Glue flat is modular in neither part."""


class IncompatiblePairing(ChordalmError):
    """Glue pairing does not extend to a linear isomorphism."""


class GutsLeak(ChordalmError):
    """Parallel-connection postcondition failed."""

    internal = True


# decomposition

class InvalidSeparation(ChordalmError):
    """The separation does not satisfy its own invariants."""


class PreconditionFailed(ChordalmError):
    """Decomposition mode refused the input."""


class NoValidSplit(ChordalmError):
    """No admissible separation found where one was guaranteed."""

    internal = True


# elimination orderings

class MalformedCertificate(ChordalmError):
    """Certificate is not a partition of the ground set of the right length."""


# catalog / io

class InfeasibleUniverse(ChordalmError):
    """Orbit enumeration is only supported for small (rank, q) pairs."""


class UnknownCheck(ChordalmError):
    """No verification routine registered under this id."""


class ParseError(ChordalmError):
    """Malformed matroid file."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {column}" if column is not None else "") + ")"
        super().__init__(message + loc)


class InvalidPoint(ParseError):
    """Zero, unnormalized or duplicate point in a matroid file."""
