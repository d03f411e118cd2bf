"""Exception types shared across the library."""


class SemimatError(Exception):
    """Base class for every error raised by semimat."""


class MixedFieldError(SemimatError):
    """Operands belong to different field descriptors."""


class DivisionByZero(SemimatError, ZeroDivisionError):
    """Division by the zero element of a field."""


class UnsupportedField(SemimatError):
    """Field construction outside the supported range (bad p, m, or order)."""


class UnsupportedTower(SemimatError):
    """Embedding requested for a field pair that is not a supported tower."""


class ShapeMismatch(SemimatError):
    """Matrix dimensions incompatible with the requested operation."""


class SingularMatrix(SemimatError):
    """Inverse of a matrix without one."""


class NonMonicInput(SemimatError):
    """A monic polynomial was required."""


class ZeroVector(SemimatError):
    """A nonzero vector was required (e.g. as a spin seed)."""


class EmptyInput(SemimatError):
    """An empty generator list where at least one element is required."""


class StructureViolation(SemimatError):
    """An arithmetic identity the theory guarantees failed to hold.

    Raised when verified structural facts (dimension counts, idempotent
    relations, matrix-unit relations) come out false for the given input,
    which means a precondition was violated upstream.
    """


class SearchExhausted(SemimatError):
    """A randomized search ran out of budget before finding its object."""

    def __init__(self, message, attempts=None):
        super().__init__(message)
        self.attempts = attempts


class NotApplicable(SemimatError):
    """The operation's hypothesis excludes this input (e.g. n = 1)."""


class NotTriangularizable(SemimatError):
    """The family has no common triangularizing basis.

    ``obstruction`` is a dict describing why: either a characteristic
    polynomial that fails to split (kind "nonsplit_factor") or an empty
    common-eigenvector intersection at a named recursion node
    (kind "no_common_eigenvector").
    """

    def __init__(self, message, obstruction):
        super().__init__(message)
        self.obstruction = obstruction


class ChopIncomplete(SemimatError):
    """Composition series aborted on an Inconclusive irreducibility verdict.

    ``partial_chain`` holds the invariant subspaces established so far.
    """

    def __init__(self, message, partial_chain):
        super().__init__(message)
        self.partial_chain = partial_chain


class ParseError(SemimatError):
    """Malformed scalar literal or family file.

    Carries 1-based ``line`` and ``column`` positions plus the offending
    ``token`` when known.
    """

    def __init__(self, message, line=None, column=None, token=None):
        loc = ""
        if line is not None and line > 0:
            loc = " (line %d" % line
            if column is not None and column > 0:
                loc += ", column %d" % column
            loc += ")"
        if token and repr(token) not in message:
            loc += ": %r" % token
        super().__init__(message + loc)
        self.line = line
        self.column = column
        self.token = token
