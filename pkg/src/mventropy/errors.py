"""Exception hierarchy.

Three broad families, matching the CLI exit codes: parse problems (exit 1),
validation problems (exit 2) and resource-cap problems (exit 3).
"""


class MvError(Exception):
    """Base class for everything raised on purpose by this package."""


# --- parse (exit 1) ---------------------------------------------------------

class ParseError(MvError):
    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(msg + where)


class ResolutionError(ParseError):
    """A name used in a spec does not resolve to anything defined."""


class UnknownName(ParseError):
    """Unknown builtin map or example name."""


# --- validation (exit 2) ----------------------------------------------------

class ValidationError(MvError):
    pass


class EmptySpace(ValidationError):
    pass


class SymmetryViolation(ValidationError):
    pass


class TriangleViolation(ValidationError):
    pass


class NotSeparating(ValidationError):
    pass


class EmptySet(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class EmptyImage(ValidationError):
    pass


class NotACover(ValidationError):
    pass


class Infeasible(ValidationError):
    """Some universe item is not within eps of any candidate."""


class NotASelection(ValidationError):
    def __init__(self, j, x):
        self.witness = (j, x)
        super().__init__(f"selection not contained in the sequence at step j={j}, point index {x}")


# --- resources (exit 3) -----------------------------------------------------

class ResourceExceeded(MvError):
    pass


class OrbitCapExceeded(ResourceExceeded):
    def __init__(self, partial_count, cap):
        self.partial_count = partial_count
        self.cap = cap
        super().__init__(f"orbit enumeration exceeded cap {cap} (partial count {partial_count})")


class TupleBudgetExceeded(ResourceExceeded):
    def __init__(self, budget):
        self.budget = budget
        super().__init__(f"cover block-tuple budget {budget} exceeded")


class ExactSizeLimit(ResourceExceeded):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"exact solver refused: {size} items over budget {limit}")


class SpaceTooLarge(ResourceExceeded):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"hyperspace refused: base space has {size} > {limit} points")
