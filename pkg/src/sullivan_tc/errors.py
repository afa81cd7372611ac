"""Exception types shared across the toolkit."""


class SullivanError(Exception):
    exit_code = 1


class ValidationError(SullivanError):
    """A presentation fails a structural check.

    ``issues`` is a list of ``(generator, kind, message)`` triples.
    """

    exit_code = 2

    def __init__(self, issues):
        self.issues = list(issues)
        text = "; ".join(f"{g}: {msg}" if g else msg for g, _, msg in self.issues)
        super().__init__(text or "invalid model")


class ParseError(ValidationError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__([(None, "syntax", where + message)])


class HypothesisError(SullivanError):
    """An operation's mathematical preconditions are not (verifiably) met."""

    exit_code = 3


class TruncationError(SullivanError):
    """Cohomology was not computed far enough for the requested consumer."""

    def __init__(self, needed, have):
        self.needed = needed
        self.have = have
        super().__init__(f"cohomology computed up to degree {have}, need at least {needed}")


class CapExceeded(SullivanError):
    """A configurable resource cap refused the computation."""

    exit_code = 4

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
