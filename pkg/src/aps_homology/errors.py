"""Exception hierarchy shared by the package."""


class ApsError(Exception):
    """Base class for every error raised by aps_homology."""


class MalformedMap(ApsError):
    pass


class ParseError(ApsError):
    """Input document is not valid JSON or has a field of the wrong shape.

    ``path`` is a JSON-pointer-like location of the offending field.
    """

    def __init__(self, message, path="", line=None):
        self.path = path
        self.line = line
        where = path or "<document>"
        if line is not None:
            where = f"line {line}: {where}"
        super().__init__(f"{where}: {message}")


class SchemaError(ParseError):
    pass


class InvalidDiagram(ApsError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class PatternMismatch(ApsError):
    pass


class PunctureObstruction(ApsError):
    pass


class BadPermutation(ApsError):
    pass


class UnrealizableCase(ApsError):
    """A merge/split class triple that cannot occur in a genus-zero surface."""


class InconsistentComplex(ApsError):
    """The assembled differential does not square to zero."""
