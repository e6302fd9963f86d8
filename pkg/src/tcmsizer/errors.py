"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to, so the command layer can
translate failures without a lookup table.
"""


class SizerError(Exception):
    exit_code = 1


class UsageError(SizerError):
    exit_code = 2


class ParseError(UsageError):
    """Malformed input file; ``line`` and ``field`` locate the problem."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class SchemaError(ParseError):
    """Structurally valid file missing a required section or field."""


class UnitError(ParseError):
    pass


class RankDeficient(SizerError):
    exit_code = 4


class Diverged(SizerError):
    exit_code = 3


class DegenerateSeries(SizerError):
    exit_code = 4


class OutOfDomain(SizerError):
    exit_code = 4


class NotSaturated(SizerError):
    exit_code = 4


class DegenerateDenominator(SizerError):
    exit_code = 4


class SingularDenominator(SizerError):
    exit_code = 4


class NoBracket(SizerError):
    exit_code = 5


class NonConvergence(SizerError):
    exit_code = 5
