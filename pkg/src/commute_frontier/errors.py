"""Exception hierarchy shared by every module."""


class CommuteFrontierError(Exception):
    """Base class for all package errors."""


class DomainError(CommuteFrontierError, ValueError):
    """An argument lies outside the domain of the operation."""


class SchemaError(CommuteFrontierError):
    """Tabular input is missing columns or records."""


class ParseError(CommuteFrontierError):
    """A cell could not be parsed; carries the row and column."""

    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r} as a number")


class TableValidationError(CommuteFrontierError):
    """Loaded table violates hard invariants; ``report`` lists them."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(f"{f.record}.{f.field}: {f.message}" for f in report.errors)
        super().__init__(f"table failed validation: {lines}")


class InsufficientDataError(CommuteFrontierError):
    pass


class DegenerateError(CommuteFrontierError):
    pass


class SingularFitError(CommuteFrontierError):
    pass


class NumericError(CommuteFrontierError, ArithmeticError):
    pass


class ConfigError(CommuteFrontierError, ValueError):
    pass
