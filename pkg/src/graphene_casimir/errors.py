"""Exception hierarchy for graphene-casimir.

Library code raises these; the CLI runner maps them onto process exit codes.
"""


class CasimirError(Exception):
    """Base class for all errors raised by graphene-casimir."""

    exit_code: int = 2


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain where the operation is defined."""

    exit_code = 2


class NumericalError(CasimirError, ArithmeticError):
    """A quadrature or extrapolation failed to reach the requested tolerance."""

    exit_code = 3

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


class UndefinedRatioError(DomainError):
    """A relative quantity was requested with a vanishing reference value."""


class ConfigError(CasimirError):
    """A run configuration is invalid or refers to unknown materials."""

    exit_code = 2


class ConfigFileError(ConfigError):
    """A configuration file cannot be read."""

    exit_code = 4


class InputError(CasimirError):
    """Input data are structurally unusable (e.g. an empty measurement set)."""

    exit_code = 2


class _RowError(CasimirError):
    exit_code = 4
    _label = "row"

    def __init__(self, message: str, row: int | None = None, source: str = ""):
        where = f"{source}: " if source else ""
        if row is not None:
            where += f"{self._label} {row}: "
        super().__init__(f"{where}{message}")
        self.row = row
        self.source = source

    @property
    def line(self) -> int | None:
        return self.row


class MaterialFormatError(_RowError):
    """A permittivity table cannot be parsed or is not strictly ascending in xi."""


class MaterialValidationError(_RowError):
    """A permittivity table parses but violates a physical constraint (epsilon < 1)."""

    exit_code = 2


class MeasurementFormatError(_RowError):
    """A measurement CSV row cannot be parsed."""

    _label = "line"


class MeasurementValidationError(_RowError):
    """A measurement CSV row parses but holds a non-physical value."""

    _label = "line"
    exit_code = 2


class OutputError(CasimirError):
    """A result file could not be written."""

    exit_code = 4
