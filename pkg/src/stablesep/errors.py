"""Exception hierarchy.

Configuration problems (bad flags, malformed input files, impossible
group assignments) derive from :class:`ConfigurationError` and map to
CLI exit code 1. Numerical/runtime failures derive from
:class:`NumericalError` and map to exit code 2.
"""


class StableSepError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(StableSepError):
    """User-facing configuration or input problem (CLI exit code 1)."""


class NumericalError(StableSepError):
    """Runtime numerical failure (CLI exit code 2)."""


class ConstantColumn(NumericalError):
    """A column has zero sample variance and cannot be standardized."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"column {name!r} has zero variance")


class IndexOutOfRange(ConfigurationError):
    """A variable index lies outside [0, p)."""


class DegenerateInput(NumericalError):
    """Input leaves a statistic undefined (e.g. |correlation| at 1)."""


class KTooLarge(ConfigurationError):
    """Requested k is not in [1, p]."""


class SelectionCollapse(NumericalError):
    """Biased selection retained too few rows even after retries."""


class SingularDesign(NumericalError):
    """A least-squares design stayed rank-deficient after the ridge fallback."""


class TooFewEnvironments(ConfigurationError):
    """Stability error needs at least two environments."""


class MissingColumn(ConfigurationError):
    """A configured column name is absent from the input file."""

    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column!r} not found")


class EmptyGroup(ConfigurationError):
    """A configured group matched no rows."""


class ParseError(ConfigurationError):
    """A CSV cell could not be parsed; carries the 1-based line number."""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")
