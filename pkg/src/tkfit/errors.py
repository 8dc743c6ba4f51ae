"""Exception hierarchy.

The CLI maps these onto exit codes: configuration problems (2), data
problems (3) and numerical/detection failures (4).
"""


class TKError(Exception):
    """Base class for all errors raised by tkfit."""


class ParameterError(TKError, ValueError):
    """A parameter is outside its admissible range."""


class DomainError(ParameterError):
    """An argument lies outside the domain of a function (e.g. p not in (0, 1))."""


class PlanError(ParameterError):
    """Error targets for a contamination test are not admissible."""


class InputError(TKError, ValueError):
    """Input data are unusable (empty sample, size mismatch, non-monotone grid)."""


class DataError(InputError):
    """A data file could not be read or parsed."""


class ModelError(TKError):
    """A distribution does not satisfy the regularity an operation needs."""


class DetectionError(TKError):
    """Numerical detection failed (e.g. no contact points found within tolerance)."""


class BracketError(TKError):
    """A root-finding bracket did not contain a sign change."""
