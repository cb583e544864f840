from __future__ import annotations

from typing import Any


class LilratesError(Exception):
    """Base of every error raised by lilrates"""


class DomainError(LilratesError, ValueError):
    """An argument lies outside the domain of the operation"""


class DivergentParametersError(DomainError):
    """Series does not converge for these parameters (eps^2 <= 1 + a)"""


class ConfigError(DomainError):
    """Invalid run configuration, naming the offending field"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ToleranceNotMetError(LilratesError, ArithmeticError):
    """Certified error bound stayed above tolerance after refinement

    `result` holds the best result computed before giving up"""

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result


class GridInsufficientError(LilratesError):
    """Beyond-grid majorant of an empirical series exceeds its tolerance"""

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result
