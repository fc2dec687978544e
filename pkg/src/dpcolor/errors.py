"""Exception types shared across the package."""


class DPColorError(Exception):
    """Base class for all package errors."""


class GraphParseError(DPColorError, ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CoverParseError(DPColorError, ValueError):
    pass


class InstanceTooLarge(DPColorError):
    """An enumeration guard refused the instance."""

    def __init__(self, what, size, limit):
        super().__init__(f"{what}: {size} states exceeds the limit of {limit}")
        self.size = size
        self.limit = limit


class HypothesisError(DPColorError, ValueError):
    """A theorem's hypotheses do not hold, so its bound is not asserted."""


class UnsupportedModulus(DPColorError, ValueError):
    pass


class BudgetExceeded(DPColorError):
    """Exact search ran out of budget; ``partial`` holds the best cover seen."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class CacheCorruptError(DPColorError):
    pass
