"""Exception types shared across the package."""


class HmktError(Exception):
    """Base class for all domain errors."""

    exit_code = 1


class MarketDataError(HmktError):
    """Invalid market data (labels, endowment, preference rows, types)."""

    exit_code = 2


class ParseError(MarketDataError):
    """Market document syntax error, with 1-based line/column position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + where)


class TypeConsistencyError(MarketDataError):
    """Preferences do not agree with the declared object types."""


class InstanceTooLargeError(HmktError):
    """Instance exceeds the configured enumeration bound."""

    exit_code = 3

    def __init__(self, n: int, bound: int):
        self.n = n
        self.bound = bound
        super().__init__(f"instance-too-large: n={n} exceeds bound {bound}")


class BudgetExceededError(HmktError):
    """An enumeration budget (priority structures, branching) was exhausted."""

    exit_code = 3


class EmptyPoolError(HmktError):
    """A favorite set was requested over an empty object pool."""

    def __init__(self):
        super().__init__("empty-pool")


class DeparturePendingError(HmktError):
    """Cycle selection requested while a departure group is still pending."""

    def __init__(self):
        super().__init__("departure-pending")
