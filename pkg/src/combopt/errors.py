"""Exception hierarchy shared across the framework."""


class CombOptError(Exception):
    """Base class for framework errors."""


class ConfigError(CombOptError):
    """Invalid configuration: bad input document, unknown decision, bad key."""


class EvaluationError(CombOptError):
    """A solution evaluation failed or produced an incomplete result."""


class GenerationError(CombOptError):
    """Random solution generation exhausted its retry budget."""


class CapExceededError(CombOptError):
    """Brute-force enumeration refused: the solution space is too large."""

    def __init__(self, estimate: int, cap: int):
        self.estimate = estimate
        self.cap = cap
        super().__init__(
            f"estimated {estimate} assignments exceeds enumeration cap {cap}"
        )
