"""Exception hierarchy shared by the library and the CLI."""


class SigdevError(Exception):
    """Base class for every error raised on purpose by sigdev."""


class DomainError(SigdevError, ValueError):
    """Input outside the operation's domain (bad interval, dimension mismatch, ...)."""


class NumericError(SigdevError, ArithmeticError):
    """A numerical routine failed (factorization, non-finite result)."""


class ResourceError(SigdevError):
    """A size guard or tolerance target cannot be met.

    ``bound`` carries the best achievable value when there is one.
    """

    def __init__(self, message: str, bound: float | None = None) -> None:
        super().__init__(message)
        self.bound = bound
