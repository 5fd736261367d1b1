"""Exception types shared across the package."""


class ContractError(ValueError):
    """An argument violates a documented precondition."""


class InvalidChainError(ContractError):
    """A chain description is malformed (wrong lengths, N < 2, ...)."""


class BracketingError(ContractError):
    """A root-finding bracket does not contain a sign change."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or produced garbage."""
