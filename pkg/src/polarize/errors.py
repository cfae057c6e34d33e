from typing import Optional


class PolarizeError(ValueError):
    """
    Base class of every error raised on purpose by this package.
    """


class ContractViolationError(PolarizeError):
    """
    An input broke an operation's precondition: mismatching dimensions,
    non-finite components, a non-unit vector where a unit vector is required.
    """


class InvalidDescriptorError(PolarizeError):
    """
    A norm descriptor does not describe a norm.
    """

    def __init__(self, message: str, issues: Optional[list[str]] = None):
        super().__init__(message)
        self.issues = list(issues or [])


class DependentVectorsError(PolarizeError):
    """
    Two vectors that should span a plane are linearly dependent.
    """


class DomainError(PolarizeError):
    """
    A scalar argument lies outside the domain where a formula is defined.
    """


class GenerationError(PolarizeError):
    """
    `random_norm` found no valid norm within its retry budget.
    """
