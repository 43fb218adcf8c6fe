class SubfactorError(Exception):
    """Base class of every error raised by the package."""


class ValidationError(SubfactorError, ValueError):
    """The input does not describe what it claims to describe."""


class GroupValidationError(ValidationError): ...


class SubgroupError(ValidationError): ...


class CapExceededError(ValidationError): ...


class NotProjectiveError(ValidationError): ...


class NonUnitaryError(ValidationError): ...


class CocycleError(ValidationError): ...


class GroupMismatchError(ValidationError): ...


class DimensionMismatchError(ValidationError): ...


class NotAFactorError(ValidationError): ...


class DecompositionError(ValidationError): ...


class UsageError(ValidationError): ...


class SchemaError(ValidationError):
    def __init__(self, message: str, path: str | None = None, field: str | None = None):
        super().__init__(message)
        self.path = path
        self.field = field


class NumericalError(SubfactorError):
    """A floating point computation did not settle; retrying with another seed may help."""


class InconsistencyError(SubfactorError):
    """Two independent computations of the same identity disagree."""
