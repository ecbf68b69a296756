"""Exception hierarchy shared by every module of the package."""


class JacquetError(Exception):
    """Base class; ``code`` is the machine-readable tag written to reports."""

    code = "error"


class CatalogError(JacquetError):
    code = "catalog"


class ConsistencyError(JacquetError):
    """An internal invariant failed; indicates a bug, not bad input."""

    code = "internal_consistency"


class DimensionError(JacquetError):
    code = "dimension"


class UnsupportedParameterError(JacquetError):
    code = "unsupported_parameter"


class SingularWeightError(UnsupportedParameterError):
    code = "singular_lambda"


class TruncationError(JacquetError):
    code = "truncation"

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class NotInvertibleError(JacquetError):
    code = "not_invertible"


class ResourceError(JacquetError):
    code = "resource"

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class ConfigurationError(JacquetError):
    code = "configuration"


class VerificationError(JacquetError):
    code = "verification_failure"


class PreconditionError(JacquetError):
    code = "precondition"
