"""Exception types shared across the package."""


class SwqmcError(Exception):
    """Base class for all library errors."""


class DimensionUnsupportedError(SwqmcError, ValueError):
    """Requested dimension exceeds what a generator or evaluator supports."""


class IndexRangeError(SwqmcError, ValueError):
    """Sequence index outside the 32-bit range of the digital construction."""


class UnsupportedRandomizationError(SwqmcError, ValueError):
    """Randomization scheme does not apply to the given point set."""


class SizeLimitError(SwqmcError, ValueError):
    """Instance exceeds the documented exact-evaluation budget."""


class BoundaryPointError(SwqmcError, ValueError):
    """Cube point on the boundary where the requested mapping diverges."""


class DegeneratePointError(SwqmcError, ValueError):
    """Point maps to the zero vector and cannot be normalized."""


class ShapeError(SwqmcError, ValueError):
    """Mismatched array dimensions between operands."""


class DomainError(SwqmcError, ValueError):
    """Scalar argument outside its mathematical domain."""


class ConfigError(SwqmcError, ValueError):
    """Inconsistent or incomplete estimator/flow configuration."""


class UnsupportedRegimeError(SwqmcError, ValueError):
    """Operation implemented only for uniform-weight equal-size clouds."""


class InvalidSchemeError(SwqmcError, ValueError):
    """Estimator scheme not valid for the requested operation."""


class ParseError(SwqmcError, ValueError):
    """Malformed input file; carries position context."""

    def __init__(self, message, *, path=None, line=None, offset=None):
        context = []
        if path is not None:
            context.append(str(path))
        if line is not None:
            context.append(f"line {line}")
        if offset is not None:
            context.append(f"byte {offset}")
        if context:
            message = f"{message} ({', '.join(context)})"
        super().__init__(message)
        self.path = path
        self.line = line
        self.offset = offset
