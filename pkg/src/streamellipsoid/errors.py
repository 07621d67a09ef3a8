"""Exception hierarchy.

Every error carries a ``category`` used by the CLI to pick an exit code:
``"parse"`` (2), ``"numeric"`` (3) or ``"config"`` (4).
"""


class EllipsoidError(Exception):
    category = "numeric"


class DimensionMismatch(EllipsoidError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
            self.category = "parse"
        super().__init__(message)


class NonFinite(EllipsoidError, ValueError):
    pass


class InteriorPoint(EllipsoidError, ValueError):
    pass


class Singular(EllipsoidError, ValueError):
    pass


class ResultSingular(Singular):
    pass


class InvalidRadius(EllipsoidError, ValueError):
    category = "config"


class InvalidAspectRatio(EllipsoidError, ValueError):
    category = "config"


class ZeroFirstPoint(EllipsoidError, ValueError):
    pass


class EmptyStream(EllipsoidError, ValueError):
    category = "parse"


class TraceMismatch(EllipsoidError, ValueError):
    pass


class DegenerateSpan(EllipsoidError, ValueError):
    pass


class NonConvergence(EllipsoidError, RuntimeError):
    pass


class LPFailure(EllipsoidError, RuntimeError):
    pass


class NotCovering(EllipsoidError, ValueError):
    pass


class NotPowerOfTwo(EllipsoidError, ValueError):
    category = "config"


class EmptyCoreset(EllipsoidError, ValueError):
    pass


class ParseError(EllipsoidError, ValueError):
    category = "parse"

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ConfigError(EllipsoidError, ValueError):
    category = "config"
