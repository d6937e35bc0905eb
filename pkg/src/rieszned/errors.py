"""Exception hierarchy.

Everything raised on purpose derives from ``RieszError``. Input problems that
a caller can fix also derive from ``ValueError``.
"""


class RieszError(Exception):
    pass


class ValidationError(RieszError, ValueError):
    pass


class NonPositiveWeight(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class LimitExceeded(ValidationError):
    pass


class SpaceMismatch(RieszError, ValueError):
    pass


class NegativeInput(RieszError, ValueError):
    pass


class IncompatibleOperators(RieszError, ValueError):
    pass


class OperatorsNotNested(IncompatibleOperators):
    pass


class RangeNotNested(IncompatibleOperators):
    pass


class NotAFiltration(IncompatibleOperators):
    pass


class CapExceeded(RieszError):
    def __init__(self, blocks, cap):
        self.blocks = blocks
        self.cap = cap
        super().__init__(f"{blocks} blocks exceed the enumeration cap of {cap}")


class NotInRangeOfV(RieszError, ValueError):
    pass


class WindowTooSmall(RieszError, ValueError):
    pass


class IndexOutOfWindow(RieszError, IndexError):
    pass


class WindowOverflow(RieszError, IndexError):
    pass


class ShapeMismatch(RieszError, ValueError):
    pass


class MissingBounds(RieszError, ValueError):
    pass


class NonZeroConditionalMean(RieszError, ValueError):
    pass


class NotContractive(RieszError, ValueError):
    pass


class ThetaNotContractive(NotContractive):
    pass


class ThetaNotInRangeOfT(RieszError, ValueError):
    pass


class CertificateRejected(RieszError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)
