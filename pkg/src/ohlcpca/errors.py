"""Exception hierarchy shared by every module of the package."""


class OhlcPcaError(ValueError):
    """Base class for all data errors raised by :mod:`ohlcpca`."""


class InvalidOhlc(OhlcPcaError):
    pass


class NonPositiveLow(InvalidOhlc):
    pass


class DegenerateRange(InvalidOhlc):
    pass


class OutOfRangeOpenClose(InvalidOhlc):
    pass


class NegativePrice(InvalidOhlc):
    pass


class InconsistentBounds(InvalidOhlc):
    pass


class DegenerateLambda(OhlcPcaError):
    pass


class NonFinite(OhlcPcaError):
    pass


class LengthMismatch(OhlcPcaError):
    pass


class EmptySeries(OhlcPcaError):
    pass


class ZeroVariance(OhlcPcaError):
    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column!r} has zero variance")


class NotSymmetric(OhlcPcaError):
    pass


class NoConvergence(OhlcPcaError):
    def __init__(self, sweeps, residual):
        self.sweeps = sweeps
        self.residual = residual
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(max off-diagonal {residual:.3e})"
        )


class ComponentsOutOfRange(OhlcPcaError):
    pass


class LabelMismatch(OhlcPcaError):
    pass


class DimensionMismatch(OhlcPcaError):
    pass


class NotUnitNorm(OhlcPcaError):
    pass


class EmptyInput(OhlcPcaError):
    pass


class CsvError(OhlcPcaError):
    pass


class MissingHeader(CsvError):
    pass


class BadNumeric(CsvError):
    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r} as a number")


class DuplicateKey(CsvError):
    def __init__(self, entity, variable, row):
        self.entity = entity
        self.variable = variable
        self.row = row
        super().__init__(f"row {row}: duplicate key ({entity!r}, {variable!r})")


class RaggedPivot(CsvError):
    pass
