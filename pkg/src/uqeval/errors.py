"""Exception hierarchy.

Each family maps onto one CLI exit code: ingestion problems exit 1,
validation problems exit 2, metric precondition failures exit 3.
"""


class UQEvalError(Exception):
    exit_code = 1


# ingestion (exit 1)
class IngestError(UQEvalError):
    exit_code = 1


class SchemaError(IngestError):
    pass


class ParseError(IngestError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


# validation (exit 2)
class ValidationError(UQEvalError):
    exit_code = 2


class EmptySet(ValidationError):
    pass


class RaggedEnsemble(ValidationError):
    pass


class NegativeVariance(ValidationError):
    def __init__(self, message, record_id=None):
        super().__init__(message)
        self.record_id = record_id


class NonFinite(ValidationError):
    def __init__(self, message, record_id=None):
        super().__init__(message)
        self.record_id = record_id


class DuplicateId(ValidationError):
    pass


class InvalidConfig(ValidationError):
    pass


# metric preconditions (exit 3)
class MetricError(UQEvalError):
    exit_code = 3


class MeasureUnavailable(MetricError):
    pass


class InsufficientMembers(MetricError):
    pass


class ZeroVariance(MetricError):
    pass


class NonPositiveVariance(MetricError):
    def __init__(self, message, record_id=None):
        super().__init__(message)
        self.record_id = record_id


class TooManyBins(MetricError):
    pass


class InvalidBinCount(MetricError):
    pass


class EmptySubset(MetricError):
    pass


class ZeroRMVBin(MetricError):
    def __init__(self, message, bin_index=None):
        super().__init__(message)
        self.bin_index = bin_index


class ZeroRMVSubset(MetricError):
    pass


class InsufficientData(MetricError):
    pass


class ZeroMeanSigma(MetricError):
    pass


class LengthMismatch(MetricError):
    pass


class WrongCurveKind(MetricError):
    pass


class InvalidThreshold(MetricError):
    pass


class InvalidGrid(MetricError):
    pass
