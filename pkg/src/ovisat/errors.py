"""Exception hierarchy.

Three branches map onto the CLI exit codes: ConfigError -> 1,
DataError -> 2, ModelError -> 3.
"""


class OvisatError(Exception):
    """Base class for all package errors."""


class ConfigError(OvisatError):
    """Invalid configuration or command usage."""


class DataError(OvisatError):
    """Problem with input data or its transformation."""


class ModelError(OvisatError):
    """Problem while fitting, loading, or applying a model."""


# --- data errors -----------------------------------------------------------

class MalformedRow(DataError):
    def __init__(self, path, line_no, reason):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no


class DuplicateDate(DataError):
    pass


class EmptyFile(DataError):
    pass


class NoOverlap(DataError):
    pass


class ZeroVariance(DataError):
    pass


class ZeroDenominator(DataError):
    pass


class LagTooLarge(DataError):
    pass


class ConstantInput(DataError):
    pass


class LengthMismatch(DataError):
    pass


class NoSignificantFeatures(DataError):
    pass


class UnknownVariable(DataError):
    pass


class GridMismatch(DataError):
    pass


class EmptyInput(DataError):
    pass


class TooFewSamples(DataError):
    pass


# --- model errors ----------------------------------------------------------

class ShapeMismatch(ModelError):
    pass


class TooManyComponents(ModelError):
    pass


class DegenerateData(ModelError):
    pass


class SingularDesign(ModelError):
    pass


class NoConvergence(ModelError):
    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class DivergedLoss(ModelError):
    pass


class MissingModelFile(ModelError):
    pass


class FeatureMismatch(ModelError):
    pass
