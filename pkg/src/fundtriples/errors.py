"""Exception types raised across the package."""


class TripleError(Exception):
    """Base class for all errors raised by fundtriples."""


class RankError(TripleError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class ZeroInputError(TripleError):
    pass


class CoincidentCentersError(TripleError):
    pass


class ZeroScaleError(TripleError):
    pass


class IsotropicCenterError(TripleError):
    pass


class ZeroCenterError(TripleError):
    pass


class DegenerateSampleError(TripleError):
    pass


class SamplerDegenerateError(TripleError):
    pass


class RationalizationError(TripleError):
    pass


class DocumentError(TripleError):
    pass
