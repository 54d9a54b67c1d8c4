"""Error types raised by the ribbons services."""


class RibbonError(ValueError):
    """Base class for every domain error of the ribbons app."""


class DimensionMismatchError(RibbonError):
    pass


class InvalidPointError(RibbonError):
    pass


class UndefinedTransportError(RibbonError):
    pass


class SingularGradientError(RibbonError):
    pass


class KernelDomainError(RibbonError):
    pass


class UnsupportedFormatError(RibbonError):
    pass


class EmbeddingError(RibbonError):
    pass


class SingularEvaluationError(RibbonError):
    pass


class InvalidTangentError(RibbonError):
    pass
