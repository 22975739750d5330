class CSGError(Exception):
    """Base class for errors raised by the connected subtraction games toolkit"""


class CapacityError(CSGError):
    """Raised when a graph would exceed the 64-vertex bitset capacity"""


class SpecParseError(CSGError):
    """Raised when a graph, subtraction-set, family or sequence spec cannot be parsed"""


class DomainError(CSGError):
    """Raised when an evaluator is called outside the domain its formula covers"""


class PreconditionError(CSGError):
    """Raised when the inputs of an operation violate its stated precondition"""


class UnknownFamilyError(CSGError):
    """Raised when a star family id is not one of the known families"""


class PeriodNotFoundError(CSGError):
    """Raised when no period can be confirmed within the supplied sequence"""


class CertificationError(CSGError):
    """Raised when the certifier exhausts its search bound before finding a repeated state"""
