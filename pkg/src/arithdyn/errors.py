"""Exception hierarchy shared by all arithdyn modules."""


class ArithDynError(Exception):
    """Base class for every error raised by arithdyn."""


class InvalidMapError(ArithDynError, ValueError):
    pass


class DegenerateMap(InvalidMapError):
    """The two forms share a projective root, so the resultant vanishes."""


class DegreeTooSmall(InvalidMapError):
    pass


class DegreeMismatch(InvalidMapError):
    pass


class ZeroForm(ArithDynError, ValueError):
    """phi^m and phi^n coincide as maps, so phi^m - phi^n has no finite root set."""


class SharedPoint(ArithDynError, ValueError):
    """Two algebraic sets that must be disjoint have a common point."""


class EqualPoints(ArithDynError, ValueError):
    """A Green pairing was requested on the diagonal."""


class UnsupportedPlacePoint(ArithDynError):
    """Bad prime combined with non-rational conjugates."""


class BudgetExceeded(ArithDynError):
    """An iteration or coefficient-size guard tripped."""


class RootCertificationError(ArithDynError):
    """Root refinement did not reach a certified enclosure within budget."""


class PrecisionError(ArithDynError):
    """The requested tolerance is unreachable at the permitted precision."""
