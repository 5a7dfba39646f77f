"""Exception types raised by the library."""


class JensenGapError(Exception):
    """Base class for all library errors."""


class NonFiniteMoment(JensenGapError):
    """A moment or expectation a bound depends on diverges."""


class DomainMismatch(JensenGapError):
    """An interval or point falls outside the domain of a function or law."""


class QuadratureFailure(JensenGapError):
    """Adaptive quadrature could not reach its error target within budget."""


class NonConvex(JensenGapError):
    """An operation that needs a convex function was given a non-convex one."""


class NoDensity(JensenGapError):
    """The distribution has no density (e.g. an empirical sample)."""


class SupportMismatch(JensenGapError):
    """Two discrete laws are not defined on the same atoms."""


class ZeroProbability(JensenGapError):
    """A probability that must be strictly positive is zero."""


class SpecParseError(JensenGapError, ValueError):
    """A textual distribution or function spec could not be parsed."""
