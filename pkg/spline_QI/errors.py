# -*- coding: utf-8 -*-

"""
Exceptions raised by the quasi-interpolation toolkit.

Every exception derives from QIError and from the builtin that best
describes it, so that ``except ValueError`` keeps working for callers that
do not know this package.
"""


class QIError(Exception):
    """Base class of all errors raised by spline_QI."""


class WindowBoundsError(QIError, IndexError):
    """An index, or the reach of a stencil, falls outside the knot window."""


class UnsupportedDegreeError(QIError, ValueError):
    pass


class DegenerateNodesError(QIError, ValueError):
    pass


class ParameterError(QIError, ValueError):
    pass


class InconsistentCoefficientsError(QIError, ValueError):
    def __init__(self, message, index=None, residual=None):
        super().__init__(message)
        self.index = index
        self.residual = residual


class ExactnessError(QIError, ArithmeticError):
    pass


class DegenerateProblemError(QIError, ArithmeticError):
    pass


class MissingDerivativeError(QIError, ValueError):
    pass


class RangeError(QIError, ValueError):
    pass


class UnsupportedOperatorError(QIError, TypeError):
    pass


class KnotFileError(QIError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
