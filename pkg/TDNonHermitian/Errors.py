"""`TDNonHermitian.Errors`

Exceptions raised by TDNonHermitian.

All exceptions derive from `TDNonHermitianError`, so a single ``except``
clause catches everything the package raises on purpose. Errors that describe
a bad input value also derive from ``ValueError``.
"""

#
# Copyright (c) 2024 by the TDNonHermitian developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE

__docformat__ = 'restructuredText'

#############################################################################
class TDNonHermitianError(Exception):
    """Base class for all errors raised by TDNonHermitian"""
    pass

#############################################################################
class ExprError(TDNonHermitianError, ValueError):
    """Error in an expression of the time variable.

    :Ivariables:
        offset : int
            byte offset into the expression source (``None`` when the
            expression was built programmatically)
    """
    def __init__(self, message, offset = None):
        if offset is not None:
            message = "%s (at offset %d)" % (message, offset)
        super(ExprError, self).__init__(message)
        self.offset = offset

class ExprSyntaxError(ExprError):
    """Malformed expression text.

    :Ivariables:
        expected : frozenset
            names of the tokens that would have been accepted at `offset`
    """
    def __init__(self, message, offset, expected = frozenset()):
        self.expected = frozenset(expected)
        if self.expected:
            message = "%s, expected one of: %s" % (message, ', '.join(sorted(self.expected)))
        super(ExprSyntaxError, self).__init__(message, offset)

class UnknownIdentifierError(ExprError):
    """An identifier that is neither ``t``, a named constant nor a function"""
    def __init__(self, name, offset):
        super(UnknownIdentifierError, self).__init__("unknown identifier %r" % name, offset)
        self.name = name

class ExprDomainError(ExprError):
    """Expression evaluated outside of its domain (log of non-positive value,
    division by zero, non-finite result, ...)"""
    pass

#############################################################################
class LinalgError(TDNonHermitianError):
    pass

class DefectiveMatrixError(LinalgError):
    """Eigenvector matrix is numerically singular.

    This signals proximity to an exceptional point.
    """
    def __init__(self, message, condition = None):
        super(DefectiveMatrixError, self).__init__(message)
        self.condition = condition

class DimensionMismatchError(LinalgError, ValueError):
    pass

class SingularMatrixError(LinalgError):
    pass

#############################################################################
class ModelError(TDNonHermitianError):
    pass

class ConstraintViolationError(ModelError):
    """A constraint of a parameter path or scenario does not hold.

    :Ivariables:
        residual : float
            the offending residual (``None`` when not applicable)
    """
    def __init__(self, message, residual = None):
        super(ConstraintViolationError, self).__init__(message)
        self.residual = residual

class ScenarioError(ModelError, ValueError):
    """Inadmissible scenario constants or free functions"""
    pass

class QuadratureError(ModelError):
    pass

#############################################################################
class OperatorError(TDNonHermitianError):
    pass

class NormalizationError(OperatorError):
    pass

class InconsistentFrameError(OperatorError):
    pass

#############################################################################
class EvolutionError(TDNonHermitianError):
    pass

class GaugeDiscontinuityError(EvolutionError):
    pass

class LevelCrossingError(EvolutionError):
    pass

class OpenPathError(EvolutionError):
    pass

class ComplexEnergyError(EvolutionError):
    pass

class IntegrationInstabilityError(EvolutionError):
    pass

class UndefinedAngleError(EvolutionError):
    pass

#############################################################################
class ConfigError(TDNonHermitianError):
    """Invalid scenario configuration.

    :Ivariables:
        path : str
            configuration file path, if known
        line : int
            1-based line number of the offending entry, if known
        key : str
            offending ``section.key``, if known
    """
    def __init__(self, message, path = None, line = None, key = None):
        location = []
        if path is not None:
            location.append(str(path))
        if line is not None:
            location.append(str(line))
        if key is not None:
            message = "%s: %s" % (key, message)
        if location:
            message = "%s: %s" % (':'.join(location), message)
        super(ConfigError, self).__init__(message)
        self.path = path
        self.line = line
        self.key = key

class UnknownToleranceError(TDNonHermitianError, KeyError):
    def __init__(self, name):
        super(UnknownToleranceError, self).__init__(name)
        self.name = name

    def __str__(self):
        return "unknown tolerance %r" % self.name

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
