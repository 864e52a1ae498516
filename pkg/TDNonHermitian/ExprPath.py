"""`TDNonHermitian.ExprPath`

Arithmetic expressions of the time variable ``t``.

**General Description**

Time-dependent coefficients of a model are written as plain arithmetic
expressions, for example ``"1 + 0.5*sin(2*pi*t)"``. This module parses such
text into an immutable tree (AST), prints trees back to text, evaluates them
on scalars or numpy arrays and differentiates them exactly in forward mode
with `DualValue` numbers.

Grammar (``^`` binds tighter than unary minus, which binds tighter than
``*`` and ``/``, which bind tighter than ``+`` and ``-``; ``^`` is right
associative)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | 't' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

Supported functions:
====================

    sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, atan

Numbers accept scientific notation (``1e-3``). Syntax errors carry the byte
offset into the UTF-8 source and the set of tokens that were expected there.
Singularities met during evaluation raise `ExprDomainError` instead of
propagating NaN.
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

import collections
import dataclasses
import math
import re
import typing

import numpy

import TDNonHermitian.Util
from TDNonHermitian.Errors import ExprSyntaxError, UnknownIdentifierError, ExprDomainError

#############################################################################
_std_function_triples = [
    ( 'sin',  numpy.sin,    numpy.cos ),
    ( 'cos',  numpy.cos,    lambda x : -numpy.sin(x) ),
    ( 'tan',  numpy.tan,    lambda x : 1.0 / numpy.cos(x) ** 2 ),
    ( 'sinh', numpy.sinh,   numpy.cosh ),
    ( 'cosh', numpy.cosh,   numpy.sinh ),
    ( 'tanh', numpy.tanh,   lambda x : 1.0 - numpy.tanh(x) ** 2 ),
    ( 'exp',  numpy.exp,    numpy.exp ),
    ( 'log',  numpy.log,    lambda x : 1.0 / x ),
    ( 'sqrt', numpy.sqrt,   lambda x : 0.5 / numpy.sqrt(x) ),
    ( 'atan', numpy.arctan, lambda x : 1.0 / (1.0 + x * x) ),
]
"""Functions as (name, function, derivative). This is for internal use, it
IS **NOT a part of public API**"""

_std_constant_triples = [
    ( 'pi',
      "Ratio of a circle's circumference to its diameter",
      math.pi ),
    ( 'e',
      "Base of the natural logarithm",
      math.e ),
]
"""Named constants. This is for internal use, it IS **NOT a part of public API**"""

TIME_VARIABLE = 't'

#############################################################################
def __init_module_vars():
    global _functions, _constants
    _functions = dict(TDNonHermitian.Util.map_triples(lambda n, f, d : (n, (f, d)), _std_function_triples))
    _constants = dict(TDNonHermitian.Util.map_triples(lambda n, h, v : (n, v), _std_constant_triples))
_functions = None
_constants = None
__init_module_vars()

#############################################################################
def FunctionNames(name_filter = lambda x : True):
    """Return list of supported function names"""
    return TDNonHermitian.Util.names_from_triples(_std_function_triples, name_filter)

def ConstantNames(name_filter = lambda x : True):
    """Return list of named constants"""
    return TDNonHermitian.Util.names_from_triples(_std_constant_triples, name_filter)

#############################################################################
# AST nodes. ``offset`` is the byte offset of the node in its source; it takes
# no part in comparisons so that re-parsed trees compare equal.
@dataclasses.dataclass(frozen = True)
class Const(object):
    value : float
    offset : typing.Optional[int] = dataclasses.field(default = None, compare = False, repr = False)

@dataclasses.dataclass(frozen = True)
class Var(object):
    offset : typing.Optional[int] = dataclasses.field(default = None, compare = False, repr = False)

@dataclasses.dataclass(frozen = True)
class Named(object):
    name : str
    offset : typing.Optional[int] = dataclasses.field(default = None, compare = False, repr = False)

@dataclasses.dataclass(frozen = True)
class Unary(object):
    """``op`` is ``'neg'`` or a function name"""
    op : str
    arg : typing.Any
    offset : typing.Optional[int] = dataclasses.field(default = None, compare = False, repr = False)

@dataclasses.dataclass(frozen = True)
class Binary(object):
    """``op`` is one of ``+ - * / ^``"""
    op : str
    left : typing.Any
    right : typing.Any
    offset : typing.Optional[int] = dataclasses.field(default = None, compare = False, repr = False)

#############################################################################
_token_re = re.compile(r"""
      (?P<space>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op>[-+*/^(),])
    """, re.VERBOSE)

_Token = collections.namedtuple('_Token', ['kind', 'text', 'offset'])

_END = 'end of input'
_EXPECT_OPERAND = frozenset(["number", "identifier", "'('", "'-'", "'+'"])
_EXPECT_OPERATOR = frozenset(["'+'", "'-'", "'*'", "'/'", "'^'"])

def _tokenize(source):
    tokens = []
    pos = 0
    offset = 0
    while pos < len(source):
        m = _token_re.match(source, pos)
        if m is None:
            raise ExprSyntaxError("unexpected character %r" % source[pos], offset,
                                  _EXPECT_OPERAND | _EXPECT_OPERATOR | frozenset(["')'"]))
        kind = m.lastgroup
        text = m.group(kind)
        if kind != 'space':
            tokens.append(_Token(kind, text, offset))
        offset += len(text.encode('utf-8'))
        pos = m.end()
    tokens.append(_Token('end', '', offset))
    return tokens

#############################################################################
class _Parser(object):
    """Recursive-descent parser over the token list"""

    def __init__(self, source):
        self.tokens = _tokenize(source)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def at_op(self, *ops):
        tok = self.peek()
        return tok.kind == 'op' and tok.text in ops

    def expect_op(self, op, expected):
        tok = self.peek()
        if tok.kind == 'op' and tok.text == op:
            return self.advance()
        raise ExprSyntaxError(_unexpected(tok), tok.offset, expected)

    def parse(self):
        node = self.parse_expr()
        tok = self.peek()
        if tok.kind != 'end':
            raise ExprSyntaxError(_unexpected(tok), tok.offset, _EXPECT_OPERATOR | frozenset([_END]))
        return node

    def parse_expr(self):
        node = self.parse_term()
        while self.at_op('+', '-'):
            tok = self.advance()
            node = Binary(tok.text, node, self.parse_term(), tok.offset)
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.at_op('*', '/'):
            tok = self.advance()
            node = Binary(tok.text, node, self.parse_unary(), tok.offset)
        return node

    def parse_unary(self):
        if self.at_op('-'):
            tok = self.advance()
            return Unary('neg', self.parse_unary(), tok.offset)
        if self.at_op('+'):
            self.advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        if self.at_op('^'):
            tok = self.advance()
            node = Binary('^', node, self.parse_unary(), tok.offset)
        return node

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == 'number':
            self.advance()
            return Const(float(tok.text), tok.offset)
        if tok.kind == 'ident':
            self.advance()
            if tok.text in _functions:
                self.expect_op('(', frozenset(["'('"]))
                arg = self.parse_expr()
                self.expect_op(')', _EXPECT_OPERATOR | frozenset(["')'"]))
                return Unary(tok.text, arg, tok.offset)
            if tok.text == TIME_VARIABLE:
                return Var(tok.offset)
            if tok.text in _constants:
                return Named(tok.text, tok.offset)
            raise UnknownIdentifierError(tok.text, tok.offset)
        if tok.kind == 'op' and tok.text == '(':
            self.advance()
            node = self.parse_expr()
            self.expect_op(')', _EXPECT_OPERATOR | frozenset(["')'"]))
            return node
        raise ExprSyntaxError(_unexpected(tok), tok.offset, _EXPECT_OPERAND)

def _unexpected(tok):
    if tok.kind == 'end':
        return "unexpected end of input"
    return "unexpected token %r" % tok.text

#############################################################################
def parse(source):
    """Parse expression text into an AST.

    :Parameters:
        source : str
            expression text
    :Returns:
        the root node of the AST
    :Raises:
        ExprSyntaxError
            malformed text, with byte offset and expected-token set
        UnknownIdentifierError
            an identifier that is not ``t``, a constant or a function
    """
    if isinstance(source, bytes):
        source = source.decode('utf-8')
    return _Parser(source).parse()

#############################################################################
_PREC_ATOM = 5
_PREC_POW = 4
_PREC_NEG = 3

def _precedence(node):
    if isinstance(node, Binary):
        return {'+' : 1, '-' : 1, '*' : 2, '/' : 2, '^' : _PREC_POW}[node.op]
    if isinstance(node, Unary) and node.op == 'neg':
        return _PREC_NEG
    return _PREC_ATOM

def _wrap(node, cond):
    text = to_source(node)
    if cond:
        return '(%s)' % text
    return text

def to_source(node):
    """Print an AST back to expression text.

    The output uses as few parentheses as the grammar allows, and
    ``parse(to_source(node)) == node`` holds for every tree with non-negative
    constants. A negative constant prints as a negated literal.
    """
    if isinstance(node, Const):
        if node.value < 0 or (node.value == 0 and math.copysign(1.0, node.value) < 0):
            return '(-%r)' % float(-node.value)
        return repr(float(node.value))
    if isinstance(node, Var):
        return TIME_VARIABLE
    if isinstance(node, Named):
        return node.name
    if isinstance(node, Unary):
        if node.op == 'neg':
            return '-' + _wrap(node.arg, _precedence(node.arg) < _PREC_NEG)
        return '%s(%s)' % (node.op, to_source(node.arg))
    if isinstance(node, Binary):
        prec = _precedence(node)
        if node.op == '^':
            left = _wrap(node.left, _precedence(node.left) <= _PREC_POW)
            right = _wrap(node.right, _precedence(node.right) < _PREC_NEG)
            return '%s^%s' % (left, right)
        left = _wrap(node.left, _precedence(node.left) < prec)
        right = _wrap(node.right, _precedence(node.right) <= prec)
        return '%s %s %s' % (left, node.op, right)
    raise TypeError("not an expression node: %r" % (node,))

#############################################################################
def _check(node, value, message):
    if not numpy.all(numpy.isfinite(value)):
        raise ExprDomainError(message, node.offset)
    return value

def _evaluate(node, t):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Named):
        return _constants[node.name]
    if isinstance(node, Unary):
        x = _evaluate(node.arg, t)
        if node.op == 'neg':
            return -x
        if node.op == 'log' and numpy.any(x <= 0):
            raise ExprDomainError("log of non-positive value", node.offset)
        if node.op == 'sqrt' and numpy.any(x < 0):
            raise ExprDomainError("sqrt of negative value", node.offset)
        return _check(node, _functions[node.op][0](x), "non-finite value of %s()" % node.op)
    if isinstance(node, Binary):
        x = _evaluate(node.left, t)
        y = _evaluate(node.right, t)
        if node.op == '+':
            return x + y
        if node.op == '-':
            return x - y
        if node.op == '*':
            return _check(node, x * y, "non-finite product")
        if node.op == '/':
            if numpy.any(numpy.asarray(y) == 0):
                raise ExprDomainError("division by zero", node.offset)
            return _check(node, numpy.true_divide(x, y), "non-finite quotient")
        if node.op == '^':
            return _check(node, numpy.power(numpy.asarray(x, dtype = float), y), "power undefined")
    raise TypeError("not an expression node: %r" % (node,))

def _as_result(value, t):
    if numpy.ndim(t):
        return numpy.broadcast_to(numpy.asarray(value, dtype = float), numpy.shape(t)).copy()
    return float(value)

def evaluate(node, t):
    """Evaluate an AST at time `t`.

    :Parameters:
        node
            AST root
        t : float | numpy.ndarray
            time(s); arrays are evaluated elementwise
    :Returns:
        float, or an array shaped like `t`
    :Raises:
        ExprDomainError
            log of non-positive value, sqrt of negative value, division by
            zero or any other non-finite intermediate result
    """
    if numpy.ndim(t):
        t = numpy.asarray(t, dtype = float)
    else:
        t = float(t)
    with numpy.errstate(all = 'ignore'):
        value = _evaluate(node, t)
        value = _check(node, value, "non-finite value")
    return _as_result(value, t)

#############################################################################
def _where(cond, value):
    """``value`` where ``cond`` holds and 0 elsewhere, without touching NaNs
    of unselected entries"""
    out = numpy.where(cond, value, 0.0)
    if numpy.ndim(out) == 0:
        return float(out)
    return out

@dataclasses.dataclass(frozen = True)
class DualValue(object):
    """Forward-mode dual number ``value + derivative * eps`` with ``eps^2 = 0``.

    Both parts may be floats or numpy arrays of equal shape.
    """
    value : typing.Any
    derivative : typing.Any = 0.0

    @staticmethod
    def lift(x):
        if isinstance(x, DualValue):
            return x
        return DualValue(x, 0.0)

    def __add__(self, other):
        o = DualValue.lift(other)
        return DualValue(self.value + o.value, self.derivative + o.derivative)
    __radd__ = __add__

    def __sub__(self, other):
        o = DualValue.lift(other)
        return DualValue(self.value - o.value, self.derivative - o.derivative)

    def __rsub__(self, other):
        return DualValue.lift(other) - self

    def __neg__(self):
        return DualValue(-self.value, -self.derivative)

    def __mul__(self, other):
        o = DualValue.lift(other)
        return DualValue(self.value * o.value, self.value * o.derivative + self.derivative * o.value)
    __rmul__ = __mul__

    def __truediv__(self, other):
        o = DualValue.lift(other)
        q = numpy.true_divide(self.value, o.value)
        return DualValue(q, numpy.true_divide(self.derivative - q * o.derivative, o.value))

    def __rtruediv__(self, other):
        return DualValue.lift(other) / self

    def __pow__(self, other):
        o = DualValue.lift(other)
        base = numpy.asarray(self.value, dtype = float)
        value = numpy.power(base, o.value)
        d = _where(numpy.asarray(self.derivative) != 0,
                   o.value * numpy.power(base, numpy.asarray(o.value) - 1.0) * self.derivative)
        d = d + _where(numpy.asarray(o.derivative) != 0,
                       value * numpy.log(base) * o.derivative)
        if numpy.ndim(value) == 0:
            value = float(value)
        return DualValue(value, d)

    def __rpow__(self, other):
        return DualValue.lift(other) ** self

    def apply(self, func, dfunc):
        """Chain rule: ``func(self)`` with derivative ``dfunc(value)*derivative``"""
        return DualValue(func(self.value),
                         _where(numpy.asarray(self.derivative) != 0, dfunc(self.value) * self.derivative))

def _check_dual(node, d, message):
    _check(node, d.value, message)
    _check(node, d.derivative, message + " (derivative)")
    return d

def _evaluate_dual(node, t):
    if isinstance(node, Const):
        return DualValue(node.value, 0.0)
    if isinstance(node, Var):
        return t
    if isinstance(node, Named):
        return DualValue(_constants[node.name], 0.0)
    if isinstance(node, Unary):
        x = _evaluate_dual(node.arg, t)
        if node.op == 'neg':
            return -x
        if node.op == 'log' and numpy.any(numpy.asarray(x.value) <= 0):
            raise ExprDomainError("log of non-positive value", node.offset)
        if node.op == 'sqrt' and numpy.any(numpy.asarray(x.value) < 0):
            raise ExprDomainError("sqrt of negative value", node.offset)
        func, dfunc = _functions[node.op]
        return _check_dual(node, x.apply(func, dfunc), "non-finite value of %s()" % node.op)
    if isinstance(node, Binary):
        x = _evaluate_dual(node.left, t)
        y = _evaluate_dual(node.right, t)
        if node.op == '+':
            return x + y
        if node.op == '-':
            return x - y
        if node.op == '*':
            return _check_dual(node, x * y, "non-finite product")
        if node.op == '/':
            if numpy.any(numpy.asarray(y.value) == 0):
                raise ExprDomainError("division by zero", node.offset)
            return _check_dual(node, x / y, "non-finite quotient")
        if node.op == '^':
            return _check_dual(node, x ** y, "power undefined")
    raise TypeError("not an expression node: %r" % (node,))

def evaluate_dual(node, t):
    """Evaluate an AST and its exact time derivative at `t`.

    :Returns:
        `DualValue` ``(value, d/dt value)``
    :Raises:
        ExprDomainError
            as `evaluate`, and where the derivative is singular
    """
    if numpy.ndim(t):
        t = numpy.asarray(t, dtype = float)
        seed = DualValue(t, numpy.ones_like(t))
    else:
        t = float(t)
        seed = DualValue(t, 1.0)
    with numpy.errstate(all = 'ignore'):
        d = _check_dual(node, _evaluate_dual(node, seed), "non-finite value")
    return DualValue(_as_result(d.value, t), _as_result(d.derivative, t))

#############################################################################
def _walk(node):
    yield node
    if isinstance(node, Unary):
        for n in _walk(node.arg):
            yield n
    elif isinstance(node, Binary):
        for n in _walk(node.left):
            yield n
        for n in _walk(node.right):
            yield n

class Expression(object):
    """Coefficient defined by an expression of ``t``.

    Instances are callable; ``expr(t)`` evaluates the expression. Instances
    are immutable and compare by AST.
    """
    __slots__ = ('_ast', '_source')

    def __init__(self, ast, source = None):
        self._ast = ast
        self._source = source

    @classmethod
    def parse(cls, source):
        return cls(parse(source), source)

    @classmethod
    def constant(cls, value):
        value = float(value)
        if value < 0:
            return cls(Unary('neg', Const(-value)))
        return cls(Const(value))

    @property
    def ast(self):
        return self._ast

    @property
    def source(self):
        if self._source is None:
            return to_source(self._ast)
        return self._source

    def __call__(self, t):
        return evaluate(self._ast, t)

    def dual(self, t):
        return evaluate_dual(self._ast, t)

    def derivative(self, t):
        return self.dual(t).derivative

    def is_constant(self):
        return not any(isinstance(n, Var) for n in _walk(self._ast))

    def __eq__(self, other):
        return isinstance(other, Expression) and self._ast == other._ast

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._ast)

    def __str__(self):
        return self.source

    def __repr__(self):
        return "Expression(%r)" % self.source

def as_expression(x):
    """Coerce a number, text or AST into an `Expression`"""
    if isinstance(x, Expression):
        return x
    if isinstance(x, str):
        return Expression.parse(x)
    if isinstance(x, (Const, Var, Named, Unary, Binary)):
        return Expression(x)
    return Expression.constant(x)

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
