"""`TDNonHermitian.Util`

Utility functions used by TDNonHermitian
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
import functools
import math

import numpy

Declaration = collections.namedtuple('Declaration', ['name', 'help', 'default', 'value'])
"""A declared entry of a triple table together with its effective value"""

#############################################################################
def is_sequence(obj):
    return isinstance(obj, (list, tuple, set, frozenset))

#############################################################################
def map_triples(callback, triples, name_filter = lambda x : True):
    """Map declaration triples (name, desc, default) via `callback`.

    :Parameters:
        callback : callable
            function of type ``callback(name, desc, default)``, where

                - ``name:`` is the name of entry being processed,
                - ``desc:`` is short description,
                - ``default:`` is the default value for the entry.
        triples : list
            a list of 3-element tuples, each entry of the list should be a
            tuple of the form ``(name, desc, default)``
        name_filter : callable | sequence
            callable object (e.g. lambda) of type ``name_filter(name) ->
            boolean`` used to filter-out unwanted entries; only these
            entries are processed, for which name_filter returns ``True``;
            a sequence of names is accepted as well

    :Returns:
        list of results of mapping through `callback`
    """
    if is_sequence(name_filter):
        seq = name_filter
        name_filter = lambda x : x in seq
    return [callback(*t) for t in triples if name_filter(t[0])]

#############################################################################
def names_from_triples(triples, name_filter = lambda x : True):
    """Return list of names extracted from declaration triples.

    :Parameters:
        triples : list
            a list of 3-element tuples ``(name, desc, default)``
        name_filter : callable | sequence
            see `map_triples`
    :Returns:
        the list of declared names, in declaration order
    """
    return map_triples(lambda *x : x[0], triples, name_filter)

#############################################################################
def declarations_from_triples(triples, **kw):
    """Convert triples to a list of `Declaration` records.

    :Parameters:
        triples : list
            a list of 3-element tuples ``(name, desc, default)``

    :Keywords:
        defaults : dict
            user-specified values overriding the declared defaults,
        name_filter : callable | sequence
            see `map_triples`,
        convert : callable
            applied to every effective value (e.g. ``float``).

    :Returns:
        list of `Declaration`
    """
    defaults = kw.get('defaults', dict())
    name_filter = kw.get('name_filter', lambda s : True)
    convert = kw.get('convert', lambda x : x)
    def _callback(name, desc, default):
        try:
            value = defaults[name]
        except KeyError:
            value = default
        return Declaration(name, desc, default, convert(value))
    return map_triples(_callback, triples, name_filter)

#############################################################################
def max_abs(a):
    """Max-modulus entry of `a`; this is the ``||.||_inf`` of all residuals"""
    a = numpy.asarray(a)
    if a.size == 0:
        return 0.0
    return float(numpy.max(numpy.abs(a)))

def wrap_phase(phi):
    """Map angle(s) `phi` onto ``(-pi, pi]``"""
    wrapped = numpy.pi - numpy.mod(numpy.pi - numpy.asarray(phi, dtype = float), 2.0 * numpy.pi)
    if numpy.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped

def phase_distance(a, b):
    """Distance between two angles modulo ``2*pi``"""
    return abs(wrap_phase(numpy.asarray(a) - numpy.asarray(b)))

def is_finite_number(x):
    try:
        return math.isfinite(float(x))
    except (TypeError, ValueError):
        return False

#############################################################################
def memoized(fun, maxsize = 16):
    """Cache the `maxsize` most recent results of a function of one float
    argument (time)"""
    cached = functools.lru_cache(maxsize = maxsize)(fun)
    @functools.wraps(fun)
    def wrapper(t):
        return cached(float(t))
    wrapper.cache_info = cached.cache_info
    return wrapper

def rk4_integrate(fn, y0, times, post_step = None):
    """Classical 4th order Runge-Kutta on a fixed grid.

    :Parameters:
        fn : callable
            right hand side ``fn(t, y) -> dy/dt``
        y0 : numpy.ndarray
            initial state at ``times[0]``
        times : numpy.ndarray
            grid points; step ``k`` goes from ``times[k]`` to ``times[k+1]``
        post_step : callable
            ``post_step(k, y) -> y`` applied after each step, ``k`` being the
            index of the new grid point; it may raise to abort
    :Returns:
        array of shape ``(len(times),) + y0.shape``
    """
    y = numpy.array(y0, dtype = complex)
    out = numpy.empty((len(times),) + y.shape, dtype = complex)
    out[0] = y
    for k in range(len(times) - 1):
        t = times[k]
        h = times[k + 1] - t
        tm = t + 0.5 * h
        k1 = h * fn(t, y)
        k2 = h * fn(tm, y + 0.5 * k1)
        k3 = h * fn(tm, y + 0.5 * k2)
        k4 = h * fn(times[k + 1], y + k3)
        y = y + (k1 + 2.0 * (k2 + k3) + k4) / 6.0
        if post_step is not None:
            y = post_step(k + 1, y)
        out[k + 1] = y
    return out

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
