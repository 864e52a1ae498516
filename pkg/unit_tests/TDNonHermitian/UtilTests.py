""" TDNonHermitian.UtilTests

Unit tests for TDNonHermitian.Util
"""

__docformat__ = "restructuredText"

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

import math
import sys
import unittest

import numpy

import TDNonHermitian.Util as Util

# mock is not a part of the python 2.x stdlib and has to be installed
# separately. Tests using mock are skipped when it is missing.
_mock_missing = True
try:
    # Try unittest.mock first (python 3.x) ...
    import unittest.mock as mock
    _mock_missing = False
except ImportError:
    try:
        # ... then try mock (python 2.x)
        import mock
        _mock_missing = False
    except ImportError:
        # mock not installed
        pass

_test_triples = [
    ( 'foo', "The foo entry", 1.0 ),
    ( 'bar', "The bar entry", '2' ),
    ( 'baz', "The baz entry", None ),
]

#############################################################################
class Test_map_triples(unittest.TestCase):
    def test_map_triples_1(self):
        """map_triples(callback, triples) should map all triples"""
        result = Util.map_triples(lambda n, d, v : n.upper(), _test_triples)
        self.assertListEqual(result, ['FOO', 'BAR', 'BAZ'])

    def test_map_triples_2(self):
        """map_triples(callback, triples, ['bar', 'qux']) should only map 'bar'"""
        result = Util.map_triples(lambda n, d, v : d, _test_triples, ['bar', 'qux'])
        self.assertListEqual(result, ["The bar entry"])

    def test_names_from_triples(self):
        """names_from_triples(triples, lambda s : s != 'foo') should skip 'foo'"""
        self.assertListEqual(Util.names_from_triples(_test_triples, lambda s : s != 'foo'), ['bar', 'baz'])

class Test_declarations_from_triples(unittest.TestCase):
    def test_defaults(self):
        """declarations_from_triples(triples) should keep declared defaults"""
        decls = Util.declarations_from_triples(_test_triples)
        self.assertEqual([d.value for d in decls], [1.0, '2', None])
        self.assertEqual(decls[0], Util.Declaration('foo', "The foo entry", 1.0, 1.0))

    def test_overrides_and_convert(self):
        """user defaults should override and convert should apply"""
        decls = Util.declarations_from_triples(_test_triples, defaults = {'foo' : '5'},
                                               name_filter = ['foo', 'bar'], convert = float)
        self.assertEqual([(d.name, d.default, d.value) for d in decls], [('foo', 1.0, 5.0), ('bar', '2', 2.0)])

class Test_numeric_helpers(unittest.TestCase):
    def test_max_abs(self):
        """max_abs should return the max-modulus entry"""
        self.assertEqual(Util.max_abs([[1.0, -3.0], [2j, 0.5]]), 3.0)
        self.assertEqual(Util.max_abs([]), 0.0)

    def test_wrap_phase(self):
        """wrap_phase should map onto (-pi, pi]"""
        self.assertAlmostEqual(Util.wrap_phase(3.0 * math.pi), math.pi)
        self.assertAlmostEqual(Util.wrap_phase(-math.pi), math.pi)
        self.assertAlmostEqual(Util.wrap_phase(0.5), 0.5)
        numpy.testing.assert_allclose(Util.wrap_phase([2 * math.pi, -0.25]), [0.0, -0.25], atol = 1e-15)

    def test_phase_distance(self):
        """phase_distance should be taken modulo 2 pi"""
        self.assertAlmostEqual(Util.phase_distance(math.pi, -math.pi), 0.0)
        self.assertAlmostEqual(Util.phase_distance(0.1, 2 * math.pi - 0.1), 0.2)

    def test_is_finite_number(self):
        """is_finite_number should reject NaN, inf and non-numbers"""
        self.assertTrue(Util.is_finite_number('1.5'))
        self.assertFalse(Util.is_finite_number(float('nan')))
        self.assertFalse(Util.is_finite_number(float('inf')))
        self.assertFalse(Util.is_finite_number('abc'))
        self.assertFalse(Util.is_finite_number(None))

class Test_memoized(unittest.TestCase):
    def test_memoized(self):
        """memoized should call the function once per time"""
        calls = []
        def fun(t):
            calls.append(t)
            return 2 * t
        cached = Util.memoized(fun)
        self.assertEqual(cached(1), 2.0)
        self.assertEqual(cached(1.0), 2.0)
        self.assertEqual(cached(0.5), 1.0)
        self.assertEqual(calls, [1.0, 0.5])
        self.assertEqual(cached.cache_info().currsize, 2)

    def test_bounded(self):
        """memoized should keep only the most recent results"""
        calls = []
        def fun(t):
            calls.append(t)
            return t
        cached = Util.memoized(fun, maxsize = 2)
        for t in (0.0, 1.0, 2.0, 0.0):
            cached(t)
        self.assertEqual(calls, [0.0, 1.0, 2.0, 0.0])
        self.assertEqual(cached.cache_info().currsize, 2)

class Test_rk4_integrate(unittest.TestCase):
    def test_exponential(self):
        """rk4_integrate should solve y' = -y to fourth order"""
        times = numpy.linspace(0.0, 1.0, 101)
        ys = Util.rk4_integrate(lambda t, y : -y, numpy.array([1.0]), times)
        self.assertEqual(ys.shape, (101, 1))
        self.assertLess(abs(ys[-1, 0] - math.exp(-1.0)), 1e-9)

    def test_time_dependent_matrix(self):
        """rk4_integrate should handle matrix states and time-dependent right hand sides"""
        times = numpy.linspace(0.0, 2.0, 801)
        ys = Util.rk4_integrate(lambda t, y : 1j * t * y, numpy.eye(2), times)
        numpy.testing.assert_allclose(ys[-1], numpy.exp(2j) * numpy.eye(2), atol = 1e-8)

    def test_post_step(self):
        """post_step should see every new grid index and may replace the state"""
        seen = []
        def post(k, y):
            seen.append(k)
            return y * 0.0 + 1.0
        times = numpy.linspace(0.0, 1.0, 5)
        ys = Util.rk4_integrate(lambda t, y : y, numpy.array([1.0]), times, post)
        self.assertEqual(seen, [1, 2, 3, 4])
        numpy.testing.assert_allclose(ys[:, 0], numpy.ones(5))

#############################################################################
if __name__ == "__main__":
    ldr = unittest.TestLoader()
    suite = unittest.TestSuite()
    # Load tests to test suite
    tclasses = [ Test_map_triples
               , Test_declarations_from_triples
               , Test_numeric_helpers
               , Test_memoized
               , Test_rk4_integrate
               ]

    for tclass in tclasses:
        suite.addTests(ldr.loadTestsFromTestCase(tclass))

    if not unittest.TextTestRunner(verbosity = 2).run(suite).wasSuccessful():
        sys.exit(1)

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
