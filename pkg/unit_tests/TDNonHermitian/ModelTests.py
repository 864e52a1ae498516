""" TDNonHermitian.ModelTests

Unit tests for TDNonHermitian.Model
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

import dataclasses
import math
import sys
import unittest

import numpy

import TDNonHermitian.Model as Model
import TDNonHermitian.Linalg as Linalg
import TDNonHermitian.Tolerances as Tolerances
from TDNonHermitian.Model import ParameterPath, ScenarioConstants, Regime
from TDNonHermitian.Errors import ConstraintViolationError, ScenarioError

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

_grid = numpy.linspace(0.0, 1.0, 11)

def _static(**kw):
    components = dict(alpha_r = 1.0)
    components.update(kw)
    return ParameterPath.from_components(**components)

def _scenario41(c1 = 2.0, c2 = 1.0, convention = Model.CONVENTION_MATRIX, **free):
    f = { 'alpha_r' : "1 + 0.5*cos(t)", 'mu_r' : "0.3*sin(2*t)", 'tau_i' : "0.5 + t" }
    f.update(free)
    return Model.build_scenario_41(f, ScenarioConstants(c1, c2, 0.4), _grid, convention)

def _scenario42(c1 = 0.5, **free):
    f = { 'alpha_r' : "1 + 0.5*t", 'mu_i' : "1 + 0.25*sin(t)", 'tau_i' : "0.3" }
    f.update(free)
    return Model.build_scenario_42(f, ScenarioConstants(c1, omega = 0.2), _grid)

#############################################################################
class Test_ParameterPath(unittest.TestCase):
    def test_from_components_defaults(self):
        """ParameterPath.from_components() should default components to zero"""
        path = ParameterPath.from_components(omega = 1, mu_r = "t")
        self.assertEqual(path.omega, 1.0)
        self.assertEqual(path.values(2.0), { 'alpha_r' : 0.0, 'alpha_i' : 0.0, 'mu_r' : 2.0,
                                             'mu_i' : 0.0, 'tau_r' : 0.0, 'tau_i' : 0.0 })

    def test_from_components_callable(self):
        """ParameterPath.from_components() should keep callable components"""
        path = ParameterPath.from_components(tau_i = lambda t : 3.0 * t)
        self.assertEqual(path.component('tau_i', 2.0), 6.0)

    def test_from_components_unknown(self):
        """ParameterPath.from_components(beta = 1) should raise TypeError"""
        self.assertRaises(TypeError, ParameterPath.from_components, beta = 1)

    def test_coefficients(self):
        path = ParameterPath.from_components(alpha_r = 1, alpha_i = 2, mu_r = 3, mu_i = 4, tau_r = 5, tau_i = 6)
        self.assertEqual(path.coefficients(0.0), (1 + 2j, 3 + 4j, 5 + 6j))

    def test_frozen(self):
        path = ParameterPath.from_components()
        with self.assertRaises(dataclasses.FrozenInstanceError):
            path.omega = 2.0

    def test_replace(self):
        path = ParameterPath.from_components(omega = 1).replace(omega = 3.0)
        self.assertEqual(path.omega, 3.0)

    def test_closed(self):
        """a cosine loop should be closed over one period, a ramp should not"""
        loop = ParameterPath.from_components(alpha_r = "cos(2*pi*t)", mu_r = "sin(2*pi*t)")
        ramp = ParameterPath.from_components(alpha_r = "t")
        self.assertTrue(loop.is_closed(0.0, 1.0))
        self.assertLess(loop.closure_residual(0.0, 1.0), 1e-12)
        self.assertFalse(ramp.is_closed(0.0, 1.0))
        self.assertAlmostEqual(ramp.closure_residual(0.0, 1.0), 1.0)

#############################################################################
class Test_hamiltonian(unittest.TestCase):
    def test_matrix(self):
        """hamiltonian() should be -1/2 [omega I + alpha sx + mu sy + tau sz]"""
        path = ParameterPath.from_components(omega = 0.5, alpha_r = 1, alpha_i = 2, mu_r = 3,
                                             mu_i = 4, tau_r = 5, tau_i = 6)
        alpha, mu, tau = 1 + 2j, 3 + 4j, 5 + 6j
        expected = -0.5 * numpy.array([[0.5 + tau, alpha - 1j * mu],
                                       [alpha + 1j * mu, 0.5 - tau]])
        numpy.testing.assert_allclose(Model.hamiltonian(path, 0.0), expected, atol = 1e-15)

    def test_hermitian_for_real_coefficients(self):
        path = ParameterPath.from_components(alpha_r = "cos(t)", mu_r = "sin(t)", tau_r = "t")
        self.assertLess(Linalg.hermiticity_residual(Model.hamiltonian(path, 0.7)), 1e-15)

#############################################################################
class Test_static_model(unittest.TestCase):
    def test_static_pt_residual(self):
        self.assertEqual(Model.static_pt_residual(_static(alpha_i = -0.5, mu_r = 1, mu_i = 0.5), 0.0), 0.0)
        self.assertEqual(Model.static_pt_residual(_static(alpha_i = 2.0), 0.0), 2.0)
        self.assertEqual(Model.static_pt_residual(_static(tau_r = -3.0), 0.0), 3.0)

    def test_check_static_pt_raises(self):
        """check_static_pt() should report the offending residual"""
        with self.assertRaises(ConstraintViolationError) as cm:
            Model.check_static_pt(_static(alpha_i = 1.0), 0.0)
        self.assertEqual(cm.exception.residual, 1.0)

    def test_regimes(self):
        """discriminant() should classify symmetric, exceptional and broken regimes"""
        delta, regime = Model.discriminant(_static(mu_i = 0.5), 0.0)
        self.assertAlmostEqual(delta, 0.75)
        self.assertIs(regime, Regime.SYMMETRIC)
        delta, regime = Model.discriminant(_static(tau_i = 1.0), 0.0)
        self.assertEqual(delta, 0.0)
        self.assertIs(regime, Regime.EXCEPTIONAL)
        delta, regime = Model.discriminant(_static(tau_i = 2.0), 0.0)
        self.assertAlmostEqual(delta, -3.0)
        self.assertIs(regime, Regime.BROKEN)

    def test_regime_values(self):
        self.assertEqual([r.value for r in Regime], ['symmetric', 'exceptional', 'broken'])

    def test_exceptional_band(self):
        """discriminant() should honour the 'exceptional' tolerance"""
        path = _static(tau_i = 1.0 + 1e-9)
        self.assertIs(Model.discriminant(path, 0.0)[1], Regime.BROKEN)
        self.assertIs(Model.discriminant(path, 0.0, Tolerances.Declarations(defaults = { 'exceptional' : 1e-6 }))[1], Regime.EXCEPTIONAL)

    def test_alpha_r_zero(self):
        self.assertRaises(ScenarioError, Model.discriminant, _static(alpha_r = 0.0), 0.0)

    def test_discriminant_constraint_violation(self):
        self.assertRaises(ConstraintViolationError, Model.discriminant, _static(tau_r = 1.0), 0.0)

    def test_static_energies_match_eigenvalues(self):
        """static_energies() should agree with the eigensolver on random PT-symmetric paths"""
        rng = numpy.random.default_rng(7)
        for i in range(200):
            ar, mr, mi, ti, w = rng.uniform(-2.0, 2.0, 5)
            ar = ar if abs(ar) > 0.1 else 0.5
            path = ParameterPath.from_components(omega = w, alpha_r = ar, alpha_i = -mr * mi / ar,
                                                 mu_r = mr, mu_i = mi, tau_i = ti)
            delta, regime, energies, residual = Model.static_spectrum(path, 0.0)
            if abs(delta) < 1e-3:
                continue
            eigs = Linalg.eigenvalues(Model.hamiltonian(path, 0.0))
            self.assertLess(residual, 1e-9 * max(1.0, abs(energies[0])))
            self.assertAlmostEqual(energies[0] + energies[1], eigs[0] + eigs[1], places = 10)

    def test_static_energies_real_in_symmetric_regime(self):
        e_plus, e_minus = Model.static_energies(_static(omega = 1.0, mu_i = 0.5), 0.0)
        self.assertAlmostEqual(e_plus, 0.5 * (-1.0 + math.sqrt(0.75)))
        self.assertAlmostEqual(e_minus, 0.5 * (-1.0 - math.sqrt(0.75)))
        self.assertEqual(e_plus.imag, 0.0)

    def test_static_energies_complex_in_broken_regime(self):
        e_plus, e_minus = Model.static_energies(_static(tau_i = 2.0), 0.0)
        self.assertAlmostEqual(e_plus, 0.5j * math.sqrt(3.0))
        self.assertAlmostEqual(e_plus, numpy.conj(e_minus))

    def test_static_spectrum_exceptional(self):
        """static_spectrum() should skip the eigensolver cross-check at an exceptional point"""
        delta, regime, energies, residual = Model.static_spectrum(_static(tau_i = 1.0), 0.0)
        self.assertIs(regime, Regime.EXCEPTIONAL)
        self.assertEqual(residual, 0.0)
        self.assertEqual(energies[0], energies[1])

    def test_static_crosscheck_residual(self):
        """closed-form static energies should match the eigensolver on a constrained path"""
        path = _static(mu_r = 0.3, mu_i = 0.4, alpha_i = -0.12)
        self.assertLess(Model.check_static_pt(path, 0.0), 1e-12)
        self.assertLess(Model.static_crosscheck_residual(path, 0.0), 1e-12)

    def test_parity(self):
        """static_parity() should intertwine H with H^+ and square to identity"""
        rng = numpy.random.default_rng(11)
        for i in range(50):
            ar, mr, mi, ti = rng.uniform(0.2, 2.0, 4)
            path = ParameterPath.from_components(alpha_r = ar, alpha_i = -mr * mi / ar,
                                                 mu_r = mr, mu_i = mi, tau_i = ti)
            intertwining, involution = Model.parity_residuals(path, 0.0)
            self.assertLess(intertwining, 1e-12)
            self.assertLess(involution, 1e-12)

    def test_parity_undefined(self):
        self.assertRaises(ScenarioError, Model.static_parity, _static(alpha_r = 0.0), 0.0)

#############################################################################
class Test_ScenarioConstants(unittest.TestCase):
    def test_defaults(self):
        consts = ScenarioConstants(2.0)
        self.assertEqual((consts.c1, consts.c2, consts.omega), (2.0, 0.0, 0.0))

    def test_frozen(self):
        with self.assertRaises(dataclasses.FrozenInstanceError):
            ScenarioConstants(1.0).c1 = 2.0

#############################################################################
class Test_build_scenario_41(unittest.TestCase):
    def test_kind(self):
        solution = _scenario41()
        self.assertEqual(solution.kind, Model.KIND_DYSON41)
        self.assertEqual(solution.convention, Model.CONVENTION_MATRIX)
        self.assertTrue(solution.path.static_pt)

    def test_metric_determinant(self):
        """det rho should equal (c1^2 - c2^2)^2 for random constants"""
        rng = numpy.random.default_rng(3)
        for i in range(10):
            c1, c2 = rng.uniform(0.5, 3.0, 2)
            if abs(c1 - c2) < 0.1:
                c2 += 0.5
            solution = _scenario41(c1, c2)
            for t in (0.0, 0.5, 1.0):
                det = numpy.linalg.det(solution.rho(t))
                self.assertAlmostEqual(det.real / (c1 * c1 - c2 * c2) ** 2, 1.0, places = 10)
                self.assertAlmostEqual(det.imag, 0.0, places = 10)

    def test_dyson_equation(self):
        """the Dyson equation should hold for both map conventions"""
        for convention in Model.CONVENTIONS:
            solution = _scenario41(convention = convention)
            for t in _grid:
                self.assertLess(solution.dyson_residual(t), 1e-9)
                self.assertLess(solution.dyson_residual(t, finite_difference = True), 1e-6)
                self.assertLess(solution.h_hermiticity_residual(t), 1e-12)

    def test_static_pt_constraints(self):
        """the derived alpha_i, mu_i should satisfy the static PT constraints"""
        solution = _scenario41()
        for t in _grid:
            self.assertLess(Model.static_pt_residual(solution.path, t), 1e-12)
            self.assertEqual(solution.path.component('tau_r', t), 0.0)

    def test_delta_integral(self):
        """delta(t) should integrate tau_i = 0.5 + t"""
        solution = _scenario41()
        for t in (0.0, 0.3, 1.0):
            self.assertAlmostEqual(solution.delta(t), 0.5 * t + 0.5 * t * t, places = 9)
        self.assertAlmostEqual(_scenario41(tau_i = "2").delta(0.75), 1.5, places = 12)

    def test_metric_closed_form(self):
        for convention in Model.CONVENTIONS:
            solution = _scenario41(convention = convention)
            for t in (0.0, 0.5, 1.0):
                numpy.testing.assert_allclose(solution.rho(t), solution.metric_closed_form(t),
                                              rtol = 1e-12, atol = 1e-12)

    def test_conventions_mirror_h(self):
        """the two map conventions should give h with opposite off-diagonal elements"""
        h_matrix = _scenario41().h(0.4)
        h_sinh = _scenario41(convention = Model.CONVENTION_SINH_COSH).h(0.4)
        numpy.testing.assert_allclose(numpy.diag(h_matrix), numpy.diag(h_sinh))
        self.assertAlmostEqual(h_matrix[0, 1], -h_sinh[0, 1], places = 12)

    def test_adjudicate_reference_h(self):
        """the reference h should solve the Dyson equation for the sinh-cosh map only"""
        verdict = Model.adjudicate_reference_h(_scenario41(), 0.5)
        self.assertLess(verdict[Model.CONVENTION_SINH_COSH], 1e-9)
        self.assertGreater(verdict[Model.CONVENTION_MATRIX], 1e-3)

    def test_energy_discrepancy_logged(self):
        """a warning should be logged for the closed-form energy prefactor"""
        with self.assertLogs('TDNonHermitian.Model', level = 'WARNING') as cm:
            solution = _scenario41()
        self.assertIn('closed-form instantaneous energies', cm.output[0])
        e = solution.instantaneous_energies(0.0)
        numpy.testing.assert_allclose(solution.closed_form_energies(0.0) + 0.2,
                                      math.sqrt(2.0) * (e + 0.2), atol = 1e-12)
        self.assertGreater(solution.energy_discrepancy(0.0), 1e-3)

    @unittest.skipIf(_mock_missing, "mock is not installed")
    def test_adjudication_logged(self):
        with mock.patch.object(Model.logger, 'info') as info:
            _scenario41()
        args = info.call_args[0]
        self.assertIn(Model.CONVENTION_SINH_COSH, args)

    def test_alpha_r_zero_allowed(self):
        """alpha_r = 0 should be admissible for the diagonal map"""
        solution = _scenario41(alpha_r = "0")
        self.assertLess(solution.dyson_residual(0.5), 1e-9)

    def test_singular_constants(self):
        self.assertRaises(ScenarioError, _scenario41, 1.0, 1.0)
        self.assertRaises(ScenarioError, _scenario41, 1.0, -1.0)

    def test_delta_overflow(self):
        """a diagonal map whose exponent overflows should raise ScenarioError"""
        free = { 'alpha_r' : "1", 'mu_r' : "0", 'tau_i' : "2000" }
        solution = Model.build_scenario_41(free, ScenarioConstants(2.0, 1.0))
        self.assertRaises(ScenarioError, solution.eta, 1.0)
        self.assertRaises(ScenarioError, solution.metric_closed_form, 1.0)
        self.assertRaises(ScenarioError, solution.path.component, 'mu_i', 1.0)
        self.assertRaises(ScenarioError, Model.build_scenario_41, free,
                          ScenarioConstants(2.0, 1.0), [0.0, 1.0])

    def test_unknown_convention(self):
        self.assertRaises(ScenarioError, _scenario41, convention = 'other')

    def test_free_functions(self):
        consts = ScenarioConstants(2.0, 1.0)
        with self.assertRaises(ScenarioError):
            Model.build_scenario_41({ 'alpha_r' : 1, 'mu_r' : 0 }, consts)
        with self.assertRaises(ScenarioError):
            Model.build_scenario_41({ 'alpha_r' : 1, 'mu_r' : 0, 'tau_i' : 0, 'mu_i' : 1 }, consts)

#############################################################################
class Test_build_scenario_42(unittest.TestCase):
    def test_kind(self):
        solution = _scenario42()
        self.assertEqual(solution.kind, Model.KIND_DYSON42)
        self.assertFalse(solution.path.static_pt)

    def test_constraint_a(self):
        """A should equal tau_i for constant alpha_r = mu_i"""
        solution = Model.build_scenario_42({ 'alpha_r' : 1, 'mu_i' : 1, 'tau_i' : 0.7 },
                                           ScenarioConstants(1.0))
        self.assertAlmostEqual(solution.A(0.3), 0.7)
        self.assertAlmostEqual(solution.m(0.3), 1.0)

    def test_constraint_a_derivatives(self):
        solution = _scenario42()
        t = 0.6
        ar, ar_dot = 1.0 + 0.5 * t, 0.5
        mi, mi_dot = 1.0 + 0.25 * math.sin(t), 0.25 * math.cos(t)
        expected = 0.3 * ar * ar / (mi * mi) - ar_dot / mi + ar * mi_dot / (mi * mi)
        self.assertAlmostEqual(solution.A(t), expected, places = 12)
        self.assertEqual(solution.derived(t), solution.A(t))

    def test_derived_components(self):
        """mu_r, alpha_i and tau_r should follow from A"""
        solution = _scenario42()
        for t in _grid:
            v = solution.path.values(t)
            a = solution.A(t)
            self.assertAlmostEqual(v['mu_r'], -v['tau_i'] - 2.0 * a, places = 12)
            self.assertAlmostEqual(v['alpha_i'], 2.0 * v['mu_i'] / v['alpha_r'] * a, places = 12)
            self.assertEqual(v['tau_r'], v['mu_i'])

    def test_dyson_equation(self):
        solution = _scenario42()
        for t in _grid:
            self.assertLess(solution.dyson_residual(t), 1e-9)
            self.assertLess(solution.dyson_residual(t, finite_difference = True), 1e-6)
            self.assertLess(solution.h_hermiticity_residual(t), 1e-12)

    def test_metric(self):
        """rho should match its closed form, eigenvalues and determinant 16 c1^4"""
        for c1 in (0.5, 1.0, 2.0):
            solution = _scenario42(c1)
            for t in (0.0, 0.5, 1.0):
                rho = solution.rho(t)
                numpy.testing.assert_allclose(rho, solution.metric_closed_form(t), rtol = 1e-12, atol = 1e-12)
                numpy.testing.assert_allclose(numpy.linalg.eigvalsh(rho)[::-1], solution.metric_eigenvalues(t),
                                              rtol = 1e-10)
                self.assertAlmostEqual(numpy.linalg.det(rho).real / (16.0 * c1 ** 4), 1.0, places = 10)

    def test_closed_form_energies(self):
        solution = _scenario42()
        for t in _grid:
            numpy.testing.assert_allclose(solution.closed_form_energies(t),
                                          solution.instantaneous_energies(t), atol = 1e-12)

    def test_mu_i_zero(self):
        """a vanishing mu_i should raise ScenarioError"""
        self.assertRaises(ScenarioError, _scenario42, mu_i = "0")
        self.assertRaises(ScenarioError, _scenario42, mu_i = "t - 0.5")

    def test_alpha_r_zero(self):
        self.assertRaises(ScenarioError, _scenario42, alpha_r = "t")

    def test_c1_zero(self):
        self.assertRaises(ScenarioError, _scenario42, 0.0)

#############################################################################
class Test_build_scenario(unittest.TestCase):
    def test_dispatch(self):
        f41 = { 'alpha_r' : 1, 'mu_r' : 0, 'tau_i' : 2 }
        f42 = { 'alpha_r' : 1, 'mu_i' : 1, 'tau_i' : 1 }
        self.assertIsInstance(Model.build_scenario('dyson41', f41, ScenarioConstants(2.0, 1.0)),
                              Model.Scenario41Solution)
        self.assertIsInstance(Model.build_scenario('dyson42', f42, ScenarioConstants(1.0)),
                              Model.Scenario42Solution)

    def test_unknown_kind(self):
        self.assertRaises(ScenarioError, Model.build_scenario, 'static', {}, ScenarioConstants(1.0))

    def test_validate_reports_residuals(self):
        result = _scenario42().validate(_grid)
        self.assertEqual(sorted(result), ['dyson_residual', 'h_hermiticity'])
        self.assertLess(result['dyson_residual'], 1e-9)

#############################################################################
if __name__ == "__main__":
    ldr = unittest.TestLoader()
    suite = unittest.TestSuite()
    # Load tests to test suite
    tclasses = [ Test_ParameterPath
               , Test_hamiltonian
               , Test_static_model
               , Test_ScenarioConstants
               , Test_build_scenario_41
               , Test_build_scenario_42
               , Test_build_scenario
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
