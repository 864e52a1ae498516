""" TDNonHermitian.EvolutionTests

Unit tests for TDNonHermitian.Evolution
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
import scipy.integrate

import TDNonHermitian.Evolution as Evolution
import TDNonHermitian.Linalg as Linalg
import TDNonHermitian.Model as Model
import TDNonHermitian.Operators as Operators
import TDNonHermitian.Tolerances as Tolerances
from TDNonHermitian.Evolution import TimeGrid
from TDNonHermitian.Model import ScenarioConstants
from TDNonHermitian.Util import max_abs, phase_distance
from TDNonHermitian.Errors import (GaugeDiscontinuityError, LevelCrossingError, OpenPathError,
                                   ComplexEnergyError, IntegrationInstabilityError,
                                   UndefinedAngleError)

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

def _energy_fun(solution):
    return lambda t : Operators.energy_operator(solution.hamiltonian(t), solution.eta(t), solution.eta_dot(t))

def _trajectory(solution, grid):
    return Evolution.eigen_trajectory(_energy_fun(solution), solution.rho, grid)

def _loop(alpha_r, mu_r, c1, c2, steps = 4000):
    solution = Model.build_scenario_41({ 'alpha_r' : alpha_r, 'mu_r' : mu_r, 'tau_i' : "0" },
                                       ScenarioConstants(c1, c2))
    grid = TimeGrid(0.0, 1.0, steps)
    return solution, _trajectory(solution, grid), grid

def _scenario41():
    f = { 'alpha_r' : "1 + 0.5*cos(t)", 'mu_r' : "0.3*sin(2*t)", 'tau_i' : "0.5 + t" }
    return Model.build_scenario_41(f, ScenarioConstants(2.0, 1.0))

def _scenario42():
    f = { 'alpha_r' : "1 + 0.5*t", 'mu_i' : "1 + 0.25*sin(t)", 'tau_i' : "0.3" }
    return Model.build_scenario_42(f, ScenarioConstants(0.5))

def _constant(h):
    return lambda t : numpy.asarray(h, dtype = complex)

_identity = _constant(numpy.eye(2))

#############################################################################
class Test_TimeGrid(unittest.TestCase):
    def test_times(self):
        grid = TimeGrid(0.0, 2.0, 4)
        self.assertEqual(grid.dt, 0.5)
        self.assertEqual(len(grid), 5)
        numpy.testing.assert_allclose(grid.times, [0.0, 0.5, 1.0, 1.5, 2.0])

    def test_integral_steps(self):
        self.assertEqual(TimeGrid(0, 1, 10.0).steps, 10)

    def test_invalid(self):
        """TimeGrid() should reject empty intervals and too few steps"""
        self.assertRaises(ValueError, TimeGrid, 1.0, 1.0, 10)
        self.assertRaises(ValueError, TimeGrid, 1.0, 0.0, 10)
        self.assertRaises(ValueError, TimeGrid, 0.0, 1.0, 1)
        self.assertRaises(ValueError, TimeGrid, 0.0, 1.0, 2.5)
        self.assertRaises(ValueError, TimeGrid, 0.0, 1.0, True)
        self.assertRaises(ValueError, TimeGrid, 0.0, float('inf'), 10)
        self.assertRaises(ValueError, TimeGrid, float('nan'), 1.0, 10)

#############################################################################
class Test_tdse_integrate(unittest.TestCase):
    def test_rabi(self):
        """psi(t) should be cos(t) psi0 - i sin(t) sigma_x psi0 for H = sigma_x"""
        grid = TimeGrid(0.0, 2.0, 2000)
        trajectory = Evolution.tdse_integrate(_constant(Linalg.SIGMA_X), [1.0, 0.0], grid, _identity)
        numpy.testing.assert_allclose(trajectory.states[-1], [math.cos(2.0), -1j * math.sin(2.0)], atol = 1e-10)
        self.assertLess(trajectory.norm_drift(), 1e-10)

    def test_rho_norm_conserved(self):
        """<psi|rho|psi> should be conserved for a Dyson scenario"""
        for solution in (_scenario41(), _scenario42()):
            grid = TimeGrid(0.0, 1.0, 1000)
            trajectory = Evolution.tdse_integrate(solution.hamiltonian, [1.0, 0.5j], grid, solution.rho)
            self.assertEqual(trajectory.states.shape, (1001, 2))
            self.assertLess(trajectory.norm_drift(), 1e-8)

    def test_no_metric(self):
        trajectory = Evolution.tdse_integrate(_constant(Linalg.SIGMA_Z), [1.0, 0.0], TimeGrid(0.0, 1.0, 10))
        self.assertIsNone(trajectory.rho_norms)
        self.assertTrue(math.isnan(trajectory.norm_drift()))

    def test_unstable(self):
        """a far too coarse grid should raise IntegrationInstabilityError"""
        self.assertRaises(IntegrationInstabilityError, Evolution.tdse_integrate,
                          _constant(100.0 * Linalg.SIGMA_X), [1.0, 0.0], TimeGrid(0.0, 10.0, 2), _identity)

    def test_zero_state(self):
        self.assertRaises(ValueError, Evolution.tdse_integrate, _constant(Linalg.SIGMA_X),
                          [0.0, 0.0], TimeGrid(0.0, 1.0, 10))

#############################################################################
class Test_eigen_trajectory(unittest.TestCase):
    def test_energies(self):
        """energies should follow the closed form, largest first"""
        solution = _scenario42()
        grid = TimeGrid(0.0, 1.0, 200)
        trajectory = _trajectory(solution, grid)
        self.assertEqual(trajectory.levels, 2)
        for k, t in enumerate(grid.times):
            numpy.testing.assert_allclose(trajectory.energies[k], solution.closed_form_energies(t), atol = 1e-10)
        self.assertLess(trajectory.max_imag_energy(), 1e-10)
        self.assertGreater(trajectory.min_overlap, 0.99)

    def test_gauge_alignment(self):
        """consecutive overlaps <phi_n(t_k)|psi_n(t_k+1)> should be real positive"""
        trajectory = _trajectory(_scenario41(), TimeGrid(0.0, 1.0, 100))
        for k in range(1, len(trajectory.times)):
            overlaps = numpy.einsum('in,in->n', numpy.conj(trajectory.left[k - 1]), trajectory.right[k])
            self.assertLess(numpy.max(numpy.abs(numpy.angle(overlaps))), 1e-12)

    def test_rho_normalized(self):
        trajectory = _trajectory(_scenario42(), TimeGrid(0.0, 1.0, 10))
        for k in range(len(trajectory.times)):
            numpy.testing.assert_allclose(trajectory.left[k], trajectory.rhos[k] @ trajectory.right[k], atol = 1e-9)

    def test_eigensystem(self):
        trajectory = _trajectory(_scenario42(), TimeGrid(0.0, 1.0, 10))
        eig = trajectory.eigensystem(3)
        numpy.testing.assert_allclose(eig.values, trajectory.energies[3])

    def test_regauged(self):
        trajectory = _trajectory(_scenario42(), TimeGrid(0.0, 1.0, 10))
        phases = numpy.full((11, 2), 0.5)
        regauged = trajectory.regauged(phases)
        numpy.testing.assert_allclose(regauged.right, trajectory.right * numpy.exp(0.5j))

    def test_gauge_discontinuity(self):
        """a sudden rotation of the eigenbasis should raise GaugeDiscontinuityError"""
        rotated = math.cos(1.2) * Linalg.SIGMA_Z + math.sin(1.2) * Linalg.SIGMA_X
        energy = lambda t : Linalg.SIGMA_Z if t < 0.5 else rotated
        self.assertRaises(GaugeDiscontinuityError, Evolution.eigen_trajectory, energy, _identity,
                          TimeGrid(0.0, 1.0, 10))

    def test_level_tie(self):
        """equal overlaps with both levels should raise LevelCrossingError"""
        eig = Linalg.eig_biorthogonal(Linalg.SIGMA_X)
        self.assertRaises(LevelCrossingError, Evolution._match_levels, numpy.eye(2), eig,
                          Tolerances.Declarations(), 0.0)

#############################################################################
class Test_dynamical_phase(unittest.TestCase):
    def test_constant(self):
        """alpha_n(t) should be -E_n t for a constant Hamiltonian"""
        grid = TimeGrid(0.0, 2.0, 20)
        trajectory = Evolution.eigen_trajectory(_constant(numpy.diag([2.0, -1.0])), _identity, grid)
        alphas = Evolution.dynamical_phase(trajectory)
        numpy.testing.assert_allclose(alphas[:, 0], -2.0 * grid.times, atol = 1e-12)
        numpy.testing.assert_allclose(alphas[:, 1], grid.times, atol = 1e-12)

    def test_complex_energy(self):
        trajectory = Evolution.eigen_trajectory(_constant(numpy.diag([1.0 + 1.0j, -1.0])), _identity,
                                                TimeGrid(0.0, 1.0, 4))
        self.assertRaises(ComplexEnergyError, Evolution.dynamical_phase, trajectory)

#############################################################################
class Test_berry_rates(unittest.TestCase):
    def test_reference_gauge(self):
        """berry_rate() should reproduce the closed-form integrand for chi = (e^-i phi, 1)/sqrt(2)"""
        solution = _scenario41()
        path = solution.path

        def chi(t):
            phi = math.atan2(path.component('mu_r', t), path.component('alpha_r', t))
            return numpy.array([numpy.exp(-1j * phi), 1.0]) / math.sqrt(2.0)

        def psi(t):
            return Linalg.solve(solution.eta(t), chi(t))

        for t in (0.1, 0.5, 0.9):
            h = 1e-5
            dpsi = (psi(t + h) - psi(t - h)) / (2.0 * h)
            dchi = (chi(t + h) - chi(t - h)) / (2.0 * h)
            expected = Evolution.berry_integrand_41(path, t)
            rate = Evolution.berry_rate(psi(t), solution.rho(t), solution.eta(t), solution.eta_dot(t), dpsi)
            self.assertAlmostEqual(rate.real, expected, places = 7)
            self.assertAlmostEqual(rate.imag, 0.0, places = 7)
            self.assertAlmostEqual(Evolution.berry_rate_hermitian(chi(t), dchi).real, expected, places = 7)

    def test_hermitian_agreement(self):
        """non-Hermitian and Hermitian rates should agree along a trajectory"""
        for solution in (_scenario41(), _scenario42()):
            trajectory = _trajectory(solution, TimeGrid(0.0, 1.0, 20000))
            rates = Evolution.berry_rates(trajectory, solution.eta, solution.eta_dot)
            self.assertLess(rates.max_imag(), 1e-7)
            gamma, gamma_h = Evolution.geometric_phase(rates)
            self.assertEqual(gamma.shape, (20001, 2))
            self.assertLess(numpy.max(numpy.abs(gamma - gamma_h)), 1e-7)

    def test_integrand_41_matches_closed_form(self):
        solution = _scenario41()
        times = numpy.linspace(0.0, 1.0, 2001)
        rates = [Evolution.berry_integrand_41(solution.path, t) for t in times]
        self.assertAlmostEqual(scipy.integrate.trapezoid(rates, times),
                               Evolution.closed_form_berry_41(solution.path, times), places = 6)

    def test_integrand_42_matches_closed_form(self):
        solution = _scenario42()
        times = numpy.linspace(0.0, 1.0, 2001)
        rates = [Evolution.berry_integrand_42(solution.path, t) for t in times]
        self.assertAlmostEqual(scipy.integrate.trapezoid(rates, times),
                               Evolution.closed_form_berry_42(solution.path, times), places = 6)

    def test_undefined_angle(self):
        path = Model.ParameterPath.from_components()
        self.assertRaises(UndefinedAngleError, Evolution.closed_form_berry_41, path, numpy.linspace(0.0, 1.0, 5))

#############################################################################
class Test_berry_phase_loop(unittest.TestCase):
    def test_closed_forms(self):
        """closed forms should give pi around the origin and 0 beside it"""
        times = numpy.linspace(0.0, 1.0, 101)
        around = Model.ParameterPath.from_components(alpha_r = "cos(2*pi*t)", mu_r = "sin(2*pi*t)")
        beside = Model.ParameterPath.from_components(alpha_r = "2 + cos(2*pi*t)", mu_r = "sin(2*pi*t)")
        self.assertAlmostEqual(Evolution.closed_form_berry_41(around, times), math.pi, places = 10)
        self.assertAlmostEqual(Evolution.closed_form_berry_41(beside, times), 0.0, places = 10)

    def test_non_hermitian_loop(self):
        """a non-Hermitian loop should give pi and agree with its Hermitian counterpart"""
        solution, trajectory, grid = _loop("cos(2*pi*t)", "sin(2*pi*t)", 2.0, 1.0, 20000)
        loop = Evolution.berry_phase_loop(trajectory, solution.eta, solution.eta_dot, solution.path)
        for n in range(2):
            self.assertLess(phase_distance(loop.gamma[n], math.pi), 1e-6)
            self.assertLess(phase_distance(loop.gamma[n], loop.gamma_hermitian[n]), 1e-7)
        self.assertLessEqual(loop.max_imag, 1e-7)

    def test_time_dependent_metric_loop(self):
        """a loop with a time-dependent Dyson map should keep real rates and match its closed form"""
        free = { 'alpha_r' : "1.5 + cos(2*pi*t)", 'mu_i' : "1", 'tau_i' : "sin(2*pi*t)" }
        solution = Model.build_scenario_42(free, ScenarioConstants(0.5))
        grid = TimeGrid(0.0, 1.0, 20000)
        self.assertGreater(max_abs(solution.eta_dot(0.25)), 0.1)
        trajectory = _trajectory(solution, grid)
        rates = Evolution.berry_rates(trajectory, solution.eta, solution.eta_dot)
        self.assertLessEqual(rates.max_imag(), 1e-7)
        loop = Evolution.berry_phase_loop(trajectory, solution.eta, solution.eta_dot, solution.path)
        closed = Evolution.closed_form_berry_42(solution.path, grid)
        self.assertAlmostEqual(closed, 0.0, places = 10)
        for n in range(2):
            self.assertLess(phase_distance(loop.gamma[n], closed), 1e-6)
            self.assertLess(phase_distance(loop.gamma_hermitian[n], closed), 1e-6)

    def test_gauge_invariant(self):
        """the loop phase should not depend on the gauge of the eigenvectors"""
        solution, trajectory, grid = _loop("cos(2*pi*t)", "sin(2*pi*t)", 1.0, 0.0, 20000)
        phases = numpy.outer(numpy.sin(3.0 * grid.times), [1.0, -2.0])
        a = Evolution.berry_phase_loop(trajectory, solution.eta, solution.eta_dot)
        b = Evolution.berry_phase_loop(trajectory.regauged(phases), solution.eta, solution.eta_dot)
        for n in range(2):
            self.assertLess(phase_distance(a.gamma[n], b.gamma[n]), 1e-6)

    def test_open_path(self):
        solution = _scenario42()
        trajectory = _trajectory(solution, TimeGrid(0.0, 1.0, 10))
        self.assertRaises(OpenPathError, Evolution.berry_phase_loop, trajectory, solution.eta,
                          solution.eta_dot, solution.path)

#############################################################################
class Test_adiabatic(unittest.TestCase):
    def test_decompose_stationary(self):
        """a state prepared in an eigenstate of a constant H should keep |c_n|"""
        h = numpy.array([[1.0, 0.5], [0.5, -1.0]])
        grid = TimeGrid(0.0, 1.0, 100)
        trajectory = Evolution.eigen_trajectory(_constant(h), _identity, grid)
        states = Evolution.tdse_integrate(_constant(h), trajectory.right[0][:, 0], grid, _identity)
        gammas = numpy.zeros((101, 2))
        decomposition = Evolution.adiabatic_decompose(states, trajectory, gammas,
                                                      Evolution.dynamical_phase(trajectory))
        numpy.testing.assert_allclose(numpy.abs(decomposition.initial), [1.0, 0.0], atol = 1e-12)
        self.assertLess(decomposition.deviation(), 1e-8)
        self.assertTrue(decomposition.is_adiabatic())

    def test_different_grids(self):
        h = _constant(Linalg.SIGMA_Z)
        trajectory = Evolution.eigen_trajectory(h, _identity, TimeGrid(0.0, 1.0, 10))
        states = Evolution.tdse_integrate(h, [1.0, 0.0], TimeGrid(0.0, 1.0, 20))
        self.assertRaises(ValueError, Evolution.adiabatic_decompose, states, trajectory,
                          numpy.zeros((11, 2)), numpy.zeros((11, 2)))

    def test_sweep(self):
        """the adiabatic deviation should shrink with slower driving"""
        def make_scenario(period):
            free = { 'alpha_r' : "1", 'mu_r' : "0.25*(1 - cos(2*pi*t/%r))" % period, 'tau_i' : "0" }
            return Model.build_scenario_41(free, ScenarioConstants(2.0, 1.0))

        periods = [p / 0.6 for p in (25.0, 50.0, 100.0, 200.0)]
        result = Evolution.adiabatic_sweep(make_scenario, periods, 0.05)
        self.assertEqual([r[0] for r in result], periods)
        deviations = [r[1] for r in result]
        for a, b in zip(deviations, deviations[1:]):
            self.assertGreater(a, b)
        self.assertLessEqual(deviations[-1], 1e-2)

    def test_sweep_time_dependent_metric(self):
        """the adiabatic deviation should shrink with slower driving of the metric"""
        def make_scenario(period):
            free = { 'alpha_r' : "1", 'mu_i' : "1 + 0.25*(1 - cos(2*pi*t/%r))" % period, 'tau_i' : "0.5" }
            return Model.build_scenario_42(free, ScenarioConstants(0.5))

        periods = [p / 0.6 for p in (25.0, 50.0, 100.0, 200.0)]
        self.assertGreater(max_abs(make_scenario(periods[0]).eta_dot(periods[0] / 4.0)), 1e-2)
        result = Evolution.adiabatic_sweep(make_scenario, periods, 0.05)
        deviations = [r[1] for r in result]
        for a, b in zip(deviations, deviations[1:]):
            self.assertGreater(a, b)
        self.assertLessEqual(deviations[-1], 1e-2)

#############################################################################
if __name__ == "__main__":
    ldr = unittest.TestLoader()
    suite = unittest.TestSuite()
    # Load tests to test suite
    tclasses = [ Test_TimeGrid
               , Test_tdse_integrate
               , Test_eigen_trajectory
               , Test_dynamical_phase
               , Test_berry_rates
               , Test_berry_phase_loop
               , Test_adiabatic
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
