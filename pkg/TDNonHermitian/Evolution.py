"""`TDNonHermitian.Evolution`

Time evolution, instantaneous eigenstates and phases.

**General Description**

On a uniform `TimeGrid` this module

    - integrates ``i d/dt psi = H(t) psi`` with fixed-step RK4
      (`tdse_integrate`), guarding the metric norm ``<psi|rho|psi>``,
    - follows the eigensystem of the energy operator continuously in time
      (`eigen_trajectory`): levels are matched between neighbouring points
      by maximal overlap and phases are aligned so that the overlaps are
      real and positive,
    - accumulates the dynamical phases ``alpha_n = -int E_n`` and the
      geometric phases ``gamma_n = int i<psi_n|rho (d/dt + eta^-1 eta_dot)|psi_n>``,
      the latter also on the Hermitian side as ``int i<chi_n|d/dt chi_n>``
      with ``chi_n = eta psi_n``,
    - evaluates Berry phases of closed loops and their closed forms for the
      two analytic scenarios,
    - projects a state trajectory on the instantaneous levels to measure how
      adiabatic the evolution was (`adiabatic_decompose`).

Loop phases are defined modulo ``2 pi``. They are made gauge invariant by
adding the holonomy ``arg <chi_n(t0)|chi_n(t1)>`` to the integrated rate.
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

import dataclasses
import logging
import math

import numpy
import scipy.integrate
import scipy.optimize

import TDNonHermitian.Linalg as Linalg
import TDNonHermitian.Operators as Operators
import TDNonHermitian.Tolerances as Tolerances
import TDNonHermitian.Util as Util
from TDNonHermitian.Util import max_abs, wrap_phase
from TDNonHermitian.Errors import (GaugeDiscontinuityError, LevelCrossingError, OpenPathError,
                                   ComplexEnergyError, IntegrationInstabilityError,
                                   UndefinedAngleError)

logger = logging.getLogger(__name__)

#############################################################################
@dataclasses.dataclass(frozen = True)
class TimeGrid(object):
    """Uniform grid of ``steps`` intervals on ``[t0, t1]``"""
    t0 : float
    t1 : float
    steps : int

    def __post_init__(self):
        if not (Util.is_finite_number(self.t0) and Util.is_finite_number(self.t1)):
            raise ValueError("grid bounds must be finite, got [%r, %r]" % (self.t0, self.t1))
        if not self.t1 > self.t0:
            raise ValueError("grid needs t1 > t0, got [%r, %r]" % (self.t0, self.t1))
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise ValueError("grid needs an integer number of steps >= 2, got %r" % (self.steps,))
        object.__setattr__(self, 'steps', int(self.steps))

    @property
    def dt(self):
        return (self.t1 - self.t0) / self.steps

    @property
    def times(self):
        return numpy.linspace(self.t0, self.t1, self.steps + 1)

    def __len__(self):
        return self.steps + 1

def _times(grid):
    return numpy.asarray(getattr(grid, 'times', grid), dtype = float)

#############################################################################
@dataclasses.dataclass(frozen = True)
class StateTrajectory(object):
    """``states[k]`` is the state at ``times[k]``; ``rho_norms`` holds
    ``<psi|rho|psi>`` when a metric was supplied"""
    times : numpy.ndarray
    states : numpy.ndarray
    rho_norms : numpy.ndarray = None

    def norm_drift(self):
        """Max relative drift of the metric norm; ``NaN`` without a metric"""
        if self.rho_norms is None:
            return float('nan')
        n0 = self.rho_norms[0]
        return float(numpy.max(numpy.abs(self.rho_norms - n0)) / (1.0 + abs(n0)))

def _rho_norm(rho, psi):
    return float(numpy.real(numpy.vdot(psi, rho @ psi)))

def tdse_integrate(h_fun, psi0, grid, rho_fun = None, tolerances = None):
    """Integrate ``i d/dt psi = H(t) psi`` with RK4.

    :Parameters:
        h_fun : callable
            ``h_fun(t) -> H``
        psi0
            nonzero initial state
        grid : `TimeGrid`
        rho_fun : callable
            metric ``rho_fun(t)``; when given the relative drift of
            ``<psi|rho|psi>`` is monitored
    :Returns:
        `StateTrajectory`
    :Raises:
        IntegrationInstabilityError
            when the metric norm drifts by more than ``norm_drift``, or the
            state stops being finite
    """
    tols = Tolerances.resolve(tolerances)
    psi0 = numpy.asarray(psi0, dtype = complex)
    if psi0.ndim != 1 or not numpy.any(psi0):
        raise ValueError("initial state must be a nonzero vector")
    times = _times(grid)
    h_fun = Util.memoized(h_fun)
    norms = None
    if rho_fun is not None:
        norms = numpy.empty(len(times))
        norms[0] = _rho_norm(rho_fun(times[0]), psi0)

    def rhs(t, psi):
        return -1j * (h_fun(t) @ psi)

    def guard(k, psi):
        if not numpy.all(numpy.isfinite(psi)):
            raise IntegrationInstabilityError("state diverged at t=%g; use a finer grid" % times[k])
        if norms is not None:
            norms[k] = _rho_norm(rho_fun(times[k]), psi)
            drift = abs(norms[k] - norms[0]) / abs(norms[0])
            if drift > tols['norm_drift']:
                raise IntegrationInstabilityError("metric norm drifted by %.3g at t=%g; "
                                                  "use a finer grid" % (drift, times[k]))
        return psi

    states = Util.rk4_integrate(rhs, psi0, times, guard)
    return StateTrajectory(times, states, norms)

#############################################################################
@dataclasses.dataclass(frozen = True)
class EigenTrajectory(object):
    """Gauge-aligned eigensystems of the energy operator on a grid.

    ``right[k][:, n]`` and ``left[k][:, n]`` are ``|psi_n(t_k)>`` and
    ``|phi_n(t_k)>``; level ``n = 0`` starts as the one with the largest
    real energy.
    """
    times : numpy.ndarray
    energies : numpy.ndarray
    right : numpy.ndarray
    left : numpy.ndarray
    rhos : numpy.ndarray
    min_overlap : float = 1.0

    @property
    def levels(self):
        return self.energies.shape[1]

    def eigensystem(self, k):
        return Linalg.Eigensystem(self.energies[k], self.right[k], self.left[k],
                                  Linalg.ORDER_CONTINUITY)

    def max_imag_energy(self):
        return max_abs(numpy.imag(self.energies))

    def regauged(self, phases):
        """Multiply ``psi_n(t_k)`` and ``phi_n(t_k)`` by ``exp(i phases[k, n])``"""
        f = numpy.exp(1j * numpy.asarray(phases, dtype = float))[:, None, :]
        return dataclasses.replace(self, right = self.right * f, left = self.left * f)

def _match_levels(prev_left, eig, tols, t):
    overlaps = numpy.abs(Linalg.dagger(prev_left) @ eig.right)
    n = overlaps.shape[0]
    if n > 1:
        for row in overlaps:
            best = numpy.sort(row)[::-1]
            if best[0] - best[1] <= tols['level_tie']:
                raise LevelCrossingError("ambiguous level matching at t=%g "
                                         "(overlaps %s)" % (t, numpy.array2string(row)))
    rows, cols = scipy.optimize.linear_sum_assignment(-overlaps)
    return cols[numpy.argsort(rows)]

def eigen_trajectory(energy_fun, rho_fun, grid, tolerances = None):
    """Follow the eigensystem of the energy operator along `grid`.

    :Parameters:
        energy_fun : callable
            ``energy_fun(t) -> H~``
        rho_fun : callable
            ``rho_fun(t) -> rho``; eigenvectors are rho-normalized
        grid : `TimeGrid`
    :Returns:
        `EigenTrajectory`
    :Raises:
        DefectiveMatrixError
            at an exceptional point of the energy operator
        LevelCrossingError
            when two overlaps tie within ``level_tie``
        GaugeDiscontinuityError
            when a matched overlap is below ``gauge_overlap``
    """
    tols = Tolerances.resolve(tolerances)
    times = _times(grid)
    energies = []
    rights = []
    lefts = []
    rhos = []
    min_overlap = 1.0
    prev = None
    for t in times:
        rho = numpy.asarray(rho_fun(t), dtype = complex)
        eig = Linalg.eig_biorthogonal(energy_fun(t), Linalg.ORDER_CONTINUITY, tols)
        eig = Operators.rho_normalized(eig, rho)
        if prev is None:
            eig = Operators.descending(eig)
        else:
            eig = eig.reordered(_match_levels(prev.left, eig, tols, t))
            overlaps = numpy.einsum('in,in->n', numpy.conj(prev.left), eig.right)
            worst = float(numpy.min(numpy.abs(overlaps)))
            if worst < tols['gauge_overlap']:
                raise GaugeDiscontinuityError("eigenvector overlap %.3g at t=%g is below %g; "
                                              "use a finer grid" % (worst, t, tols['gauge_overlap']))
            min_overlap = min(min_overlap, worst)
            eig = eig.rescaled(numpy.exp(-1j * numpy.angle(overlaps)))
        energies.append(eig.values)
        rights.append(eig.right)
        lefts.append(eig.left)
        rhos.append(rho)
        prev = eig
    return EigenTrajectory(times, numpy.array(energies), numpy.array(rights),
                           numpy.array(lefts), numpy.array(rhos), min_overlap)

#############################################################################
def dynamical_phase(trajectory, tolerances = None):
    """Return ``alpha_n(t) = -int_t0^t E_n`` as an array ``(K, N)``.

    :Raises:
        ComplexEnergyError
            when ``|Im E_n|`` exceeds ``energy_reality`` anywhere
    """
    tols = Tolerances.resolve(tolerances)
    imag = trajectory.max_imag_energy()
    if imag > tols['energy_reality']:
        raise ComplexEnergyError("instantaneous energies are complex (max |Im E| = %.3g)" % imag)
    return -scipy.integrate.cumulative_trapezoid(numpy.real(trajectory.energies),
                                                 trajectory.times, axis = 0, initial = 0.0)

def berry_rate(psi, rho, eta, eta_dot, dpsi):
    """Return ``i <psi|rho (dpsi + eta^-1 eta_dot psi)>``; real for a
    rho-normalized `psi`"""
    psi = numpy.asarray(psi, dtype = complex)
    return complex(1j * numpy.vdot(psi, rho @ (dpsi + Linalg.solve(eta, eta_dot @ psi))))

def berry_rate_hermitian(chi, dchi):
    """Return ``i <chi|dchi>``"""
    return complex(1j * numpy.vdot(chi, dchi))

@dataclasses.dataclass(frozen = True)
class BerryRates(object):
    """Geometric-phase rates on a grid, shape ``(K, N)``"""
    times : numpy.ndarray
    nonhermitian : numpy.ndarray
    hermitian : numpy.ndarray
    chi : numpy.ndarray

    def max_imag(self):
        return max_abs(numpy.imag(self.nonhermitian))

def eigenvector_derivative(eigensystem, energy_dot, rho, rho_dot, dright, tolerances = None):
    """Time derivative of rho-normalized right eigenvectors.

    ``dpsi_n = sum_{m != n} psi_m <phi_m|dH~|psi_n>/(E_n - E_m) + c_n psi_n``
    where ``Re c_n`` keeps ``<psi_n|rho|psi_n>`` constant and ``Im c_n``,
    the gauge part, is taken from the difference estimate `dright`.

    :Parameters:
        eigensystem : `TDNonHermitian.Linalg.Eigensystem`
            rho-normalized eigensystem at ``t``
        energy_dot : numpy.ndarray
            ``dH~/dt`` at ``t``
        rho, rho_dot : numpy.ndarray
            the metric and its time derivative at ``t``
        dright : numpy.ndarray
            difference estimate of ``dpsi_n``, one column per level
    :Raises:
        LevelCrossingError
            when two energies coincide within ``level_tie``
    """
    tols = Tolerances.resolve(tolerances)
    right, left, values = eigensystem.right, eigensystem.left, eigensystem.values
    n = len(values)
    gaps = values[None, :] - values[:, None]
    off_diagonal = ~numpy.eye(n, dtype = bool)
    if numpy.any(numpy.abs(gaps[off_diagonal]) <= tols['level_tie']):
        raise LevelCrossingError("degenerate energies %s" % numpy.array2string(values))
    coupling = numpy.zeros((n, n), dtype = complex)
    coupling[off_diagonal] = (Linalg.dagger(left) @ energy_dot @ right)[off_diagonal] / gaps[off_diagonal]
    transverse = right @ coupling
    stretch = (-numpy.real(numpy.einsum('in,ij,jn->n', numpy.conj(right), rho, transverse))
               - 0.5 * numpy.real(numpy.einsum('in,ij,jn->n', numpy.conj(right), rho_dot, right)))
    gauge = numpy.imag(numpy.einsum('in,in->n', numpy.conj(left), dright))
    return transverse + right * (stretch + 1j * gauge)

def berry_rates(trajectory, eta_fun, eta_dot_fun, tolerances = None):
    """Evaluate `berry_rate` and `berry_rate_hermitian` along a trajectory.

    Eigenvector derivatives come from `eigenvector_derivative`, with
    ``dH~/dt`` and the gauge part estimated by central differences of the
    aligned trajectory (second order at the ends). The Hermitian side uses
    central differences of ``chi = eta psi``.
    """
    times = trajectory.times
    etas = numpy.array([eta_fun(t) for t in times], dtype = complex)
    eta_dots = numpy.array([eta_dot_fun(t) for t in times], dtype = complex)
    rho_dots = (numpy.einsum('kji,kjl->kil', numpy.conj(eta_dots), etas)
                + numpy.einsum('kji,kjl->kil', numpy.conj(etas), eta_dots))
    energy_ops = numpy.einsum('kin,kn,kjn->kij', trajectory.right, trajectory.energies,
                              numpy.conj(trajectory.left))
    energy_dots = numpy.gradient(energy_ops, times, axis = 0, edge_order = 2)
    dright_fd = numpy.gradient(trajectory.right, times, axis = 0, edge_order = 2)
    dright = numpy.array([eigenvector_derivative(trajectory.eigensystem(k), energy_dots[k],
                                                 trajectory.rhos[k], rho_dots[k], dright_fd[k],
                                                 tolerances)
                          for k in range(len(times))])
    chi = numpy.einsum('kij,kjn->kin', etas, trajectory.right)
    dchi = numpy.gradient(chi, times, axis = 0, edge_order = 2)
    k_count, n_count = trajectory.energies.shape
    nonherm = numpy.empty((k_count, n_count), dtype = complex)
    herm = numpy.empty((k_count, n_count), dtype = complex)
    for k in range(k_count):
        for n in range(n_count):
            nonherm[k, n] = berry_rate(trajectory.right[k][:, n], trajectory.rhos[k],
                                       etas[k], eta_dots[k], dright[k][:, n])
            herm[k, n] = berry_rate_hermitian(chi[k][:, n], dchi[k][:, n])
    return BerryRates(times, nonherm, herm, chi)

def geometric_phase(rates):
    """Cumulative ``(gamma_nonhermitian, gamma_hermitian)`` from `BerryRates`,
    each of shape ``(K, N)``"""
    def accumulate(r):
        return scipy.integrate.cumulative_trapezoid(numpy.real(r), rates.times, axis = 0, initial = 0.0)
    return accumulate(rates.nonhermitian), accumulate(rates.hermitian)

#############################################################################
@dataclasses.dataclass(frozen = True)
class BerryLoop(object):
    """Loop phases per level, wrapped onto ``(-pi, pi]``"""
    gamma : numpy.ndarray
    gamma_hermitian : numpy.ndarray
    holonomy : numpy.ndarray
    max_imag : float

def berry_phase_loop(trajectory, eta_fun, eta_dot_fun, path = None, tolerances = None):
    """Berry phases of a closed loop.

    ``gamma_n = int Re(rate_n) dt + arg <chi_n(t0)|chi_n(t1)>``, wrapped onto
    ``(-pi, pi]``; the second term makes the value independent of the gauge
    of the eigenvectors.

    :Parameters:
        path : `TDNonHermitian.Model.ParameterPath`
            when given, its closure between the grid ends is checked
    :Raises:
        OpenPathError
            when `path` is not closed within ``closed_path``
    """
    tols = Tolerances.resolve(tolerances)
    t0, t1 = trajectory.times[0], trajectory.times[-1]
    if path is not None:
        residual = path.closure_residual(t0, t1)
        if residual > tols['closed_path']:
            raise OpenPathError("parameter path is not closed on [%g, %g] "
                                "(residual %.3g)" % (t0, t1, residual))
        logger.debug("closed parameter path on [%g, %g], residual %.3g", t0, t1, residual)
    rates = berry_rates(trajectory, eta_fun, eta_dot_fun, tols)
    chi = rates.chi
    holonomy = numpy.angle(numpy.einsum('in,in->n', numpy.conj(chi[0]), chi[-1]))
    integral = scipy.integrate.trapezoid(numpy.real(rates.nonhermitian), rates.times, axis = 0)
    integral_h = scipy.integrate.trapezoid(numpy.real(rates.hermitian), rates.times, axis = 0)
    return BerryLoop(wrap_phase(integral + holonomy), wrap_phase(integral_h + holonomy),
                     holonomy, rates.max_imag())

#############################################################################
def _continuous_angle(y, x):
    y = numpy.asarray(y, dtype = float)
    x = numpy.asarray(x, dtype = float)
    bad = (x == 0.0) & (y == 0.0)
    if numpy.any(bad):
        raise UndefinedAngleError("angle undefined where both coordinates vanish")
    return numpy.unwrap(numpy.arctan2(y, x))

def _component_on(path, name, times):
    return numpy.array([path.component(name, t) for t in times])

def berry_integrand_41(path, t):
    """``1/2 (alpha_r mu_r_dot - mu_r alpha_r_dot) / (alpha_r^2 + mu_r^2)``"""
    a = path.alpha_r.dual(t)
    m = path.mu_r.dual(t)
    return 0.5 * (a.value * m.derivative - m.value * a.derivative) / (a.value ** 2 + m.value ** 2)

def closed_form_berry_41(path, grid):
    """``1/2 arctan(mu_r/alpha_r)`` between the grid ends, as a continuous
    angle along the grid.

    :Raises:
        UndefinedAngleError
            when ``alpha_r = mu_r = 0`` on the grid
    """
    times = _times(grid)
    angle = _continuous_angle(_component_on(path, 'mu_r', times), _component_on(path, 'alpha_r', times))
    return 0.5 * (angle[-1] - angle[0])

def _constraint_a(path, t):
    # mu_r = -tau_i - 2A on a completed path
    return -0.5 * (path.component('mu_r', t) + path.component('tau_i', t))

def berry_integrand_42(path, t, h = None):
    """``-1/2 d/dt arctan(2A/alpha_r)``; ``dA/dt`` by central difference"""
    a = path.alpha_r.dual(t)
    big_a = _constraint_a(path, t)
    big_a_dot = Linalg.operator_time_derivative(lambda s : _constraint_a(path, s), t, h)
    return -0.5 * (2.0 * a.value * big_a_dot - 2.0 * big_a * a.derivative) / (a.value ** 2 + 4.0 * big_a ** 2)

def closed_form_berry_42(path, grid):
    """``-1/2 arctan(2A/alpha_r)`` between the grid ends, as a continuous
    angle along the grid.

    :Raises:
        UndefinedAngleError
            when ``alpha_r = A = 0`` on the grid
    """
    times = _times(grid)
    big_a = numpy.array([_constraint_a(path, t) for t in times])
    angle = _continuous_angle(2.0 * big_a, _component_on(path, 'alpha_r', times))
    return -0.5 * (angle[-1] - angle[0])

#############################################################################
@dataclasses.dataclass(frozen = True)
class AdiabaticDecomposition(object):
    """Coefficients ``c_n(t)``, shape ``(K, N)``"""
    times : numpy.ndarray
    coefficients : numpy.ndarray

    @property
    def initial(self):
        return self.coefficients[0]

    def deviation(self):
        """``max_t |c_n(t) - c_n(0)|`` over all levels"""
        return max_abs(self.coefficients - self.coefficients[0])

    def is_adiabatic(self, tolerances = None):
        tols = Tolerances.resolve(tolerances)
        return self.deviation() <= tols['adiabatic_deviation']

def adiabatic_decompose(states, trajectory, gammas, alphas):
    """Return ``c_n(t) = <phi_n(t)|psi(t)> exp(-i (gamma_n + alpha_n))``.

    :Parameters:
        states : `StateTrajectory`
        trajectory : `EigenTrajectory`
            on the same grid as `states`
        gammas, alphas : numpy.ndarray
            geometric and dynamical phases, shape ``(K, N)``
    """
    if len(states.times) != len(trajectory.times):
        raise ValueError("state and eigen trajectories are on different grids")
    overlaps = numpy.einsum('kin,ki->kn', numpy.conj(trajectory.left), states.states)
    coefficients = overlaps * numpy.exp(-1j * (numpy.asarray(gammas) + numpy.asarray(alphas)))
    return AdiabaticDecomposition(trajectory.times, coefficients)

def adiabatic_sweep(make_scenario, periods, dt, level = 0, tolerances = None):
    """Deviation of `adiabatic_decompose` for each driving period.

    :Parameters:
        make_scenario : callable
            ``make_scenario(T) -> ScenarioSolution`` driven with period `T`
        periods : sequence
            periods to try
        dt : float
            approximate step; each grid ``[0, T]`` gets ``ceil(T/dt)`` steps
        level : int
            level the state starts in
    :Returns:
        list of ``(T, deviation)``
    """
    tols = Tolerances.resolve(tolerances)
    result = []
    for period in periods:
        solution = make_scenario(period)
        grid = TimeGrid(0.0, float(period), max(2, int(math.ceil(period / dt))))
        energy = lambda t : Operators.energy_operator(solution.hamiltonian(t), solution.eta(t),
                                                      solution.eta_dot(t))
        trajectory = eigen_trajectory(energy, solution.rho, grid, tols)
        states = tdse_integrate(solution.hamiltonian, trajectory.right[0][:, level], grid,
                                solution.rho, tols)
        gammas = geometric_phase(berry_rates(trajectory, solution.eta, solution.eta_dot, tols))[0]
        alphas = dynamical_phase(trajectory, tols)
        deviation = adiabatic_decompose(states, trajectory, gammas, alphas).deviation()
        logger.info("adiabatic sweep: T=%g deviation=%.3g", period, deviation)
        result.append((float(period), deviation))
    return result

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
