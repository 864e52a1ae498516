"""`TDNonHermitian.Operators`

Energy operator, metric and the C/P operator stack.

**General Description**

For a Dyson map ``eta(t)`` of a non-Hermitian Hamiltonian ``H(t)`` this
module builds

    - the energy operator ``H~ = H + i eta^-1 eta_dot`` (`energy_operator`),
    - the metric ``rho = eta^+ eta``, either from the map or by integrating
      ``i rho_dot = H^+ rho - rho H`` (`metric_ode_solve`),
    - ``C^ = P rho^`` for a static parity ``P`` and a metric normalized to
      unit determinant (`c_hat`),
    - ``C~ = sum_n s_n |psi~_n><phi~_n|`` from the eigensystem of ``H~``
      (`c_tilde`) and ``P~ = rho C~`` (`p_tilde`).

An `OperatorFrame` is a snapshot of all of them at one time. `verify_ptrel`
measures the three conditions under which the eigenvalues of ``H~`` are
real:

    (i) ``P~ H~ = H~^+ P~``,
    (ii) ``P~ |psi~_n> = a_n |phi~_n>`` with real ``a_n``,
    (iii) ``P~ = P~^+``.

Results are collected in a `VerificationReport`, which keeps the maximal
residual of each named check over a time grid.
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
import json
import logging
import math
import typing

import numpy

import TDNonHermitian.Linalg as Linalg
import TDNonHermitian.Model as Model
import TDNonHermitian.Tolerances as Tolerances
import TDNonHermitian.Util as Util
from TDNonHermitian.Util import max_abs
from TDNonHermitian.Errors import OperatorError, NormalizationError, InconsistentFrameError

logger = logging.getLogger(__name__)

TARGET_ENERGY_OPERATOR = 'energy_operator'
TARGET_HAMILTONIAN = 'hamiltonian'

#############################################################################
def energy_operator(h, eta, eta_dot):
    """Return ``H + i eta^-1 eta_dot``.

    :Raises:
        SingularMatrixError
            when `eta` is singular
    """
    return numpy.asarray(h, dtype = complex) + 1j * Linalg.solve(eta, eta_dot)

def metric(eta):
    eta = numpy.asarray(eta, dtype = complex)
    return Linalg.dagger(eta) @ eta

#############################################################################
@dataclasses.dataclass(frozen = True)
class MetricTrajectory(object):
    """Metric integrated over a grid.

    ``positive[k]`` tells whether ``rhos[k]`` is positive definite.
    """
    times : numpy.ndarray
    rhos : numpy.ndarray
    positive : numpy.ndarray

    @property
    def positivity_lost(self):
        return not bool(numpy.all(self.positive))

    def deviation(self, rho_fun):
        """Max over the grid of ``max|rho_numerical - rho_fun(t)|``"""
        return max(max_abs(r - rho_fun(t)) for t, r in zip(self.times, self.rhos))

def _times(grid):
    return numpy.asarray(getattr(grid, 'times', grid), dtype = float)

def metric_ode_solve(h_fun, rho0, grid, tolerances = None):
    """Integrate ``i rho_dot = H^+ rho - rho H`` with RK4 on `grid`.

    The metric is re-symmetrized to ``(rho + rho^+)/2`` after every step.
    Loss of positivity is flagged in the result and logged, not raised.

    :Parameters:
        h_fun : callable
            ``h_fun(t) -> H``
        rho0 : matrix
            Hermitian positive definite metric at ``grid.t0``
        grid
            `TDNonHermitian.Evolution.TimeGrid` or array of times
    :Returns:
        `MetricTrajectory`
    :Raises:
        OperatorError
            when `rho0` is not Hermitian positive definite
    """
    tols = Tolerances.resolve(tolerances)
    rho0 = Linalg.as_cmatrix(rho0)
    positive, values = Linalg.positivity_check(rho0, tols)
    if not positive:
        raise OperatorError("initial metric is not Hermitian positive definite "
                            "(eigenvalues %s)" % numpy.array2string(values))
    times = _times(grid)
    h_fun = Util.memoized(h_fun)

    def rhs(t, rho):
        h = h_fun(t)
        return -1j * (Linalg.dagger(h) @ rho - rho @ h)

    def symmetrize(k, rho):
        return 0.5 * (rho + Linalg.dagger(rho))

    rhos = Util.rk4_integrate(rhs, rho0, times, symmetrize)
    flags = numpy.array([Linalg.positivity_check(r, tols)[0] for r in rhos])
    if not numpy.all(flags):
        k = int(numpy.argmin(flags))
        logger.warning("integrated metric lost positivity at t=%g", times[k])
    return MetricTrajectory(times, rhos, flags)

#############################################################################
def normalize_metric(rho):
    """Return ``rho / det(rho)^(1/N)``, a metric with unit determinant.

    :Raises:
        NormalizationError
            when ``det(rho)`` is not positive
    """
    rho = Linalg.as_cmatrix(rho)
    det = numpy.linalg.det(rho)
    if not (det.real > 0.0 and abs(det.imag) <= 1e-12 * abs(det.real)):
        raise NormalizationError("cannot normalize a metric with determinant %r" % det)
    return rho / det.real ** (1.0 / rho.shape[0])

def c_hat(p_static, rho_hat, tolerances = None):
    """Return ``C^ = P rho^``.

    :Raises:
        NormalizationError
            when ``|det(rho^) - 1|`` exceeds ``c_hat_normalization``
    """
    tols = Tolerances.resolve(tolerances)
    rho_hat = Linalg.as_cmatrix(rho_hat)
    det = numpy.linalg.det(rho_hat)
    if abs(det - 1.0) > tols['c_hat_normalization']:
        raise NormalizationError("C^ needs a metric with unit determinant, got det=%r" % det)
    return Linalg.as_cmatrix(p_static) @ rho_hat

def c_hat_evolution_residual(h_fun, c_fun, t, h = None):
    """Return ``max|i dC^/dt - [H, C^]|`` with a central-difference ``dC^/dt``"""
    c_dot = Linalg.operator_time_derivative(c_fun, t, h)
    return max_abs(1j * c_dot - Linalg.commutator(h_fun(t), c_fun(t)))

#############################################################################
def _check_signatures(signatures, n):
    signatures = tuple(int(s) for s in signatures)
    if len(signatures) != n:
        raise ValueError("expected %d signatures, got %d" % (n, len(signatures)))
    if any(s not in (1, -1) for s in signatures):
        raise ValueError("signatures must be +1 or -1, got %r" % (signatures,))
    return signatures

def default_signatures(eigensystem):
    """``+1, -1, +1, ...`` assigned by descending real part of the energies"""
    order = sorted(range(eigensystem.size), key = lambda n : -eigensystem.values[n].real)
    signatures = [0] * eigensystem.size
    for rank, n in enumerate(order):
        signatures[n] = 1 if rank % 2 == 0 else -1
    return tuple(signatures)

def signature_operator(eigensystem, signatures):
    """Return ``sum_n s_n |psi_n><phi_n|``"""
    s = numpy.asarray(_check_signatures(signatures, eigensystem.size), dtype = complex)
    return (eigensystem.right * s) @ Linalg.dagger(eigensystem.left)

def c_tilde(eigensystem, signatures = None):
    """Return ``C~`` from the eigensystem of the energy operator; default
    signatures as in `default_signatures`"""
    if signatures is None:
        signatures = default_signatures(eigensystem)
    return signature_operator(eigensystem, signatures)

def p_tilde(rho, c, tolerances = None):
    """Return ``P~ = rho C~``.

    :Raises:
        InconsistentFrameError
            when ``P~`` is not Hermitian within ``p_tilde_hermiticity``
    """
    tols = Tolerances.resolve(tolerances)
    p = Linalg.as_cmatrix(rho) @ Linalg.as_cmatrix(c)
    residual = Linalg.hermiticity_residual(p)
    if residual > tols['p_tilde_hermiticity'] * max(1.0, max_abs(p)):
        raise InconsistentFrameError("P~ = rho C~ is not Hermitian (residual %.3g); "
                                     "rho and C~ come from different frames" % residual)
    return p

def p_tilde_spectrum(p):
    """Eigenvalues of the Hermitian part of `p`, ascending"""
    return Linalg.positivity_check(p)[1]

#############################################################################
def rho_normalized(eigensystem, rho):
    """Rescale so that ``<psi_n|rho|psi_n> = 1`` keeping ``<phi_n|psi_m> = delta_nm``"""
    right = eigensystem.right
    norms = numpy.real(numpy.einsum('in,ij,jn->n', numpy.conj(right), rho, right))
    if numpy.any(norms <= 0.0):
        raise NormalizationError("metric norm of an eigenvector is not positive")
    return eigensystem.rescaled(1.0 / numpy.sqrt(norms))

def descending(eigensystem):
    """Reorder by descending real part"""
    perm = sorted(range(eigensystem.size), key = lambda n : -eigensystem.values[n].real)
    return eigensystem.reordered(perm)

#############################################################################
@dataclasses.dataclass(frozen = True)
class OperatorFrame(object):
    """Operator stack at time `t`.

    The eigensystem of ``energy`` is ordered by descending real part and
    rho-normalized, so that ``left[:, n] = rho right[:, n]``.
    """
    t : float
    hamiltonian : numpy.ndarray
    energy : numpy.ndarray
    rho : numpy.ndarray
    eta : numpy.ndarray
    eigensystem : Linalg.Eigensystem
    signatures : tuple
    c_tilde : numpy.ndarray
    p_tilde : numpy.ndarray
    c_hat : typing.Optional[numpy.ndarray] = None

    @property
    def energies(self):
        return self.eigensystem.values

def build_frame(h, eta, eta_dot, t = 0.0, signatures = None, c_hat = None, tolerances = None):
    """Build an `OperatorFrame` from ``H``, ``eta`` and ``eta_dot``.

    :Raises:
        DefectiveMatrixError
            at an exceptional point of the energy operator
        InconsistentFrameError
            when ``P~`` comes out non-Hermitian
    """
    tols = Tolerances.resolve(tolerances)
    h = Linalg.as_cmatrix(h)
    eta = Linalg.as_cmatrix(eta)
    energy = energy_operator(h, eta, eta_dot)
    rho = metric(eta)
    eig = rho_normalized(descending(Linalg.eig_biorthogonal(energy, tolerances = tols)), rho)
    if signatures is None:
        signatures = default_signatures(eig)
    signatures = _check_signatures(signatures, eig.size)
    c = signature_operator(eig, signatures)
    p = p_tilde(rho, c, tols)
    return OperatorFrame(float(t), h, energy, rho, eta, eig, signatures, c, p, c_hat)

def frame_from_scenario(solution, t, signatures = None, with_c_hat = False, tolerances = None):
    """Build the frame of a `TDNonHermitian.Model.ScenarioSolution` at `t`.

    With `with_c_hat`, ``C^`` is built from the static parity of the path and
    the analytic metric normalized to unit determinant.
    """
    tols = Tolerances.resolve(tolerances)
    chat = None
    if with_c_hat:
        parity = Model.static_parity(solution.path, t, tols)
        chat = c_hat(parity, normalize_metric(solution.rho(t)), tols)
    return build_frame(solution.hamiltonian(t), solution.eta(t), solution.eta_dot(t), t,
                       signatures, chat, tols)

#############################################################################
def quasi_hermiticity_residual(energy, rho):
    """Return ``max|H~^+ rho - rho H~|``"""
    energy = numpy.asarray(energy, dtype = complex)
    return max_abs(Linalg.dagger(energy) @ rho - rho @ energy)

def metric_ode_residual(h_fun, rho_fun, t, h = None):
    """Return ``max|i rho_dot - H^+ rho + rho H|`` with a central-difference
    ``rho_dot``"""
    rho_dot = Linalg.operator_time_derivative(rho_fun, t, h)
    ham = h_fun(t)
    rho = rho_fun(t)
    return max_abs(1j * rho_dot - Linalg.dagger(ham) @ rho + rho @ ham)

#############################################################################
@dataclasses.dataclass(frozen = True)
class CheckResult(object):
    """Outcome of one named check"""
    name : str
    residual : float
    tolerance : float
    skipped : bool = False
    reason : str = ''

    @property
    def passed(self):
        if self.skipped:
            return True
        return bool(self.residual <= self.tolerance)

    @property
    def verdict(self):
        if self.skipped:
            return 'skipped'
        return 'pass' if self.passed else 'FAIL'

    def as_dict(self):
        return collections.OrderedDict([
            ('name', self.name),
            ('residual', None if self.skipped or math.isnan(self.residual) else self.residual),
            ('tolerance', self.tolerance),
            ('verdict', self.verdict),
            ('reason', self.reason),
        ])

def _worse(a, b):
    if math.isnan(a) or math.isnan(b):
        return float('nan')
    return max(a, b)

class VerificationReport(object):
    """Named checks with their maximal residual and tolerance.

    Checks keep insertion order. Recording a check again keeps the larger
    residual, so a report may be filled point by point over a time grid. A
    ``NaN`` residual never passes.
    """

    def __init__(self, tolerances = None):
        self._tolerances = Tolerances.resolve(tolerances)
        self._checks = collections.OrderedDict()
        self.notes = collections.OrderedDict()

    def record(self, name, residual, tolerance = None):
        if tolerance is None:
            tolerance = self._tolerances[name]
        residual = float(residual)
        old = self._checks.get(name)
        if old is not None and not old.skipped:
            residual = _worse(old.residual, residual)
        self._checks[name] = CheckResult(name, residual, float(tolerance))
        return self._checks[name]

    def skip(self, name, reason, tolerance = None):
        if tolerance is None:
            tolerance = self._tolerances[name]
        if name not in self._checks:
            self._checks[name] = CheckResult(name, float('nan'), float(tolerance), True, reason)
        return self._checks[name]

    def merge(self, other):
        for c in other:
            if c.skipped:
                self.skip(c.name, c.reason, c.tolerance)
            else:
                self.record(c.name, c.residual, c.tolerance)
        self.notes.update(other.notes)
        return self

    def __getitem__(self, name):
        return self._checks[name]

    def __contains__(self, name):
        return name in self._checks

    def __iter__(self):
        return iter(self._checks.values())

    def __len__(self):
        return len(self._checks)

    def names(self):
        return list(self._checks)

    @property
    def passed(self):
        return all(c.passed for c in self)

    def failures(self):
        return [c for c in self if not c.passed]

    def as_dict(self):
        return collections.OrderedDict([
            ('verdict', 'pass' if self.passed else 'FAIL'),
            ('checks', [c.as_dict() for c in self]),
            ('notes', self.notes),
        ])

    def to_json(self):
        return json.dumps(self.as_dict(), indent = 2, default = _json_default)

    def format_text(self):
        lines = []
        width = max([len(c.name) for c in self] + [5])
        for c in self:
            if c.skipped:
                lines.append("%-*s  %-10s  %-10s  skipped (%s)" % (width, c.name, '-', '-', c.reason))
            else:
                lines.append("%-*s  %.3e  %.3e  %s" % (width, c.name, c.residual, c.tolerance, c.verdict))
        lines.append("verdict: %s" % ('pass' if self.passed else 'FAIL'))
        return '\n'.join(lines) + '\n'

def _json_default(obj):
    if isinstance(obj, numpy.ndarray):
        return obj.tolist()
    if isinstance(obj, (numpy.floating, numpy.integer, numpy.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError("%r is not JSON serializable" % obj)

#############################################################################
def verify_ptrel(frame, against = TARGET_ENERGY_OPERATOR, tolerances = None):
    """Measure the three conditions guaranteeing real eigenvalues.

    :Parameters:
        frame : `OperatorFrame`
            operators at one time
        against : str
            ``'energy_operator'`` (``H~``) or ``'hamiltonian'`` (``H``); the
            latter is a negative control, condition (ii) fails for it in
            general
    :Returns:
        `VerificationReport` with ``ptrel_intertwining``,
        ``ptrel_eigenmap``, ``ptrel_alpha_real``, ``ptrel_hermiticity`` and
        ``energy_reality``; ``notes['guarantee_active']`` tells whether
        (i)-(iii) all passed and ``notes['alpha']`` lists the scalars
        ``a_n`` of (ii)
    """
    tols = Tolerances.resolve(tolerances)
    report = VerificationReport(tols)
    if against == TARGET_ENERGY_OPERATOR:
        x = frame.energy
        eig = frame.eigensystem
    elif against == TARGET_HAMILTONIAN:
        x = frame.hamiltonian
        eig = rho_normalized(descending(Linalg.eig_biorthogonal(x, tolerances = tols)), frame.rho)
    else:
        raise ValueError("unknown verification target %r" % against)
    p = frame.p_tilde
    report.record('ptrel_intertwining', max_abs(p @ x - Linalg.dagger(x) @ p))

    eigenmap = 0.0
    alpha_imag = 0.0
    alphas = []
    for n in range(eig.size):
        image = p @ eig.right[:, n]
        phi = eig.left[:, n]
        # least squares over complex scalars
        alpha = numpy.vdot(phi, image) / numpy.vdot(phi, phi)
        scale = numpy.linalg.norm(image)
        if scale == 0.0:
            residual = float('nan')
        else:
            residual = numpy.linalg.norm(image - alpha * phi) / scale
        eigenmap = _worse(eigenmap, residual)
        alpha_imag = max(alpha_imag, abs(alpha.imag))
        alphas.append(complex(alpha))
    report.record('ptrel_eigenmap', eigenmap)
    report.record('ptrel_alpha_real', alpha_imag)
    report.record('ptrel_hermiticity', Linalg.hermiticity_residual(p))
    report.record('energy_reality', max_abs(numpy.imag(eig.values)))
    report.notes['target'] = against
    report.notes['alpha'] = [[a.real, a.imag] for a in alphas]
    report.notes['guarantee_active'] = all(report[n].passed for n in (
        'ptrel_intertwining', 'ptrel_eigenmap', 'ptrel_alpha_real', 'ptrel_hermiticity'))
    return report

def frame_identities(frame, tolerances = None):
    """Algebraic identities of a frame.

    Records ``c_tilde_involution``, ``c_tilde_commutator``,
    ``p_tilde_hermiticity``, ``c_from_p``, ``rho_orthonormality``,
    ``quasi_hermiticity`` and, when the frame carries ``C^``,
    ``c_hat_involution``.
    """
    tols = Tolerances.resolve(tolerances)
    report = VerificationReport(tols)
    n = frame.eigensystem.size
    identity = numpy.eye(n)
    c = frame.c_tilde
    right = frame.eigensystem.right
    report.record('c_tilde_involution', max_abs(c @ c - identity))
    report.record('c_tilde_commutator', max_abs(Linalg.commutator(c, frame.energy)))
    report.record('p_tilde_hermiticity', Linalg.hermiticity_residual(frame.p_tilde))
    report.record('c_from_p', max_abs(Linalg.solve(frame.rho, frame.p_tilde) - c))
    report.record('rho_orthonormality', max_abs(Linalg.dagger(right) @ frame.rho @ right - identity))
    report.record('quasi_hermiticity', quasi_hermiticity_residual(frame.energy, frame.rho))
    if frame.c_hat is not None:
        report.record('c_hat_involution', max_abs(frame.c_hat @ frame.c_hat - identity))
    return report

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
