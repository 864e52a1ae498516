"""`TDNonHermitian.Model`

The 2x2 spin Hamiltonian and its analytic Dyson-map scenarios.

**General Description**

A `ParameterPath` holds the coefficients of

.. math::

    H(t) = -1/2 [omega I + alpha(t) sigma_x + mu(t) sigma_y + tau(t) sigma_z]

split into real and imaginary parts, ``alpha = alpha_r + i alpha_i`` and so
on. Each component is a callable of time, usually an
`TDNonHermitian.ExprPath.Expression`.

For the *static* model (constant coefficients or a path tagged
``static_pt``) the constraints ``alpha_r alpha_i = -mu_r mu_i`` and
``tau_r = 0`` make `H` PT symmetric, with

    - `discriminant` classifying the PT regime by the sign of ``Delta``,
    - `static_energies` returning ``E_+-`` in closed form,
    - `static_parity` returning the parity operator ``P``.

Two time-dependent scenarios solve the time-dependent Dyson equation
``h = eta H eta^-1 + i eta_dot eta^-1`` in closed form:

    - `build_scenario_41`, a diagonal Dyson map driven by
      ``delta(t) = int_0^t tau_i``, free functions ``alpha_r, mu_r, tau_i``,
    - `build_scenario_42`, a non-diagonal Dyson map ``eta = -2c1 I + c1 m
      (sigma_z + i sigma_y)`` with ``m = mu_i/alpha_r``, free functions
      ``alpha_r, mu_i, tau_i``.

Both return a `ScenarioSolution`: the completed parameter path together with
``eta(t)``, ``rho(t) = eta^+ eta`` and ``h(t)``. Every solution is validated
by substituting it back into the Dyson equation.

Units have ``hbar = 1``.
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
import enum
import logging
import math
import typing
import warnings

import numpy
import scipy.integrate

import TDNonHermitian.Linalg as Linalg
import TDNonHermitian.Tolerances as Tolerances
from TDNonHermitian.ExprPath import as_expression
from TDNonHermitian.Util import max_abs
from TDNonHermitian.Errors import ConstraintViolationError, ScenarioError, QuadratureError

logger = logging.getLogger(__name__)

#############################################################################
_std_component_triples = [
    ( 'alpha_r', "Real part of the sigma_x coefficient", 0.0 ),
    ( 'alpha_i', "Imaginary part of the sigma_x coefficient", 0.0 ),
    ( 'mu_r', "Real part of the sigma_y coefficient", 0.0 ),
    ( 'mu_i', "Imaginary part of the sigma_y coefficient", 0.0 ),
    ( 'tau_r', "Real part of the sigma_z coefficient", 0.0 ),
    ( 'tau_i', "Imaginary part of the sigma_z coefficient", 0.0 ),
]
"""Components of a parameter path. This is for internal use, it IS **NOT a
part of public API**"""

COMPONENTS = tuple(t[0] for t in _std_component_triples)

KIND_STATIC = 'static'
KIND_DYSON41 = 'dyson41'
KIND_DYSON42 = 'dyson42'

CONVENTION_MATRIX = 'matrix'
CONVENTION_SINH_COSH = 'sinh-cosh'
CONVENTIONS = (CONVENTION_MATRIX, CONVENTION_SINH_COSH)

#############################################################################
def _grid_times(grid):
    if grid is None:
        return numpy.zeros(1)
    return numpy.atleast_1d(numpy.asarray(getattr(grid, 'times', grid), dtype = float))

#############################################################################
@dataclasses.dataclass(frozen = True)
class ParameterPath(object):
    """Time-dependent coefficients ``q(t) = (omega, alpha(t), mu(t), tau(t))``.

    Components are callables of time. Use `from_components` to build a path
    from expression text or numbers.
    """
    omega : float = 0.0
    alpha_r : typing.Callable = None
    alpha_i : typing.Callable = None
    mu_r : typing.Callable = None
    mu_i : typing.Callable = None
    tau_r : typing.Callable = None
    tau_i : typing.Callable = None
    static_pt : bool = False

    @classmethod
    def from_components(cls, omega = 0.0, static_pt = False, **components):
        """Create a path, coercing each component with
        `TDNonHermitian.ExprPath.as_expression`.

        :Raises:
            TypeError
                on an unknown component name
        """
        for name in components:
            if name not in COMPONENTS:
                raise TypeError("unknown path component %r" % name)
        kw = dict()
        for name, desc, default in _std_component_triples:
            value = components.get(name, default)
            kw[name] = value if _is_callable_component(value) else as_expression(value)
        return cls(omega = float(omega), static_pt = bool(static_pt), **kw)

    def component(self, name, t):
        return float(getattr(self, name)(t))

    def values(self, t):
        """Return ``{name: value}`` of all components at time `t`"""
        return dict((name, self.component(name, t)) for name in COMPONENTS)

    def coefficients(self, t):
        """Return the complex ``(alpha, mu, tau)`` at time `t`"""
        v = self.values(t)
        return (complex(v['alpha_r'], v['alpha_i']),
                complex(v['mu_r'], v['mu_i']),
                complex(v['tau_r'], v['tau_i']))

    def closure_residual(self, t0, t1):
        """Max difference of the components between `t0` and `t1`"""
        v0 = self.values(t0)
        v1 = self.values(t1)
        return max(abs(v1[n] - v0[n]) for n in COMPONENTS)

    def is_closed(self, t0, t1, tolerances = None):
        tols = Tolerances.resolve(tolerances)
        return self.closure_residual(t0, t1) <= tols['closed_path']

    def replace(self, **kw):
        return dataclasses.replace(self, **kw)

def _is_callable_component(value):
    return callable(value) and not isinstance(value, type)

#############################################################################
def hamiltonian(path, t):
    """Return ``H(t) = -1/2 [omega I + alpha sigma_x + mu sigma_y + tau sigma_z]``.

    :Raises:
        ExprDomainError
            when a component cannot be evaluated at `t`
    """
    alpha, mu, tau = path.coefficients(t)
    return -0.5 * (path.omega * Linalg.IDENTITY2 + alpha * Linalg.SIGMA_X
                   + mu * Linalg.SIGMA_Y + tau * Linalg.SIGMA_Z)

#############################################################################
class Regime(enum.Enum):
    SYMMETRIC = 'symmetric'
    EXCEPTIONAL = 'exceptional'
    BROKEN = 'broken'

def static_pt_residual(path, t):
    v = path.values(t)
    return max(abs(v['alpha_r'] * v['alpha_i'] + v['mu_r'] * v['mu_i']), abs(v['tau_r']))

def check_static_pt(path, t, tolerances = None):
    """Raise `ConstraintViolationError` unless ``alpha_r alpha_i = -mu_r
    mu_i`` and ``tau_r = 0`` hold at `t`"""
    tols = Tolerances.resolve(tolerances)
    residual = static_pt_residual(path, t)
    if residual > tols['static_pt']:
        raise ConstraintViolationError("static PT constraints violated at t=%g (residual %.3g)"
                                       % (t, residual), residual)
    return residual

def _require_alpha_r(v, t):
    if v['alpha_r'] == 0.0:
        raise ScenarioError("alpha_r vanishes at t=%g" % t)

def discriminant(path, t, tolerances = None):
    """Return ``(Delta, regime)`` at time `t`.

    ``Delta = (alpha_r^2 + mu_r^2)(alpha_r^2 - mu_i^2) - alpha_r^2 tau_i^2``;
    ``|Delta| <= exceptional`` classifies an exceptional point.

    :Raises:
        ConstraintViolationError
            when the static PT constraints fail at `t`
        ScenarioError
            when ``alpha_r(t) = 0``
    """
    tols = Tolerances.resolve(tolerances)
    check_static_pt(path, t, tols)
    v = path.values(t)
    _require_alpha_r(v, t)
    ar2 = v['alpha_r'] ** 2
    delta = (ar2 + v['mu_r'] ** 2) * (ar2 - v['mu_i'] ** 2) - ar2 * v['tau_i'] ** 2
    if abs(delta) <= tols['exceptional']:
        regime = Regime.EXCEPTIONAL
    elif delta > 0:
        regime = Regime.SYMMETRIC
    else:
        regime = Regime.BROKEN
    return delta, regime

def _pairing_distance(a, b):
    """Distance of two unordered pairs of complex numbers"""
    return min(max(abs(a[0] - b[0]), abs(a[1] - b[1])),
               max(abs(a[0] - b[1]), abs(a[1] - b[0])))

def static_energies(path, t, tolerances = None):
    """Return ``(E_+, E_-) = 1/2 [-omega +- sqrt(Delta)/alpha_r]``.

    The closed form is cross-checked against the eigenvalues of `H` except
    at an exceptional point.

    :Raises:
        ConstraintViolationError
            when the constraints fail or the cross-check exceeds
            ``static_crosscheck``
        ScenarioError
            when ``alpha_r(t) = 0``
    """
    tols = Tolerances.resolve(tolerances)
    delta, regime, energies, residual = static_spectrum(path, t, tols)
    if residual > tols['static_crosscheck'] * max(1.0, abs(energies[0])):
        raise ConstraintViolationError("closed-form energies disagree with the "
                                       "eigensolver at t=%g (residual %.3g)" % (t, residual),
                                       residual)
    return energies

def static_spectrum(path, t, tolerances = None):
    """Return ``(Delta, regime, (E_+, E_-), residual)`` at `t`, where
    ``residual`` is the distance of the closed-form energies from the
    eigensolver (``0`` at an exceptional point, where the eigensolver is not
    trusted). Nothing is raised for a large residual."""
    tols = Tolerances.resolve(tolerances)
    delta, regime = discriminant(path, t, tols)
    root = numpy.sqrt(complex(delta)) / path.component('alpha_r', t)
    energies = (0.5 * (-path.omega + root), 0.5 * (-path.omega - root))
    if regime is Regime.EXCEPTIONAL:
        return delta, regime, energies, 0.0
    return delta, regime, energies, _pairing_distance(energies, Linalg.eigenvalues(hamiltonian(path, t)))

def static_crosscheck_residual(path, t, tolerances = None):
    """Residual of `static_spectrum` relative to ``max(1, |E|)``"""
    delta, regime, energies, residual = static_spectrum(path, t, tolerances)
    return residual / max(1.0, abs(energies[0]))

def static_parity(path, t, tolerances = None):
    """Parity operator ``P = [[0, (alpha_r - i mu_r)/s], [(alpha_r + i mu_r)/s, 0]]``
    with ``s = sqrt(alpha_r^2 + mu_r^2)``.

    :Raises:
        ConstraintViolationError
            when the static PT constraints fail at `t`
        ScenarioError
            when ``alpha_r = mu_r = 0``
    """
    check_static_pt(path, t, tolerances)
    ar = path.component('alpha_r', t)
    mr = path.component('mu_r', t)
    s = math.hypot(ar, mr)
    if s == 0.0:
        raise ScenarioError("parity operator undefined for alpha_r = mu_r = 0 (t=%g)" % t)
    return numpy.array([[0.0, complex(ar, -mr) / s], [complex(ar, mr) / s, 0.0]])

def parity_residuals(path, t, tolerances = None):
    """Return ``(max|P H - H^+ P|, max|P^2 - I|)`` of `static_parity`"""
    p = static_parity(path, t, tolerances)
    h = hamiltonian(path, t)
    return (max_abs(p @ h - Linalg.dagger(h) @ p), max_abs(p @ p - Linalg.IDENTITY2))

#############################################################################
@dataclasses.dataclass(frozen = True)
class ScenarioConstants(object):
    """Integration constants ``c1, c2`` and the frequency ``omega``"""
    c1 : float
    c2 : float = 0.0
    omega : float = 0.0

#############################################################################
class ScenarioSolution(object):
    """Closed-form solution of the time-dependent Dyson equation.

    Subclasses provide `eta`, `eta_dot`, `h` and `derived`. Instances are
    immutable apart from internal caches.
    """
    kind = None

    def __init__(self, path, constants):
        self._path = path
        self._constants = constants

    @property
    def path(self):
        """The completed `ParameterPath`"""
        return self._path

    @property
    def constants(self):
        return self._constants

    def hamiltonian(self, t):
        return hamiltonian(self._path, t)

    def eta(self, t):
        raise NotImplementedError

    def eta_dot(self, t):
        raise NotImplementedError

    def h(self, t):
        raise NotImplementedError

    def derived(self, t):
        """Scalar the solution is driven by (``delta`` or ``A``)"""
        raise NotImplementedError

    def rho(self, t):
        eta = self.eta(t)
        return Linalg.dagger(eta) @ eta

    def rho_dot(self, t):
        eta = self.eta(t)
        eta_dot = self.eta_dot(t)
        return Linalg.dagger(eta_dot) @ eta + Linalg.dagger(eta) @ eta_dot

    def instantaneous_energies(self, t):
        """Eigenvalues of ``h(t)`` in descending order; the energy operator
        is similar to ``h`` and shares them"""
        return numpy.linalg.eigvalsh(self.h(t))[::-1].astype(complex)

    def dyson_residual(self, t, finite_difference = False, h = None):
        """Return ``max|eta H eta^-1 + i eta_dot eta^-1 - h|`` at `t`.

        :Parameters:
            finite_difference : bool
                take ``eta_dot`` from a central difference of ``eta``
                instead of its closed form
        """
        eta = self.eta(t)
        if finite_difference:
            eta_dot = Linalg.operator_time_derivative(self.eta, t, h)
        else:
            eta_dot = self.eta_dot(t)
        eta_inv = Linalg.inverse(eta)
        lhs = eta @ self.hamiltonian(t) @ eta_inv + 1j * eta_dot @ eta_inv
        return max_abs(lhs - self.h(t))

    def h_hermiticity_residual(self, t):
        return Linalg.hermiticity_residual(self.h(t))

    def validate(self, grid = None, tolerances = None):
        """Check the Dyson equation and Hermiticity of ``h`` on `grid`.

        :Returns:
            dict with the max ``dyson_residual`` and ``h_hermiticity``
        :Raises:
            ConstraintViolationError
                when a residual exceeds the ``constraint`` tolerance
        """
        tols = Tolerances.resolve(tolerances)
        dyson = 0.0
        herm = 0.0
        for t in _grid_times(grid):
            dyson = max(dyson, self.dyson_residual(t))
            herm = max(herm, self.h_hermiticity_residual(t))
        worst = max(dyson, herm)
        if not worst <= tols['constraint']:
            raise ConstraintViolationError("%s solution fails the Dyson equation "
                                           "(residual %.3g)" % (self.kind, worst), worst)
        return {'dyson_residual' : dyson, 'h_hermiticity' : herm}

#############################################################################
class _DeltaIntegral(object):
    """``delta(t) = int_0^t tau_i(s) ds``; every computed `t` stays cached
    for the lifetime of the solution"""

    def __init__(self, tau_i, tolerance):
        self._tau_i = tau_i
        self._tolerance = tolerance
        self._cache = dict()
        if tau_i.is_constant():
            self._rate = float(tau_i(0.0))
        else:
            self._rate = None

    def __call__(self, t):
        if numpy.ndim(t):
            return numpy.array([self(s) for s in numpy.ravel(t)]).reshape(numpy.shape(t))
        t = float(t)
        if self._rate is not None:
            return self._rate * t
        try:
            return self._cache[t]
        except KeyError:
            pass
        with warnings.catch_warnings():
            warnings.simplefilter('error', scipy.integrate.IntegrationWarning)
            try:
                value, abserr = scipy.integrate.quad(self._tau_i, 0.0, t,
                                                     epsabs = self._tolerance,
                                                     epsrel = 1e-12, limit = 200)
            except scipy.integrate.IntegrationWarning as e:
                raise QuadratureError("integral of tau_i over [0, %g] failed: %s" % (t, e))
        self._cache[t] = value
        return value

def _exp_delta(x, t):
    try:
        return math.exp(x)
    except OverflowError:
        raise ScenarioError("diagonal Dyson map overflows at t=%g (exponent %.6g); "
                            "tau_i integrates to a value too large" % (t, x))

class Scenario41Solution(ScenarioSolution):
    """Diagonal Dyson map ``eta = diag(a, b)``.

    ``a = (c1 + c2) exp(delta/2)``; ``b = (c1 - c2) exp(-delta/2)`` for the
    ``'matrix'`` convention and ``b = (c2 - c1) exp(-delta/2)`` for the
    ``'sinh-cosh'`` one. The two maps produce the same `H` and mirror images
    of ``h``.
    """
    kind = KIND_DYSON41

    def __init__(self, path, constants, delta, convention):
        super(Scenario41Solution, self).__init__(path, constants)
        self._delta = delta
        self._convention = convention

    @property
    def convention(self):
        return self._convention

    def derived(self, t):
        return self._delta(t)

    def delta(self, t):
        return self._delta(t)

    def _diagonal(self, t):
        c1, c2 = self._constants.c1, self._constants.c2
        d = self._delta(t)
        a = (c1 + c2) * _exp_delta(0.5 * d, t)
        if self._convention == CONVENTION_MATRIX:
            b = (c1 - c2) * _exp_delta(-0.5 * d, t)
        else:
            b = (c2 - c1) * _exp_delta(-0.5 * d, t)
        return a, b

    def eta(self, t):
        a, b = self._diagonal(t)
        return numpy.diag([a, b]).astype(complex)

    def eta_dot(self, t):
        tau = float(self._path.tau_i(t))
        a, b = self._diagonal(t)
        return numpy.diag([0.5 * tau * a, -0.5 * tau * b]).astype(complex)

    def _denominator(self, t):
        c1, c2 = self._constants.c1, self._constants.c2
        d = self._delta(t)
        return 4.0 * c1 * c2 * math.sinh(d) + 2.0 * (c1 * c1 + c2 * c2) * math.cosh(d)

    def h(self, t):
        a, b = self._diagonal(t)
        ar = self._path.component('alpha_r', t)
        mr = self._path.component('mu_r', t)
        off = -a * b * complex(ar, -mr) / (a * a + b * b)
        w = -0.5 * self._constants.omega
        return numpy.array([[w, off], [numpy.conj(off), w]])

    def reference_h(self, t):
        """``h`` with the off-diagonal sign of the ``'sinh-cosh'`` map,
        written through ``4 c1 c2 sinh(delta) + 2 (c1^2 + c2^2) cosh(delta)``"""
        c1, c2 = self._constants.c1, self._constants.c2
        ar = self._path.component('alpha_r', t)
        mr = self._path.component('mu_r', t)
        off = (c1 * c1 - c2 * c2) * complex(ar, -mr) / self._denominator(t)
        w = -0.5 * self._constants.omega
        return numpy.array([[w, off], [numpy.conj(off), w]])

    def metric_closed_form(self, t):
        """``rho = diag((c1 + c2)^2 e^delta, (c1 - c2)^2 e^-delta)``"""
        c1, c2 = self._constants.c1, self._constants.c2
        d = self._delta(t)
        return numpy.diag([(c1 + c2) ** 2 * _exp_delta(d, t), (c1 - c2) ** 2 * _exp_delta(-d, t)]).astype(complex)

    def closed_form_energies(self, t):
        """Energies with the ``sqrt(2)`` prefactor of the reference form, in descending
        order; kept for comparison with `instantaneous_energies`"""
        c1, c2 = self._constants.c1, self._constants.c2
        ar = self._path.component('alpha_r', t)
        mr = self._path.component('mu_r', t)
        e = math.sqrt(2.0) * (c1 * c1 - c2 * c2) * math.hypot(ar, mr) / self._denominator(t)
        w = -0.5 * self._constants.omega
        return numpy.array(sorted([w + e, w - e], reverse = True), dtype = complex)

    def energy_discrepancy(self, t):
        return max_abs(self.closed_form_energies(t) - self.instantaneous_energies(t))

#############################################################################
def _free_expressions(free, names):
    missing = [n for n in names if n not in free]
    if missing:
        raise ScenarioError("missing free function(s): %s" % ', '.join(missing))
    unknown = [n for n in free if n not in names]
    if unknown:
        raise ScenarioError("unexpected free function(s): %s" % ', '.join(sorted(unknown)))
    return dict((n, as_expression(free[n])) for n in names)

def adjudicate_reference_h(solution, t):
    """Residuals of the reference ``h`` against the Dyson equation for each
    convention of the scenario-4.1 map.

    :Returns:
        dict ``{convention: residual}``
    """
    result = dict()
    for convention in CONVENTIONS:
        candidate = Scenario41Solution(solution.path, solution.constants, solution._delta, convention)
        eta = candidate.eta(t)
        eta_inv = Linalg.inverse(eta)
        lhs = eta @ candidate.hamiltonian(t) @ eta_inv + 1j * candidate.eta_dot(t) @ eta_inv
        result[convention] = max_abs(lhs - solution.reference_h(t))
    return result

def build_scenario_41(free, consts, grid = None, convention = CONVENTION_MATRIX, tolerances = None):
    """Build the diagonal Dyson-map scenario.

    :Parameters:
        free : dict
            ``alpha_r``, ``mu_r`` and ``tau_i`` as expressions, text or numbers
        consts : `ScenarioConstants`
            ``c1^2 != c2^2`` is required
        grid
            `TDNonHermitian.Evolution.TimeGrid` or array of times the
            solution is validated on; ``t = 0`` when ``None``
        convention : str
            ``'matrix'`` or ``'sinh-cosh'``
    :Returns:
        `Scenario41Solution`; its path has ``mu_i = alpha_r (1 - r^2)/(1 + r^2)``,
        ``alpha_i = mu_r (r^2 - 1)/(1 + r^2)`` and ``tau_r = 0`` where ``r = a/b``
    :Raises:
        ScenarioError
            inadmissible constants, convention or free functions
        QuadratureError
            when ``delta(t)`` cannot be integrated
        ConstraintViolationError
            when the Dyson equation fails on `grid`
    """
    tols = Tolerances.resolve(tolerances)
    if convention not in CONVENTIONS:
        raise ScenarioError("unknown Dyson-map convention %r" % convention)
    c1, c2 = float(consts.c1), float(consts.c2)
    if abs(c1 * c1 - c2 * c2) == 0.0:
        raise ScenarioError("c1^2 = c2^2 makes the metric singular")
    exprs = _free_expressions(free, ('alpha_r', 'mu_r', 'tau_i'))
    alpha_r, mu_r = exprs['alpha_r'], exprs['mu_r']
    delta = _DeltaIntegral(exprs['tau_i'], tols['quadrature'])
    ratio2 = ((c1 + c2) / (c1 - c2)) ** 2

    def r2(t):
        return ratio2 * _exp_delta(2.0 * delta(t), t)

    def mu_i(t):
        q = r2(t)
        return float(alpha_r(t)) * (1.0 - q) / (1.0 + q)

    def alpha_i(t):
        q = r2(t)
        return float(mu_r(t)) * (q - 1.0) / (1.0 + q)

    path = ParameterPath(omega = float(consts.omega), alpha_r = alpha_r, alpha_i = alpha_i,
                         mu_r = mu_r, mu_i = mu_i, tau_r = as_expression(0.0),
                         tau_i = exprs['tau_i'], static_pt = True)
    solution = Scenario41Solution(path, consts, delta, convention)

    times = _grid_times(grid)
    verdict = adjudicate_reference_h(solution, times[0])
    matching = min(verdict, key = lambda c : verdict[c])
    logger.info("reference Hermitian Hamiltonian solves the Dyson equation for the %r map "
                "(residuals %s); using the %r map", matching,
                ', '.join("%s=%.3g" % (c, verdict[c]) for c in CONVENTIONS), convention)
    discrepancy = solution.energy_discrepancy(times[0])
    if discrepancy > tols['closed_form_energy']:
        logger.warning("closed-form instantaneous energies differ from the eigensolver "
                       "by %.3g at t=%g; reporting eigensolver values", discrepancy, times[0])
    solution.validate(times, tols)
    return solution

#############################################################################
class Scenario42Solution(ScenarioSolution):
    """Non-diagonal Dyson map ``eta = c1 [[m - 2, m], [-m, -m - 2]]`` with
    ``m = mu_i/alpha_r``"""
    kind = KIND_DYSON42

    def _m_dual(self, t):
        ar = self._path.alpha_r.dual(t)
        mi = self._path.mu_i.dual(t)
        m = mi.value / ar.value
        m_dot = (mi.derivative * ar.value - mi.value * ar.derivative) / (ar.value * ar.value)
        return m, m_dot

    def m(self, t):
        return self._m_dual(t)[0]

    def derived(self, t):
        return self.A(t)

    def A(self, t):
        """``A = tau_i alpha_r^2/mu_i^2 - alpha_r_dot/mu_i + alpha_r mu_i_dot/mu_i^2``"""
        return _constraint_a(self._path.alpha_r, self._path.mu_i, self._path.tau_i, t)

    def eta(self, t):
        c1 = self._constants.c1
        m = self.m(t)
        return c1 * numpy.array([[m - 2.0, m], [-m, -m - 2.0]], dtype = complex)

    def eta_dot(self, t):
        c1 = self._constants.c1
        m_dot = self._m_dual(t)[1]
        return c1 * m_dot * numpy.array([[1.0, 1.0], [-1.0, -1.0]], dtype = complex)

    def h(self, t):
        ar = self._path.component('alpha_r', t)
        a = self.A(t)
        w = -0.5 * self._constants.omega
        return numpy.array([[w, complex(-0.5 * ar, -a)], [complex(-0.5 * ar, a), w]])

    def metric_closed_form(self, t):
        c1 = self._constants.c1
        m = self.m(t)
        return 2.0 * c1 * c1 * numpy.array([[m * m - 2.0 * m + 2.0, m * m],
                                            [m * m, m * m + 2.0 * m + 2.0]], dtype = complex)

    def metric_eigenvalues(self, t):
        """``2 c1^2 (m^2 + 2 +- |m| sqrt(m^2 + 4))`` in descending order"""
        c1 = self._constants.c1
        m = self.m(t)
        root = abs(m) * math.sqrt(m * m + 4.0)
        return numpy.array([2.0 * c1 * c1 * (m * m + 2.0 + root),
                            2.0 * c1 * c1 * (m * m + 2.0 - root)])

    def closed_form_energies(self, t):
        """``1/2 (-omega +- sqrt(4 A^2 + alpha_r^2))``"""
        ar = self._path.component('alpha_r', t)
        root = math.sqrt(4.0 * self.A(t) ** 2 + ar * ar)
        return numpy.array([0.5 * (-self._constants.omega + root),
                            0.5 * (-self._constants.omega - root)], dtype = complex)

def _constraint_a(alpha_r, mu_i, tau_i, t):
    ar = alpha_r.dual(t)
    mi = mu_i.dual(t)
    tau = float(tau_i(t))
    return (tau * ar.value ** 2 / mi.value ** 2 - ar.derivative / mi.value
            + ar.value * mi.derivative / mi.value ** 2)

def build_scenario_42(free, consts, grid = None, tolerances = None):
    """Build the non-diagonal Dyson-map scenario.

    :Parameters:
        free : dict
            ``alpha_r``, ``mu_i`` and ``tau_i`` as expressions, text or numbers
        consts : `ScenarioConstants`
            ``c1 != 0`` is required, ``c2`` is ignored
        grid
            times the solution is validated on; ``t = 0`` when ``None``
    :Returns:
        `Scenario42Solution`; its path has ``mu_r = -tau_i - 2A``,
        ``alpha_i = 2 (mu_i/alpha_r) A`` and ``tau_r = mu_i``
    :Raises:
        ScenarioError
            ``c1 = 0``, or ``mu_i`` or ``alpha_r`` vanishing on `grid`
        ConstraintViolationError
            when the Dyson equation fails on `grid`
    """
    tols = Tolerances.resolve(tolerances)
    if float(consts.c1) == 0.0:
        raise ScenarioError("c1 = 0 makes the Dyson map singular")
    exprs = _free_expressions(free, ('alpha_r', 'mu_i', 'tau_i'))
    alpha_r, mu_i, tau_i = exprs['alpha_r'], exprs['mu_i'], exprs['tau_i']
    times = _grid_times(grid)
    for name in ('alpha_r', 'mu_i'):
        values = numpy.asarray(exprs[name](times))
        if numpy.any(values == 0.0):
            t = times[int(numpy.argmax(values == 0.0))]
            raise ScenarioError("%s vanishes at t=%g, the constraint A(t) is undefined" % (name, t))

    def mu_r(t):
        return -float(tau_i(t)) - 2.0 * _constraint_a(alpha_r, mu_i, tau_i, t)

    def alpha_i(t):
        return 2.0 * float(mu_i(t)) / float(alpha_r(t)) * _constraint_a(alpha_r, mu_i, tau_i, t)

    path = ParameterPath(omega = float(consts.omega), alpha_r = alpha_r, alpha_i = alpha_i,
                         mu_r = mu_r, mu_i = mu_i, tau_r = mu_i, tau_i = tau_i, static_pt = False)
    solution = Scenario42Solution(path, consts)
    solution.validate(times, tols)
    return solution

#############################################################################
def build_scenario(kind, free, consts, grid = None, convention = CONVENTION_MATRIX, tolerances = None):
    """Dispatch to `build_scenario_41` or `build_scenario_42` by `kind`"""
    if kind == KIND_DYSON41:
        return build_scenario_41(free, consts, grid, convention, tolerances)
    elif kind == KIND_DYSON42:
        return build_scenario_42(free, consts, grid, tolerances)
    raise ScenarioError("unknown scenario kind %r" % kind)

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
