"""`TDNonHermitian.Cli`

Config-driven runner for the analytic scenarios.

**General Description**

A scenario is described by an INI file read with `configparser`. The
accepted keys, their descriptions and defaults are declared in one table
(`Names`, `Declarations`), the same way tolerances are. Expressions may be
quoted. Example:

.. code-block:: ini

    [scenario]
    kind = dyson41
    c1 = 2
    c2 = 1

    [expressions]
    alpha_r = "1"
    mu_r = "0.1*sin(2*pi*t)"
    tau_i = "2"

    [grid]
    t0 = 0
    t1 = 1
    steps = 5000

    [tolerances]
    energy_reality = 1e-10

Subcommands:

    run <config> [--csv PATH] [--report PATH] [--tol NAME=VALUE]...
        compute the time series and all configured checks, write the CSV,
        a text report and its JSON mirror ``<report>.json``
    verify <config> [--report PATH] [--tol NAME=VALUE]...
        checks only, no CSV
    regimes <config> [--csv PATH]
        map the static PT regime over two parameters

Exit status is 0 when all checks pass, 1 when some check fails and 2 on a
configuration or runtime error.
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

import argparse
import collections
import configparser
import csv
import dataclasses
import logging
import os
import re
import sys
import typing

import numpy

import TDNonHermitian.Evolution as Evolution
import TDNonHermitian.Linalg as Linalg
import TDNonHermitian.Model as Model
import TDNonHermitian.Operators as Operators
import TDNonHermitian.Tolerances as Tolerances
import TDNonHermitian.Util as Util
from TDNonHermitian.ExprPath import Expression
from TDNonHermitian.Util import max_abs, phase_distance
from TDNonHermitian.Errors import (TDNonHermitianError, ConfigError, ExprError, UnknownToleranceError,
                                   UndefinedAngleError, IntegrationInstabilityError)

logger = logging.getLogger(__name__)

_script = 'tdnh'

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

class _Undefined(object):
    def __repr__(self):
        return 'UNDEFINED'

UNDEFINED = _Undefined()
"""Default of a key that must be given in the config file"""

#############################################################################
_std_key_triples = [
    ( 'scenario.kind',        "Scenario kind: static, dyson41 or dyson42",                   UNDEFINED ),
    ( 'scenario.omega',       "Frequency omega of the identity term",                        '0' ),
    ( 'scenario.c1',          "Integration constant c1 of the Dyson map",                    '1' ),
    ( 'scenario.c2',          "Integration constant c2 of the Dyson map (dyson41)",          '0' ),
    ( 'scenario.static_pt',   "Whether a static path obeys the PT constraints (static)",     'yes' ),
    ( 'scenario.convention',  "Dyson-map convention of dyson41: matrix or sinh-cosh",        Model.CONVENTION_MATRIX ),
    ( 'expressions.alpha_r',  "Expression of alpha_r(t)",                                    '0' ),
    ( 'expressions.alpha_i',  "Expression of alpha_i(t)",                                    '0' ),
    ( 'expressions.mu_r',     "Expression of mu_r(t)",                                       '0' ),
    ( 'expressions.mu_i',     "Expression of mu_i(t)",                                       '0' ),
    ( 'expressions.tau_r',    "Expression of tau_r(t)",                                      '0' ),
    ( 'expressions.tau_i',    "Expression of tau_i(t)",                                      '0' ),
    ( 'grid.t0',              "Start of the time grid",                                      '0' ),
    ( 'grid.t1',              "End of the time grid",                                        '1' ),
    ( 'grid.steps',           "Number of grid intervals",                                    '1000' ),
    ( 'signatures.levels',    "Comma separated signs of C~ by descending energy, e.g. +,-",  '' ),
    ( 'checks.run',           "Comma separated checks; empty selects the scenario defaults", '' ),
    ( 'output.csv',           "CSV output path",                                             '' ),
    ( 'output.report',        "Report output path; the JSON mirror goes next to it",         '' ),
    ( 'regimes.x',            "First parameter of the regime map",                           'alpha_r' ),
    ( 'regimes.x_min',        "Lower bound of the first parameter",                          '-2' ),
    ( 'regimes.x_max',        "Upper bound of the first parameter",                          '2' ),
    ( 'regimes.x_steps',      "Number of intervals of the first parameter",                  '40' ),
    ( 'regimes.y',            "Second parameter of the regime map",                          'tau_i' ),
    ( 'regimes.y_min',        "Lower bound of the second parameter",                         '-2' ),
    ( 'regimes.y_max',        "Upper bound of the second parameter",                         '2' ),
    ( 'regimes.y_steps',      "Number of intervals of the second parameter",                 '40' ),
    ( 'regimes.t',            "Time the remaining expressions are evaluated at; empty means grid.t0", '' ),
]
"""Keys of a scenario config. This is for internal use, it IS **NOT a part
of public API**"""

_TOLERANCES_SECTION = 'tolerances'

FREE_FUNCTIONS = {
    Model.KIND_STATIC : Model.COMPONENTS,
    Model.KIND_DYSON41 : ('alpha_r', 'mu_r', 'tau_i'),
    Model.KIND_DYSON42 : ('alpha_r', 'mu_i', 'tau_i'),
}

_dyson_checks = (
    'dyson_residual', 'h_hermiticity', 'quasi_hermiticity', 'metric_ode_residual',
    'metric_ode_integration', 'c_tilde_involution', 'c_tilde_commutator',
    'p_tilde_hermiticity', 'c_from_p', 'rho_orthonormality', 'ptrel_intertwining',
    'ptrel_eigenmap', 'ptrel_alpha_real', 'ptrel_hermiticity', 'energy_reality',
)
_berry_checks = ('berry_imag', 'berry_hermitian_agreement', 'berry_closed_form', 'norm_conservation')

DEFAULT_CHECKS = {
    Model.KIND_STATIC : ('static_crosscheck', 'parity_intertwining', 'parity_involution'),
    Model.KIND_DYSON41 : _dyson_checks + ('c_hat_involution',) + _berry_checks,
    Model.KIND_DYSON42 : _dyson_checks + _berry_checks,
}

AVAILABLE_CHECKS = {
    Model.KIND_STATIC : DEFAULT_CHECKS[Model.KIND_STATIC],
    Model.KIND_DYSON41 : DEFAULT_CHECKS[Model.KIND_DYSON41] + ('c_hat_evolution', 'adiabatic_deviation'),
    Model.KIND_DYSON42 : DEFAULT_CHECKS[Model.KIND_DYSON42] + ('adiabatic_deviation',),
}

REGIME_AXES = ('alpha_r', 'mu_r', 'mu_i', 'tau_i')

#############################################################################
def Names(name_filter = lambda x : True):
    """Return list of config keys (``section.key``).

    :Parameters:
        name_filter : callable | sequence
            callable object (e.g. lambda) of type ``name_filter(name) ->
            boolean`` used to filter-out unwanted keys
    """
    return Util.names_from_triples(_std_key_triples, name_filter)

def Declarations(**kw):
    """Return list of `TDNonHermitian.Util.Declaration` of config keys.

    :Keywords:
        defaults : dict
            values overriding the declared defaults,
        name_filter : callable | sequence
            filter on key names.
    """
    return Util.declarations_from_triples(_std_key_triples, **kw)

def _sections():
    return sorted(set(n.split('.', 1)[0] for n in Names()) | set([_TOLERANCES_SECTION]))

#############################################################################
@dataclasses.dataclass(frozen = True)
class RegimeSettings(object):
    """Axes of the static regime map"""
    x : str
    x_min : float
    x_max : float
    x_steps : int
    y : str
    y_min : float
    y_max : float
    y_steps : int
    t : float

    def axis(self, which):
        lo, hi, steps = [getattr(self, '%s_%s' % (which, k)) for k in ('min', 'max', 'steps')]
        return numpy.linspace(lo, hi, steps + 1)

@dataclasses.dataclass(frozen = True)
class ScenarioConfig(object):
    """A validated scenario configuration, see `load_config`"""
    path : str
    kind : str
    constants : Model.ScenarioConstants
    static_pt : bool
    convention : str
    expressions : typing.Mapping
    grid : Evolution.TimeGrid
    signatures : typing.Optional[tuple]
    tolerances : Tolerances.ToleranceSet
    checks : tuple
    csv : typing.Optional[str] = None
    report : typing.Optional[str] = None
    regimes : typing.Optional[RegimeSettings] = None

    def free_expressions(self):
        """Expressions of the free functions of the scenario kind"""
        return collections.OrderedDict((n, self.expressions[n]) for n in FREE_FUNCTIONS[self.kind])

    def static_path(self):
        return Model.ParameterPath.from_components(self.constants.omega, self.static_pt,
                                                   **self.expressions)

    def overridden(self, tolerances):
        """Return a copy with tolerances replaced from the ``{name: value}``
        mapping `tolerances`"""
        return dataclasses.replace(self, tolerances = self.tolerances.overridden(**dict(tolerances)))

#############################################################################
_header_re = re.compile(r'^\s*\[([^\]]+)\]')
_option_re = re.compile(r'^\s*([^=:\s][^=:]*?)\s*[=:]')

def _locate(lines, section, key = None):
    """1-based line of ``[section]`` or of `key` inside it"""
    current = None
    for number, line in enumerate(lines, 1):
        m = _header_re.match(line)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return number
            continue
        if key is not None and current == section:
            m = _option_re.match(line)
            if m and m.group(1).strip().lower() == key:
                return number
    return None

def _unquote(text):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in '"\'':
        return text[1:-1]
    return text

class _Reader(object):
    """Typed access to a parsed config with file/line context on errors"""

    def __init__(self, parser, path, lines):
        self.parser = parser
        self.path = path
        self.lines = lines
        self.decls = dict((d.name, d) for d in Declarations())

    def error(self, message, name):
        section, sep, key = name.partition('.')
        line = _locate(self.lines, section, key or None)
        return ConfigError(message, self.path, line, name)

    def given(self, name):
        section, key = name.split('.', 1)
        return self.parser.has_option(section, key)

    def text(self, name):
        section, key = name.split('.', 1)
        if self.parser.has_option(section, key):
            return _unquote(self.parser.get(section, key))
        default = self.decls[name].default
        if default is UNDEFINED:
            raise ConfigError("missing required key", self.path, _locate(self.lines, section), name)
        return default

    def number(self, name, convert = float):
        text = self.text(name)
        try:
            value = convert(text)
        except ValueError:
            raise self.error("expected a number, got %r" % text, name)
        if not Util.is_finite_number(value):
            raise self.error("expected a finite number, got %r" % text, name)
        return value

    def boolean(self, name):
        text = self.text(name).lower()
        if text not in configparser.ConfigParser.BOOLEAN_STATES:
            raise self.error("expected a boolean, got %r" % text, name)
        return configparser.ConfigParser.BOOLEAN_STATES[text]

    def choice(self, name, choices):
        text = self.text(name)
        if text not in choices:
            raise self.error("expected one of %s, got %r" % (', '.join(choices), text), name)
        return text

    def listing(self, name):
        return [s.strip() for s in self.text(name).split(',') if s.strip()]

def _parse_file(path):
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError("cannot read configuration (%s)" % (e.strerror or e), path)
    parser = configparser.ConfigParser(interpolation = None)
    try:
        parser.read_string(text, source = path)
    except configparser.ParsingError as e:
        raise ConfigError("malformed line %s" % e.errors[0][1], path, e.errors[0][0])
    except configparser.Error as e:
        raise ConfigError(e.message, path, getattr(e, 'lineno', None))
    return parser, text.splitlines()

def _check_keys(reader):
    known = set(Names())
    lines = reader.lines
    if reader.parser.defaults():
        raise ConfigError("a [DEFAULT] section is not supported", reader.path,
                          _locate(lines, reader.parser.default_section))
    for section in reader.parser.sections():
        if section not in _sections():
            raise ConfigError("unknown section [%s]" % section, reader.path, _locate(lines, section))
        for key in reader.parser.options(section):
            if section == _TOLERANCES_SECTION:
                if key not in Tolerances.Names():
                    raise reader.error("unknown tolerance", '%s.%s' % (section, key))
            elif '%s.%s' % (section, key) not in known:
                raise reader.error("unknown key", '%s.%s' % (section, key))

def _read_expressions(reader, kind):
    exprs = collections.OrderedDict()
    free = FREE_FUNCTIONS[kind]
    for name in Model.COMPONENTS:
        key = 'expressions.%s' % name
        if reader.given(key) and name not in free:
            raise reader.error("%s is determined by the %s scenario and cannot be given"
                               % (name, kind), key)
        try:
            exprs[name] = Expression.parse(reader.text(key))
        except ExprError as e:
            raise reader.error(str(e), key)
    return exprs

def _read_tolerances(reader):
    values = dict()
    if reader.parser.has_section(_TOLERANCES_SECTION):
        for key in reader.parser.options(_TOLERANCES_SECTION):
            values[key] = reader.number('%s.%s' % (_TOLERANCES_SECTION, key))
    try:
        return Tolerances.Declarations(defaults = values)
    except ValueError as e:
        raise ConfigError(str(e), reader.path, _locate(reader.lines, _TOLERANCES_SECTION))

def _read_grid(reader):
    t0 = reader.number('grid.t0')
    t1 = reader.number('grid.t1')
    steps = reader.number('grid.steps', int)
    try:
        return Evolution.TimeGrid(t0, t1, steps)
    except ValueError as e:
        raise reader.error(str(e), 'grid.t1' if steps >= 2 else 'grid.steps')

def _read_signatures(reader):
    levels = reader.listing('signatures.levels')
    if not levels:
        return None
    signs = {'+' : 1, '-' : -1}
    if len(levels) != 2 or any(s not in signs for s in levels):
        raise reader.error("expected two signs like '+,-', got %r" % reader.text('signatures.levels'),
                           'signatures.levels')
    return tuple(signs[s] for s in levels)

def _read_checks(reader, kind):
    names = reader.listing('checks.run')
    if not names:
        return DEFAULT_CHECKS[kind]
    for name in names:
        if name not in AVAILABLE_CHECKS[kind]:
            raise reader.error("check %r is not available for %s scenarios" % (name, kind), 'checks.run')
    return tuple(collections.OrderedDict.fromkeys(names))

def _read_regimes(reader, grid):
    x = reader.choice('regimes.x', REGIME_AXES)
    y = reader.choice('regimes.y', REGIME_AXES)
    if x == y:
        raise reader.error("the two axes of the regime map must differ", 'regimes.y')
    kw = dict(x = x, y = y)
    for axis in ('x', 'y'):
        for bound in ('min', 'max'):
            kw['%s_%s' % (axis, bound)] = reader.number('regimes.%s_%s' % (axis, bound))
        name = 'regimes.%s_steps' % axis
        kw['%s_steps' % axis] = reader.number(name, int)
        if kw['%s_steps' % axis] < 1:
            raise reader.error("expected at least one interval", name)
        if kw['%s_max' % axis] < kw['%s_min' % axis]:
            raise reader.error("upper bound below lower bound", 'regimes.%s_max' % axis)
    kw['t'] = reader.number('regimes.t') if reader.text('regimes.t') else grid.t0
    return RegimeSettings(**kw)

def _precheck(reader, config):
    consts = config.constants
    if config.kind == Model.KIND_DYSON41:
        if consts.c1 * consts.c1 == consts.c2 * consts.c2:
            raise reader.error("c1^2 = c2^2 makes the metric singular", 'scenario.c1')
    elif config.kind == Model.KIND_DYSON42:
        if consts.c1 == 0.0:
            raise reader.error("c1 = 0 makes the Dyson map singular", 'scenario.c1')
        times = config.grid.times
        for name in ('alpha_r', 'mu_i'):
            try:
                values = numpy.broadcast_to(config.expressions[name](times), times.shape)
            except ExprError as e:
                raise reader.error(str(e), 'expressions.%s' % name)
            if numpy.any(values == 0.0):
                t = times[int(numpy.argmax(values == 0.0))]
                raise reader.error("%s vanishes at t=%g, the constraint A(t) is undefined"
                                   % (name, t), 'expressions.%s' % name)
    elif config.static_pt:
        path = config.static_path()
        for t in config.grid.times:
            residual = Model.static_pt_residual(path, t)
            if residual > config.tolerances['static_pt']:
                raise ConfigError("static PT constraints violated at t=%g (residual %.3g)"
                                  % (t, residual), reader.path, _locate(reader.lines, 'expressions'))

def load_config(path):
    """Read and validate a scenario config.

    All expressions are parsed eagerly; admissibility of the scenario
    constants and free functions is checked on the grid.

    :Returns:
        `ScenarioConfig`
    :Raises:
        ConfigError
            with the file, line and key of the offending entry
    """
    parser, lines = _parse_file(path)
    reader = _Reader(parser, path, lines)
    _check_keys(reader)
    kind = reader.choice('scenario.kind', tuple(FREE_FUNCTIONS))
    constants = Model.ScenarioConstants(reader.number('scenario.c1'), reader.number('scenario.c2'),
                                        reader.number('scenario.omega'))
    grid = _read_grid(reader)
    config = ScenarioConfig(
        path = path,
        kind = kind,
        constants = constants,
        static_pt = reader.boolean('scenario.static_pt'),
        convention = reader.choice('scenario.convention', Model.CONVENTIONS),
        expressions = _read_expressions(reader, kind),
        grid = grid,
        signatures = _read_signatures(reader),
        tolerances = _read_tolerances(reader),
        checks = _read_checks(reader, kind),
        csv = reader.text('output.csv') or None,
        report = reader.text('output.report') or None,
        regimes = _read_regimes(reader, grid),
    )
    _precheck(reader, config)
    return config

#############################################################################
@dataclasses.dataclass(frozen = True)
class RunResult(object):
    """Time series and verification report of a scenario"""
    report : Operators.VerificationReport
    columns : collections.OrderedDict

    @property
    def exit_code(self):
        return EXIT_OK if self.report.passed else EXIT_FAIL

class _Collector(object):
    """Accumulates pointwise residuals into a report and per-check series"""

    def __init__(self, tolerances, size):
        self.report = Operators.VerificationReport(tolerances)
        self.series = collections.OrderedDict()
        self.size = size

    def record(self, name, k, value):
        self.report.record(name, value)
        if name not in self.series:
            self.series[name] = numpy.full(self.size, numpy.nan)
        self.series[name][k] = value

    def merge(self, k, report):
        for c in report:
            self.record(c.name, k, c.residual)

def _nan_array(*shape):
    return numpy.full(shape, numpy.nan)

def _select(report, checks, tolerances):
    """Report with exactly the configured checks, in their order"""
    selected = Operators.VerificationReport(tolerances)
    for name in checks:
        if name not in report:
            selected.skip(name, "not computed for this scenario")
            continue
        c = report[name]
        if c.skipped:
            selected.skip(name, c.reason, c.tolerance)
        else:
            selected.record(name, c.residual, c.tolerance)
    selected.notes.update(report.notes)
    return selected

def _closed_form_berry(kind):
    if kind == Model.KIND_DYSON41:
        return Evolution.closed_form_berry_41
    return Evolution.closed_form_berry_42

def _compute_dyson(config):
    tols = config.tolerances
    grid = config.grid
    times = grid.times
    checks = config.checks
    solution = Model.build_scenario(config.kind, config.free_expressions(), config.constants,
                                    grid, config.convention, tols)
    path = solution.path
    col = _Collector(tols, len(times))
    notes = col.report.notes
    notes['scenario'] = config.kind

    def c_hat_fun(t):
        return Operators.c_hat(Model.static_parity(path, t, tols),
                               Operators.normalize_metric(solution.rho(t)), tols)

    delta = _nan_array(len(times))
    regimes = collections.Counter()
    guarantee = True
    for k, t in enumerate(times):
        col.record('dyson_residual', k, solution.dyson_residual(t))
        col.record('h_hermiticity', k, solution.h_hermiticity_residual(t))
        frame = Operators.frame_from_scenario(solution, t, config.signatures,
                                              'c_hat_involution' in checks, tols)
        col.merge(k, Operators.frame_identities(frame, tols))
        ptrel = Operators.verify_ptrel(frame, tolerances = tols)
        col.merge(k, ptrel)
        guarantee = guarantee and ptrel.notes['guarantee_active']
        col.record('metric_ode_residual', k,
                   Operators.metric_ode_residual(solution.hamiltonian, solution.rho, t))
        if 'c_hat_evolution' in checks:
            col.record('c_hat_evolution', k,
                       Operators.c_hat_evolution_residual(solution.hamiltonian, c_hat_fun, t))
        if config.kind == Model.KIND_DYSON41 and path.component('alpha_r', t) != 0.0:
            delta[k], regime = Model.discriminant(path, t, tols)
            regimes[regime.value] += 1
        if k == 0:
            notes['p_tilde_spectrum'] = Operators.p_tilde_spectrum(frame.p_tilde)
    notes['guarantee_active'] = guarantee
    if regimes:
        notes['static_regimes'] = dict(sorted(regimes.items()))

    metric = Operators.metric_ode_solve(solution.hamiltonian, solution.rho(times[0]), grid, tols)
    for k, t in enumerate(times):
        col.record('metric_ode_integration', k, max_abs(metric.rhos[k] - solution.rho(t)))
    notes['metric_positivity_lost'] = metric.positivity_lost

    energy = lambda t : Operators.energy_operator(solution.hamiltonian(t), solution.eta(t),
                                                  solution.eta_dot(t))
    trajectory = Evolution.eigen_trajectory(energy, solution.rho, grid, tols)
    levels = trajectory.levels
    if trajectory.max_imag_energy() <= tols['energy_reality']:
        alphas = Evolution.dynamical_phase(trajectory, tols)
    else:
        alphas = _nan_array(len(times), levels)

    rates = Evolution.berry_rates(trajectory, solution.eta, solution.eta_dot, tols)
    gammas, gammas_h = Evolution.geometric_phase(rates)
    for k in range(len(times)):
        col.record('berry_imag', k, max_abs(numpy.imag(rates.nonhermitian[k])))
        col.record('berry_hermitian_agreement', k, max_abs(gammas[k] - gammas_h[k]))

    if path.is_closed(times[0], times[-1], tols):
        try:
            loop = Evolution.berry_phase_loop(trajectory, solution.eta, solution.eta_dot, path, tols)
            closed = _closed_form_berry(config.kind)(path, grid)
        except UndefinedAngleError as e:
            col.report.skip('berry_closed_form', str(e))
        else:
            col.report.record('berry_closed_form', max(max_abs(phase_distance(loop.gamma, closed)),
                                                       max_abs(phase_distance(loop.gamma_hermitian, closed))))
            notes['berry_loop'] = loop.gamma
            notes['berry_loop_closed_form'] = closed
    else:
        col.report.skip('berry_closed_form', "parameter path is not closed")

    try:
        states = Evolution.tdse_integrate(solution.hamiltonian, trajectory.right[0][:, 0], grid,
                                          solution.rho, tols)
    except IntegrationInstabilityError as e:
        col.report.record('norm_conservation', float('nan'))
        col.report.record('adiabatic_deviation', float('nan'))
        notes['tdse'] = str(e)
    else:
        n0 = states.rho_norms[0]
        for k in range(len(times)):
            col.record('norm_conservation', k, abs(states.rho_norms[k] - n0) / (1.0 + abs(n0)))
        if 'adiabatic_deviation' in checks:
            decomposition = Evolution.adiabatic_decompose(states, trajectory, gammas, alphas)
            col.report.record('adiabatic_deviation', decomposition.deviation())

    columns = collections.OrderedDict()
    columns['t'] = times
    for n, sign in enumerate('+-'[:levels]):
        columns['re_E%s' % sign] = numpy.real(trajectory.energies[:, n])
        columns['im_E%s' % sign] = numpy.imag(trajectory.energies[:, n])
    columns['delta'] = delta
    for n, sign in enumerate('+-'[:levels]):
        columns['gamma%s' % sign] = gammas[:, n]
    for n, sign in enumerate('+-'[:levels]):
        columns['alpha%s' % sign] = alphas[:, n]
    return col, columns

def _compute_static(config):
    tols = config.tolerances
    times = config.grid.times
    path = config.static_path()
    col = _Collector(tols, len(times))
    col.report.notes['scenario'] = config.kind
    energies = numpy.empty((len(times), 2), dtype = complex)
    delta = _nan_array(len(times))
    regimes = collections.Counter()
    for k, t in enumerate(times):
        if config.static_pt:
            delta[k], regime, pair, residual = Model.static_spectrum(path, t, tols)
            energies[k] = pair
            regimes[regime.value] += 1
            col.record('static_crosscheck', k, residual / max(1.0, abs(pair[0])))
            intertwining, involution = Model.parity_residuals(path, t, tols)
            col.record('parity_intertwining', k, intertwining)
            col.record('parity_involution', k, involution)
        else:
            energies[k] = sorted(Linalg.eigenvalues(Model.hamiltonian(path, t)), key = lambda e : -e.real)
    if config.static_pt:
        col.report.notes['static_regimes'] = dict(sorted(regimes.items()))
    else:
        for name in DEFAULT_CHECKS[Model.KIND_STATIC]:
            col.report.skip(name, "path is not tagged static_pt")
    columns = collections.OrderedDict()
    columns['t'] = times
    for n, sign in enumerate('+-'):
        columns['re_E%s' % sign] = numpy.real(energies[:, n])
        columns['im_E%s' % sign] = numpy.imag(energies[:, n])
    columns['delta'] = delta
    for name in ('gamma+', 'gamma-', 'alpha+', 'alpha-'):
        columns[name] = _nan_array(len(times))
    return col, columns

def compute(config):
    """Evaluate a scenario on its grid.

    :Returns:
        `RunResult`; its report holds exactly the configured checks and its
        columns are ``t, re_E+, im_E+, re_E-, im_E-, delta, gamma+, gamma-,
        alpha+, alpha-`` followed by one column per pointwise check
    """
    if config.kind == Model.KIND_STATIC:
        col, columns = _compute_static(config)
    else:
        col, columns = _compute_dyson(config)
    report = _select(col.report, config.checks, config.tolerances)
    for name in config.checks:
        if name in col.series:
            columns[name] = col.series[name]
    for c in report:
        logger.info("%s: %s (residual %.3g, tolerance %.3g)", c.name, c.verdict, c.residual, c.tolerance)
    return RunResult(report, columns)

#############################################################################
def _format_value(value):
    if isinstance(value, str):
        return value
    return '%.17g' % value

def write_csv(path, columns):
    """Write equally long `columns` (an ordered ``{name: sequence}``) to `path`"""
    with open(path, 'w', newline = '') as f:
        writer = csv.writer(f, lineterminator = '\n')
        writer.writerow(list(columns))
        for row in zip(*columns.values()):
            writer.writerow([_format_value(v) for v in row])

def json_mirror_path(path):
    """``<report>.json`` next to the text report at `path`"""
    root, ext = os.path.splitext(path)
    if ext == '.json':
        return path + '.json'
    return root + '.json'

def write_report(path, report, config):
    """Write the text report to `path` and its JSON mirror next to it"""
    header = "scenario: %s\nconfig: %s\n\n" % (config.kind, os.path.basename(config.path))
    with open(path, 'w') as f:
        f.write(header + report.format_text())
    with open(json_mirror_path(path), 'w') as f:
        f.write(report.to_json() + '\n')

def run(config, csv_path = None, report_path = None):
    """Compute a scenario and write its outputs.

    `csv_path` and `report_path` default to the ``[output]`` section.

    :Returns:
        `RunResult`
    """
    result = compute(config)
    csv_path = csv_path or config.csv
    report_path = report_path or config.report
    if csv_path:
        write_csv(csv_path, result.columns)
        logger.info("wrote %s", csv_path)
    if report_path:
        write_report(report_path, result.report, config)
        logger.info("wrote %s", report_path)
    return result

def verify(config, report_path = None):
    """Like `run`, without CSV output"""
    result = compute(config)
    report_path = report_path or config.report
    if report_path:
        write_report(report_path, result.report, config)
    return result

#############################################################################
def regime_map(config):
    """Classify the static regime over the `RegimeSettings` grid.

    The two axes override their components; the others are taken from the
    expressions at ``regimes.t``. ``alpha_i`` follows from the static PT
    constraint and ``tau_r = 0``. Points with ``alpha_r = 0`` have no
    discriminant and are classified ``undefined``.

    :Returns:
        ordered ``{name: list}`` with columns ``<x>, <y>, delta, regime``
    """
    settings = config.regimes
    tols = config.tolerances
    base = dict((n, float(config.expressions[n](settings.t))) for n in Model.COMPONENTS)
    columns = collections.OrderedDict([(settings.x, []), (settings.y, []), ('delta', []), ('regime', [])])
    for x in settings.axis('x'):
        for y in settings.axis('y'):
            v = dict(base)
            v[settings.x] = x
            v[settings.y] = y
            v['tau_r'] = 0.0
            if v['alpha_r'] == 0.0:
                delta, regime = float('nan'), 'undefined'
            else:
                v['alpha_i'] = -v['mu_r'] * v['mu_i'] / v['alpha_r']
                path = Model.ParameterPath.from_components(config.constants.omega, True, **v)
                delta, regime = Model.discriminant(path, settings.t, tols)
                regime = regime.value
            for name, value in zip(columns, (x, y, delta, regime)):
                columns[name].append(value)
    return columns

def regimes(config, csv_path = None):
    """Write `regime_map` to `csv_path` (default ``[output] csv``, else
    standard output)"""
    columns = regime_map(config)
    csv_path = csv_path or config.csv
    if csv_path:
        write_csv(csv_path, columns)
    else:
        writer = csv.writer(sys.stdout, lineterminator = '\n')
        writer.writerow(list(columns))
        for row in zip(*columns.values()):
            writer.writerow([_format_value(v) for v in row])
    return columns

#############################################################################
def tolerance_assignment(s):
    try:
        return Tolerances.parse_assignment(s)
    except (UnknownToleranceError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e))

_common = argparse.ArgumentParser(add_help = False)
_verbosity = _common.add_mutually_exclusive_group()
_verbosity.add_argument('-v', '--verbose', action = 'store_true',
                        help = 'log debugging messages')
_verbosity.add_argument('-q', '--quiet', action = 'store_true',
                        help = 'log errors only')

_tol = argparse.ArgumentParser(add_help = False)
_tol.add_argument('--tol', action = 'append', type = tolerance_assignment, metavar = 'NAME=VALUE',
                  help = 'override a tolerance; may be repeated')

_parser = argparse.ArgumentParser(prog = _script, description = """\
Verify time-dependent non-Hermitian two-level scenarios and compute their
energies and phases""")
_subparsers = _parser.add_subparsers(dest = 'command', metavar = 'COMMAND')
_subparsers.required = True

_run = _subparsers.add_parser('run', parents = [_common, _tol],
                              help = 'compute time series and checks, write CSV and report')
_run.add_argument('config', metavar = 'CONFIG', help = 'scenario config file')
_run.add_argument('--csv', metavar = 'PATH', help = 'CSV output path')
_run.add_argument('--report', metavar = 'PATH', help = 'report output path')

_verify = _subparsers.add_parser('verify', parents = [_common, _tol],
                                 help = 'run checks only')
_verify.add_argument('config', metavar = 'CONFIG', help = 'scenario config file')
_verify.add_argument('--report', metavar = 'PATH', help = 'report output path')

_regimes = _subparsers.add_parser('regimes', parents = [_common],
                                  help = 'map the static PT regime over two parameters')
_regimes.add_argument('config', metavar = 'CONFIG', help = 'scenario config file')
_regimes.add_argument('--csv', metavar = 'PATH', help = 'CSV output path')

def _configure_logging(args):
    if args.verbose:
        level, own = logging.DEBUG, logging.DEBUG
    elif args.quiet:
        level, own = logging.ERROR, logging.ERROR
    else:
        level, own = logging.WARNING, logging.INFO
    logging.basicConfig(format = "%(name)s: %(levelname)s: %(message)s", level = level,
                        stream = sys.stderr, force = True)
    logger.setLevel(own)

def main(argv = None):
    """Command line entry point; returns the exit status"""
    try:
        args = _parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    _configure_logging(args)
    try:
        config = load_config(args.config)
        if getattr(args, 'tol', None):
            config = config.overridden(args.tol)
        if args.command == 'run':
            result = run(config, args.csv, args.report)
        elif args.command == 'verify':
            result = verify(config, args.report)
        else:
            regimes(config, args.csv)
            return EXIT_OK
    except (TDNonHermitianError, OSError) as e:
        logger.error("%s", e)
        return EXIT_ERROR
    if result.report.passed:
        logger.info("all %d checks passed", len(result.report))
    else:
        logger.info("failed checks: %s", ', '.join(c.name for c in result.report.failures()))
    return result.exit_code

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
