"""`TDNonHermitian.Tolerances`

Centralized tolerances of all residual checks.

**General Description**

Every check performed by TDNonHermitian compares a residual against a named
tolerance. The names, their descriptions and default values are declared in
a single table, in the same way other declaration tables of this package are
written. Tolerances may be overridden per run, e.g. from a scenario config
file or with ``--tol NAME=VALUE`` on the command line.

Typical usage:

.. python::

    import TDNonHermitian.Tolerances as Tolerances
    tols = Tolerances.Declarations(defaults = {'energy_reality' : 1e-10})
    tols['energy_reality']          # -> 1e-10
    tols.help('energy_reality')     # -> description
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

import collections.abc
import math

import TDNonHermitian.Util
from TDNonHermitian.Errors import UnknownToleranceError

#############################################################################
_std_tol_triples = [
    # linalg
    ( 'biorthonormality',
      "Max |<phi_n|psi_m> - delta_nm| of an eigensystem",
      1e-10 ),
    ( 'completeness',
      "Max |sum_n |psi_n><phi_n| - I| of an eigensystem",
      1e-10 ),
    ( 'condition_bound',
      "Eigenvector-matrix condition number above which a matrix is treated as defective",
      1e8 ),
    ( 'hermiticity',
      "Max |A - A^+| below which a matrix counts as Hermitian",
      1e-9 ),
    # model
    ( 'exceptional',
      "Band |Delta| <= eps classified as exceptional point",
      1e-12 ),
    ( 'constraint',
      "Hard limit on constraint residuals of parameter paths and scenarios",
      1e-8 ),
    ( 'quadrature',
      "Absolute tolerance of the delta(t) quadrature",
      1e-10 ),
    ( 'static_pt',
      "Max |alpha_r alpha_i + mu_r mu_i| and |tau_r| of a static-PT parameter path",
      1e-10 ),
    ( 'closed_form_energy',
      "Max |E_closed_form - E_eigensolver| above which a scenario discrepancy is logged",
      1e-9 ),
    ( 'static_crosscheck',
      "Max |E_closed_form - E_eigensolver| of the static model",
      1e-10 ),
    ( 'parity_intertwining',
      "Max |P H - H^+ P| of the static parity operator",
      1e-10 ),
    ( 'parity_involution',
      "Max |P^2 - I| of the static parity operator",
      1e-10 ),
    ( 'dyson_residual',
      "Max |eta H eta^-1 + i eta_dot eta^-1 - h| of a Dyson map",
      1e-7 ),
    ( 'h_hermiticity',
      "Max |h - h^+| of the Hermitian counterpart h",
      1e-9 ),
    # operators
    ( 'quasi_hermiticity',
      "Max |H~^+ rho - rho H~|",
      1e-7 ),
    ( 'metric_ode_residual',
      "Max |i rho_dot - H^+ rho + rho H| with finite-difference rho_dot",
      1e-7 ),
    ( 'metric_ode_integration',
      "Max |rho_numerical - rho_analytic| of the integrated metric",
      1e-6 ),
    ( 'c_hat_normalization',
      "Max |det rho^ - 1| accepted when building C^",
      1e-9 ),
    ( 'c_hat_involution',
      "Max |C^^2 - I|",
      1e-9 ),
    ( 'c_hat_evolution',
      "Max |i dC^/dt - [H, C^]| with finite-difference dC^/dt",
      1e-6 ),
    ( 'c_tilde_involution',
      "Max |C~^2 - I|",
      1e-9 ),
    ( 'c_tilde_commutator',
      "Max |[C~, H~]|",
      1e-9 ),
    ( 'p_tilde_hermiticity',
      "Max |P~ - P~^+| accepted when building P~",
      1e-9 ),
    ( 'c_from_p',
      "Max |rho^-1 P~ - C~|",
      1e-9 ),
    ( 'rho_orthonormality',
      "Max |<psi~_n|rho|psi~_m> - delta_nm|",
      1e-9 ),
    ( 'ptrel_intertwining',
      "Condition (i): max |P~ X - X^+ P~|",
      1e-9 ),
    ( 'ptrel_eigenmap',
      "Condition (ii): max_n |P~|psi_n> - a_n|phi_n>| / |P~|psi_n>|",
      1e-9 ),
    ( 'ptrel_alpha_real',
      "Condition (ii): max_n |Im a_n|",
      1e-9 ),
    ( 'ptrel_hermiticity',
      "Condition (iii): max |P~ - P~^+|",
      1e-9 ),
    ( 'energy_reality',
      "Max |Im E_n| of the instantaneous energies",
      1e-8 ),
    # evolution
    ( 'berry_imag',
      "Max |Im dgamma/dt| of the geometric phase rate",
      1e-7 ),
    ( 'berry_hermitian_agreement',
      "Max |gamma_nonhermitian - gamma_hermitian| of the accumulated phases",
      1e-7 ),
    ( 'berry_closed_form',
      "Distance mod 2pi between loop phases and their closed forms",
      1e-6 ),
    ( 'closed_path',
      "Max |q(t1) - q(t0)| for a parameter path to count as closed",
      1e-10 ),
    ( 'gauge_overlap',
      "Minimal |<phi_n(t_k)|psi_n(t_k+1)>| of a resolved eigen-trajectory",
      0.9 ),
    ( 'level_tie',
      "Overlaps closer than this make level matching ambiguous",
      1e-6 ),
    ( 'norm_drift',
      "Relative rho-norm drift aborting a TDSE integration",
      1e-3 ),
    ( 'norm_conservation',
      "Max relative rho-norm drift of a TDSE trajectory",
      1e-8 ),
    ( 'adiabatic_deviation',
      "Max |c_n(t) - c_n(0)| of an adiabatic decomposition",
      1e-2 ),
]
"""Predefined tolerances. This is for internal use, it IS **NOT a part of public API**"""

#############################################################################
class ToleranceSet(collections.abc.Mapping):
    """Read-only mapping of tolerance names to values"""

    def __init__(self, declarations):
        self.__decls = collections.OrderedDict((d.name, d) for d in declarations)

    def __getitem__(self, name):
        try:
            return self.__decls[name].value
        except KeyError:
            raise UnknownToleranceError(name)

    def __iter__(self):
        return iter(self.__decls)

    def __len__(self):
        return len(self.__decls)

    def __repr__(self):
        return "ToleranceSet(%r)" % dict(self.items())

    def help(self, name):
        try:
            return self.__decls[name].help
        except KeyError:
            raise UnknownToleranceError(name)

    def default(self, name):
        try:
            return self.__decls[name].default
        except KeyError:
            raise UnknownToleranceError(name)

    def declarations(self):
        return list(self.__decls.values())

    def overridden(self, **values):
        """Return a copy with some tolerances replaced.

        :Raises:
            UnknownToleranceError
                when a name is not declared
            ValueError
                when a value is not a non-negative number
        """
        for name in values:
            if name not in self.__decls:
                raise UnknownToleranceError(name)
        decls = []
        for d in self.__decls.values():
            if d.name in values:
                d = d._replace(value = _tolerance_value(values[d.name], d.name))
            decls.append(d)
        return ToleranceSet(decls)

#############################################################################
def _tolerance_value(value, name):
    value = float(value)
    if math.isnan(value) or value < 0.0:
        raise ValueError("tolerance %r must be a non-negative number, not %r" % (name, value))
    return value

#############################################################################
def __init_module_vars():
    global _default_set
    _default_set = ToleranceSet(
            TDNonHermitian.Util.declarations_from_triples(_std_tol_triples))
_default_set = None

#############################################################################
def Names(name_filter = lambda x : True):
    """Return list of tolerance names.

    :Parameters:
        name_filter : callable | sequence
            callable object (e.g. lambda) of type ``name_filter(name) ->
            boolean`` used to filter-out unwanted names; only these
            names are returned, for which name_filter returns ``True``
    :Returns:
        the list of tolerance names
    """
    return TDNonHermitian.Util.names_from_triples(_std_tol_triples, name_filter)

#############################################################################
def Declarations(**kw):
    """Return the set of tolerances.

    :Keywords:
        defaults : dict
            user-specified values overriding the predefined defaults,
        name_filter : callable | sequence
            callable object (e.g. lambda) of type ``name_filter(name) ->
            boolean`` used to filter-out unwanted tolerances.

    :Returns:
        an instance of `ToleranceSet`
    """
    defaults = kw.get('defaults', dict())
    for name in defaults:
        if name not in Names():
            raise UnknownToleranceError(name)
    decls = TDNonHermitian.Util.declarations_from_triples(
                _std_tol_triples,
                defaults = defaults,
                name_filter = kw.get('name_filter', lambda s : True))
    return ToleranceSet([d._replace(value = _tolerance_value(d.value, d.name)) for d in decls])

#############################################################################
def resolve(tolerances = None):
    """Return `tolerances`, or the predefined set when it is ``None``"""
    if tolerances is None:
        return _default_set
    return tolerances

#############################################################################
def parse_assignment(text):
    """Parse ``NAME=VALUE`` into ``(name, float)``.

    :Raises:
        UnknownToleranceError
            when NAME is not declared
        ValueError
            on malformed text or bad value
    """
    name, sep, value = text.partition('=')
    name = name.strip()
    if not sep or not name:
        raise ValueError("expected NAME=VALUE, got %r" % text)
    if name not in _default_set:
        raise UnknownToleranceError(name)
    return name, _tolerance_value(value.strip(), name)

__init_module_vars()

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
