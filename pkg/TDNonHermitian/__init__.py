"""`TDNonHermitian`

Time-dependent non-Hermitian two-level quantum systems with a time-dependent
metric. The package contains several submodules

    - `TDNonHermitian.ExprPath` - expressions of time with forward-mode
      derivatives, used as parameter paths,
    - `TDNonHermitian.Linalg` - biorthogonal eigensystems of small complex
      matrices,
    - `TDNonHermitian.Model` - the 2x2 Hamiltonian, its static PT regimes and
      two closed-form Dyson-map scenarios,
    - `TDNonHermitian.Operators` - energy operator, metric, C~ and P~
      operators and the verification report,
    - `TDNonHermitian.Evolution` - time evolution, dynamical and geometric
      phases,
    - `TDNonHermitian.Cli` - config-driven runner behind ``bin/tdnh.py``.

Tolerances of all checks are declared in `TDNonHermitian.Tolerances`, errors
in `TDNonHermitian.Errors`.

The typical usage pattern is:

.. python::

    import TDNonHermitian.Model as Model
    import TDNonHermitian.Operators as Operators
    from TDNonHermitian.Evolution import TimeGrid

    grid = TimeGrid(0.0, 1.0, 1000)
    sol = Model.build_scenario_41({'alpha_r' : '1', 'mu_r' : '0', 'tau_i' : '2'},
                                  Model.ScenarioConstants(c1 = 2.0, c2 = 1.0), grid)
    frame = Operators.frame_from_scenario(sol, 0.5)
    Operators.verify_ptrel(frame).passed
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

__docformat__ = "restructuredText"

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
