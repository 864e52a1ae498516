"""`TDNonHermitian.Linalg`

Dense complex matrices of small dimension (``N <= 8``, mostly ``N = 2``).

**General Description**

Matrices are plain ``numpy`` complex arrays. This module adds what numpy does
not provide directly:

    - `eig_biorthogonal`, an eigendecomposition returning right *and* left
      eigenvectors normalized to ``<phi_n|psi_m> = delta_nm``,
    - residual helpers (`hermiticity_residual`, `positivity_check`,
      `commutator`),
    - `operator_time_derivative`, the central difference of a matrix valued
      function of time.

The ``||.||_inf`` of all residuals in this package is the max-modulus entry,
see `TDNonHermitian.Util.max_abs`.
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

import numpy

import TDNonHermitian.Tolerances as Tolerances
from TDNonHermitian.Util import max_abs
from TDNonHermitian.Errors import DefectiveMatrixError, DimensionMismatchError, SingularMatrixError

logger = logging.getLogger(__name__)

IDENTITY2 = numpy.eye(2, dtype = complex)
SIGMA_X = numpy.array([[0, 1], [1, 0]], dtype = complex)
SIGMA_Y = numpy.array([[0, -1j], [1j, 0]], dtype = complex)
SIGMA_Z = numpy.array([[1, 0], [0, -1]], dtype = complex)
for _m in (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write = False)
del _m

ORDER_REAL_IMAG = 'real-imag'
ORDER_CONTINUITY = 'continuity'

#############################################################################
def as_cmatrix(a):
    """Return `a` as a square, finite, complex matrix.

    :Raises:
        DimensionMismatchError
            when `a` is not square or is empty
        ValueError
            when `a` has non-finite entries
    """
    m = numpy.asarray(a, dtype = complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatchError("expected a non-empty square matrix, got shape %r" % (m.shape,))
    if not numpy.all(numpy.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m

def dagger(a):
    return numpy.conj(numpy.transpose(a))

#############################################################################
@dataclasses.dataclass(frozen = True)
class Eigensystem(object):
    """Eigenvalues with paired right and left eigenvectors.

    ``right[:, n]`` is ``|psi_n>`` and ``left[:, n]`` is ``|phi_n>``, with
    ``<phi_n|psi_m> = delta_nm``.
    """
    values : numpy.ndarray
    right : numpy.ndarray
    left : numpy.ndarray
    ordering : str = ORDER_REAL_IMAG
    condition : float = 1.0

    @property
    def size(self):
        return len(self.values)

    def biorthonormality_residual(self):
        n = self.size
        return max_abs(dagger(self.left) @ self.right - numpy.eye(n))

    def completeness_residual(self):
        n = self.size
        return max_abs(self.right @ dagger(self.left) - numpy.eye(n))

    def reconstruct(self):
        """Return ``sum_n E_n |psi_n><phi_n|``"""
        return (self.right * self.values) @ dagger(self.left)

    def reconstruction_residual(self, m):
        return max_abs(self.reconstruct() - m)

    def projector(self, n):
        return numpy.outer(self.right[:, n], numpy.conj(self.left[:, n]))

    def reordered(self, perm, ordering = None):
        perm = list(perm)
        return dataclasses.replace(self,
                                   values = self.values[perm],
                                   right = self.right[:, perm],
                                   left = self.left[:, perm],
                                   ordering = self.ordering if ordering is None else ordering)

    def rescaled(self, factors):
        """Scale ``|psi_n>`` by ``factors[n]`` and ``|phi_n>`` by
        ``1/conj(factors[n])``, which preserves biorthonormality"""
        factors = numpy.asarray(factors, dtype = complex)
        return dataclasses.replace(self,
                                   right = self.right * factors,
                                   left = self.left / numpy.conj(factors))

#############################################################################
def _sort_real_imag(values):
    scale = max(1.0, float(numpy.max(numpy.abs(values))))
    # real parts that differ by round-off only are treated as equal
    keys = [(round(v.real / scale, 10), v.imag) for v in values]
    return sorted(range(len(values)), key = lambda k : keys[k])

def _eig2(m):
    (a, b), (c, d) = m
    mean = 0.5 * (a + d)
    half = 0.5 * (a - d)
    root = numpy.sqrt(complex(half * half + b * c))
    values = numpy.array([mean + root, mean - root], dtype = complex)
    vectors = numpy.zeros((2, 2), dtype = complex)
    scale = max(1.0, max_abs(m))
    for k, lam in enumerate(values):
        # two candidate kernel vectors of (m - lam), pick the better conditioned
        v1 = numpy.array([b, lam - a])
        v2 = numpy.array([lam - d, c])
        n1 = numpy.linalg.norm(v1)
        n2 = numpy.linalg.norm(v2)
        if max(n1, n2) <= 1e-14 * scale:
            v = numpy.zeros(2, dtype = complex)
            v[k] = 1.0
        elif n1 >= n2:
            v = v1 / n1
        else:
            v = v2 / n2
        vectors[:, k] = v
    return values, vectors

def _normalize_columns(vectors):
    out = numpy.array(vectors, dtype = complex)
    for k in range(out.shape[1]):
        v = out[:, k]
        v = v / numpy.linalg.norm(v)
        j = int(numpy.argmax(numpy.abs(v) > numpy.max(numpy.abs(v)) * (1.0 - 1e-12)))
        v = v * (numpy.abs(v[j]) / v[j])
        out[:, k] = v
    return out

def eig_biorthogonal(m, order = ORDER_REAL_IMAG, tolerances = None):
    """Biorthonormal eigendecomposition of `m`.

    Right vectors are unit eigenvectors of `m` with the first
    largest-magnitude component made real positive. Left vectors are the
    conjugated rows of the inverse right-eigenvector matrix.

    :Parameters:
        m
            square complex matrix
        order : str
            ``'real-imag'`` sorts eigenvalues by real part, then imaginary
            part; ``'continuity'`` keeps the solver order and leaves level
            matching to the caller (see `TDNonHermitian.Evolution`)
        tolerances : `TDNonHermitian.Tolerances.ToleranceSet`
            uses ``condition_bound``
    :Returns:
        `Eigensystem`
    :Raises:
        DefectiveMatrixError
            when the eigenvector matrix condition number exceeds
            ``condition_bound``
    """
    tols = Tolerances.resolve(tolerances)
    m = as_cmatrix(m)
    if m.shape[0] == 2:
        values, vectors = _eig2(m)
    else:
        values, vectors = numpy.linalg.eig(m)
    vectors = _normalize_columns(vectors)
    cond = float(numpy.linalg.cond(vectors))
    if not numpy.isfinite(cond) or cond > tols['condition_bound']:
        raise DefectiveMatrixError("eigenvector matrix is numerically singular "
                                   "(condition number %.3g), close to an exceptional point" % cond,
                                   cond)
    if order == ORDER_REAL_IMAG:
        perm = _sort_real_imag(values)
        values = values[perm]
        vectors = vectors[:, perm]
    elif order != ORDER_CONTINUITY:
        raise ValueError("unknown eigenvalue ordering %r" % order)
    left = dagger(numpy.linalg.inv(vectors))
    return Eigensystem(values, vectors, left, order, cond)

def eigenvalues(m):
    """Eigenvalues of `m` sorted by real, then imaginary part.

    Unlike `eig_biorthogonal` this never fails at exceptional points.
    """
    m = as_cmatrix(m)
    if m.shape[0] == 2:
        values = _eig2(m)[0]
    else:
        values = numpy.linalg.eigvals(m)
    return values[_sort_real_imag(values)]

#############################################################################
def commutator(a, b):
    """Return ``AB - BA``.

    :Raises:
        DimensionMismatchError
            when shapes differ
    """
    a = numpy.asarray(a, dtype = complex)
    b = numpy.asarray(b, dtype = complex)
    if a.shape != b.shape or a.ndim != 2:
        raise DimensionMismatchError("cannot commute shapes %r and %r" % (a.shape, b.shape))
    return a @ b - b @ a

def hermiticity_residual(a):
    return max_abs(a - dagger(a))

def positivity_check(a, tolerances = None):
    """Check positive definiteness of `a`.

    :Returns:
        ``(is_positive, eigenvalues)``, the eigenvalues being those of the
        Hermitian part ``(A + A^+)/2`` in ascending order; `a` that is not
        Hermitian within the ``hermiticity`` tolerance is never positive
    """
    tols = Tolerances.resolve(tolerances)
    a = numpy.asarray(a, dtype = complex)
    values = numpy.linalg.eigvalsh(0.5 * (a + dagger(a)))
    hermitian = hermiticity_residual(a) <= tols['hermiticity'] * max(1.0, max_abs(a))
    return bool(hermitian and numpy.all(values > 0)), values

def solve(a, b):
    """``a^-1 b`` raising `SingularMatrixError` for singular `a`"""
    try:
        return numpy.linalg.solve(a, b)
    except numpy.linalg.LinAlgError as e:
        raise SingularMatrixError("singular matrix: %s" % e)

def inverse(a):
    try:
        return numpy.linalg.inv(a)
    except numpy.linalg.LinAlgError as e:
        raise SingularMatrixError("singular matrix: %s" % e)

#############################################################################
def default_step(t):
    return 1e-5 * max(1.0, abs(t))

def operator_time_derivative(func, t, h = None):
    """Central difference ``(F(t+h) - F(t-h)) / 2h``.

    :Parameters:
        func : callable
            ``func(t) -> matrix``
        t : float
            time
        h : float
            step, by default ``1e-5*max(1, |t|)``
    """
    if h is None:
        h = default_step(t)
    return (numpy.asarray(func(t + h)) - numpy.asarray(func(t - h))) / (2.0 * h)

# Local Variables:
# # tab-width:4
# # indent-tabs-mode:nil
# # End:
# vim: set syntax=python expandtab tabstop=4 shiftwidth=4:
