"""DST-I transform and the sine-algebra operators it diagonalizes.

The orthonormal DST-I matrix ``S_m`` has entries
``sqrt(2/(m+1)) * sin(pi*j*k/(m+1))`` and satisfies ``S = S^T = S^{-1}``.
A symmetric Toeplitz matrix with first column ``t`` projects into the
sine algebra as ``tau(T) = T - H`` with a Hankel correction ``H``; the
result is ``S diag(q) S`` with eigenvalues
``q_i = t_1 + 2*sum_{j=2..m} t_j cos(pi*i*(j-1)/(m+1))``.

All index bookkeeping between that 1-based formula and 0-based storage
lives in this module; other modules only consume the API.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy import fft as sfft

from ._threads import fft_workers
from .toeplitz import DENSE_CAP, _as_vector, _axis_slice, _check_cap

# tau blocks built by this package are provably SPD; an eigenvalue at this
# relative level signals a construction bug, not a numerical edge case.
SOLVE_EIG_FLOOR = 1e-14


class SingularTauError(RuntimeError):
    """A tau operator with (near-)zero eigenvalues cannot be inverted."""


def dst1(v: np.ndarray, axis: int = -1) -> np.ndarray:
    """Multiply by the orthonormal DST-I matrix along ``axis``.

    Realized by odd extension to a length ``2(m+1)`` real FFT, so the cost
    is ``O(m log m)`` per transformed line. The matrix is involutory:
    ``dst1(dst1(v)) == v``.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim == 0 or v.shape[axis % max(v.ndim, 1)] == 0:
        raise ValueError("dst1 requires a nonempty vector")
    axis = axis % v.ndim
    m = v.shape[axis]
    ext_shape = list(v.shape)
    ext_shape[axis] = 2 * (m + 1)
    w = np.zeros(ext_shape)
    w[_axis_slice(v.ndim, axis, slice(1, m + 1))] = v
    w[_axis_slice(v.ndim, axis, slice(m + 2, None))] = -np.flip(v, axis=axis)
    wf = sfft.rfft(w, axis=axis, workers=fft_workers())
    scale = -np.sqrt(2.0 / (m + 1)) / 2.0
    return scale * wf.imag[_axis_slice(v.ndim, axis, slice(1, m + 1))]


def dst1_all_axes(v: np.ndarray) -> np.ndarray:
    for ax in range(v.ndim):
        v = dst1(v, axis=ax)
    return v


def dst1_dense(m: int) -> np.ndarray:
    """The DST-I matrix itself; oracle-side only."""
    j = np.arange(1, m + 1)
    return np.sqrt(2.0 / (m + 1)) * np.sin(np.pi * np.outer(j, j) / (m + 1))


def _hankel_correction_values(t: np.ndarray) -> np.ndarray:
    """Anti-diagonal values h(s), s = 0..2m-2, of the Hankel correction.

    First column (t_3, t_4, ..., t_m, 0, 0), last column (0, 0, t_m, ..., t_3)
    in 1-based coefficient notation.
    """
    m = t.size
    h = np.zeros(2 * m - 1)
    if m >= 3:
        h[: m - 2] = t[2:]
        h[m + 1 :] = t[2:][::-1]
    return h


def tau_dense(first_col, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense tau matrix of the symmetric Toeplitz with this first column."""
    t = _as_vector(first_col, "first_col")
    _check_cap(t.size, cap)
    T = scipy.linalg.toeplitz(t)
    h = _hankel_correction_values(t)
    H = scipy.linalg.hankel(h[: t.size], h[t.size - 1 :])
    return T - H


class TauOperator:
    """Sine-algebra matrix stored solely by its DST-I eigenvalues."""

    def __init__(self, eigs):
        self.eigs = _as_vector(eigs, "eigs")
        self.m = self.eigs.size

    def _eigs_for(self, ndim: int, axis: int) -> np.ndarray:
        shape = [1] * ndim
        shape[axis % ndim] = self.m
        return self.eigs.reshape(shape)

    def apply(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        q = self._eigs_for(v.ndim, axis)
        return dst1(q * dst1(v, axis), axis)

    def solve(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        qmax = np.max(np.abs(self.eigs))
        if np.min(np.abs(self.eigs)) < SOLVE_EIG_FLOOR * qmax:
            raise SingularTauError("tau operator has a near-zero eigenvalue")
        v = np.asarray(v, dtype=float)
        q = self._eigs_for(v.ndim, axis)
        return dst1(dst1(v, axis) / q, axis)

    def materialize(self, cap: int = DENSE_CAP) -> np.ndarray:
        _check_cap(self.m, cap)
        S = dst1_dense(self.m)
        return S @ np.diag(self.eigs) @ S


def tau_eigenvalues(first_col) -> TauOperator:
    """Eigenvalues by direct evaluation of the cosine sum; O(m^2)."""
    t = _as_vector(first_col, "first_col")
    m = t.size
    i = np.arange(1, m + 1)
    j = np.arange(1, m)
    cosines = np.cos(np.pi * np.outer(i, j) / (m + 1))
    return TauOperator(t[0] + 2.0 * cosines @ t[1:])


def tau_eigs_fast(first_col) -> TauOperator:
    """Eigenvalues in O(m log m): one DST of the first tau column.

    Uses ``q = diag(S e_1)^{-1} (S tau(T) e_1)``; the first column of
    ``tau(T)`` is the Toeplitz column minus the Hankel column.
    """
    t = _as_vector(first_col, "first_col")
    m = t.size
    u = t.copy()
    if m >= 3:
        u[: m - 2] -= t[2:]
    e1 = np.zeros(m)
    e1[0] = 1.0
    return TauOperator(dst1(u) / dst1(e1))


def tau_apply(op: TauOperator, v: np.ndarray) -> np.ndarray:
    return op.apply(v)


def tau_solve(op: TauOperator, v: np.ndarray) -> np.ndarray:
    return op.solve(v)
