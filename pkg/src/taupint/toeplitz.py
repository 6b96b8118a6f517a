"""One-level Toeplitz operators with FFT matvecs and dense oracles.

A Toeplitz matrix is stored by its ``2m - 1`` diagonal coefficients
``t_{-(m-1)}, ..., t_0, ..., t_{m-1}``, where ``t_k`` is the constant value
on diagonal ``row - col = k``; entry ``(l, h)`` of the dense matrix equals
``diag_coeffs[(l - h) + (m - 1)]``. Matvecs embed the matrix in a circulant
of length ``2m`` and run through real FFTs, costing ``O(m log m)``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy import fft as sfft

from ._threads import fft_workers

# Dense materializations are an oracle-side device; refuse to build them
# past this many rows unless the caller raises the cap explicitly.
DENSE_CAP = 4096


class DenseCapError(RuntimeError):
    """Requested dense materialization exceeds the configured row cap."""


def _check_cap(rows: int, cap: int) -> None:
    if rows > cap:
        raise DenseCapError(f"dense size {rows} exceeds cap {cap}")


def _as_vector(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {x.shape}")
    if x.size == 0:
        raise ValueError(f"{name} must be nonempty")
    return x


def _axis_slice(ndim: int, axis: int, sl: slice):
    index = [slice(None)] * ndim
    index[axis] = sl
    return tuple(index)


class Toeplitz1D:
    """Immutable one-level Toeplitz matrix with an ``O(m log m)`` matvec."""

    def __init__(self, diag_coeffs):
        c = _as_vector(diag_coeffs, "diag_coeffs")
        if len(c) % 2 != 1:
            raise ValueError("diag_coeffs must have odd length 2m-1")
        self.m = (len(c) + 1) // 2
        self.diag_coeffs = c
        # Circulant embedding, length 2m: first column
        # (t_0, t_1, ..., t_{m-1}, 0, t_{-(m-1)}, ..., t_{-1}).
        emb = np.zeros(2 * self.m)
        emb[: self.m] = c[self.m - 1 :]
        emb[self.m + 1 :] = c[: self.m - 1]
        self._rspectrum = np.fft.rfft(emb)

    def matvec(self, x) -> np.ndarray:
        x = _as_vector(x, "x")
        if x.size != self.m:
            raise ValueError(f"vector length {x.size} != matrix dimension {self.m}")
        return self.matvec_axis(x, axis=0)

    def matvec_axis(self, x: np.ndarray, axis: int) -> np.ndarray:
        """Apply the matrix along one axis of ``x``, batched over the rest."""
        x = np.asarray(x, dtype=float)
        axis = axis % x.ndim
        if x.shape[axis] != self.m:
            raise ValueError(
                f"axis length {x.shape[axis]} != matrix dimension {self.m}"
            )
        n = 2 * self.m
        spec_shape = [1] * x.ndim
        spec_shape[axis] = self._rspectrum.size
        spec = self._rspectrum.reshape(spec_shape)
        xf = sfft.rfft(x, n=n, axis=axis, workers=fft_workers())
        y = sfft.irfft(xf * spec, n=n, axis=axis, workers=fft_workers())
        return y[_axis_slice(x.ndim, axis, slice(0, self.m))]

    def materialize(self, cap: int = DENSE_CAP) -> np.ndarray:
        _check_cap(self.m, cap)
        c = self.diag_coeffs
        col = c[self.m - 1 :]
        row = c[self.m - 1 :: -1]
        return scipy.linalg.toeplitz(col, row)

    def symmetric_part(self) -> "Toeplitz1D":
        c = self.diag_coeffs
        return Toeplitz1D((c + c[::-1]) / 2.0)

    def skew_part(self) -> "Toeplitz1D":
        c = self.diag_coeffs
        return Toeplitz1D((c - c[::-1]) / 2.0)

    def transpose(self) -> "Toeplitz1D":
        return Toeplitz1D(self.diag_coeffs[::-1])

    @property
    def first_column(self) -> np.ndarray:
        """Coefficients t_0, ..., t_{m-1} (the lower-triangular half)."""
        return self.diag_coeffs[self.m - 1 :]

    def is_symmetric(self, tol: float = 0.0) -> bool:
        c = self.diag_coeffs
        return bool(np.max(np.abs(c - c[::-1])) <= tol)


class LowerTriToeplitz:
    """Lower triangular Toeplitz matrix stored by its first column."""

    def __init__(self, first_col):
        col = _as_vector(first_col, "first_col")
        self.m = col.size
        self.first_col = col
        full = np.zeros(2 * self.m - 1)
        full[self.m - 1 :] = col
        self._toep = Toeplitz1D(full)

    def matvec(self, x) -> np.ndarray:
        return self._toep.matvec(x)

    def matvec_axis(self, x: np.ndarray, axis: int) -> np.ndarray:
        return self._toep.matvec_axis(x, axis)

    def materialize(self, cap: int = DENSE_CAP) -> np.ndarray:
        _check_cap(self.m, cap)
        return scipy.linalg.toeplitz(self.first_col, np.zeros(self.m))

    def symmetric_part(self) -> Toeplitz1D:
        return self._toep.symmetric_part()

    def skew_part(self) -> Toeplitz1D:
        return self._toep.skew_part()

    def as_toeplitz(self) -> Toeplitz1D:
        return self._toep


def toeplitz_matvec(T: Toeplitz1D, x) -> np.ndarray:
    return T.matvec(x)


def lower_tri_matvec(B: LowerTriToeplitz, x) -> np.ndarray:
    return B.matvec(x)


def symmetric_part(Z) -> Toeplitz1D:
    return Z.symmetric_part()


def skew_part(Z) -> Toeplitz1D:
    return Z.skew_part()


def materialize(Z, cap: int = DENSE_CAP) -> np.ndarray:
    return Z.materialize(cap=cap)
