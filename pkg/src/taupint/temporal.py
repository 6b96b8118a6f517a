"""L1 discretization of the Caputo time derivative.

For order ``alpha`` in (0, 1) and uniform step ``mu = T/N`` the scheme is
built from the weights ``a_j = (j+1)^{1-alpha} - j^{1-alpha}`` and the
scale ``kappa = 1 / (Gamma(2-alpha) * mu^alpha)``. The time-stepping
matrix is the lower triangular Toeplitz with first column
``(a_0, a_1 - a_0, ..., a_{N-1} - a_{N-2})``; the all-at-once system uses
``kappa`` times that matrix. Its generating function is
``g_alpha(phi) = a_0 + sum_{j>=1} (a_j - a_{j-1}) e^{i j phi}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gamma

from .toeplitz import LowerTriToeplitz


@dataclass(frozen=True)
class L1Coefficients:
    """Weights of the L1 scheme for one (alpha, N, T) configuration.

    ``a`` holds ``a_0 .. a_{N-1}`` (decreasing, positive); ``l`` holds the
    convolution weights ``l_0 = kappa*a_0`` and ``l_k = kappa*(a_k - a_{k-1})``.
    """

    alpha: float
    N: int
    mu: float
    kappa: float
    a: np.ndarray
    l: np.ndarray


def l1_weights(alpha: float, count: int) -> np.ndarray:
    """The sequence a_j = (j+1)^(1-alpha) - j^(1-alpha), j = 0..count-1."""
    j = np.arange(count, dtype=float)
    return (j + 1.0) ** (1.0 - alpha) - j ** (1.0 - alpha)


def l1_coefficients(alpha: float, N: int, T_final: float) -> L1Coefficients:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if T_final <= 0.0:
        raise ValueError(f"T_final must be positive, got {T_final}")
    mu = T_final / N
    kappa = 1.0 / (gamma(2.0 - alpha) * mu**alpha)
    a = l1_weights(alpha, N)
    l = np.empty(N)
    l[0] = kappa * a[0]
    l[1:] = kappa * np.diff(a)
    return L1Coefficients(alpha=alpha, N=N, mu=mu, kappa=kappa, a=a, l=l)


def build_B(coeffs: L1Coefficients) -> LowerTriToeplitz:
    """Unscaled temporal Toeplitz matrix; the system block is kappa * B."""
    first_col = np.empty(coeffs.N)
    first_col[0] = coeffs.a[0]
    first_col[1:] = np.diff(coeffs.a)
    return LowerTriToeplitz(first_col)


class GSymbolValue(NamedTuple):
    """Truncated symbol value and the telescoped bound on the dropped tail."""

    value: complex
    tail: float


def g_alpha_eval(phi: float, alpha: float, K: int = 100_000) -> GSymbolValue:
    """Partial sum of the temporal generating function at angle ``phi``.

    Truncates after the ``K``-th difference term; the dropped tail is
    bounded in absolute value by ``a_K`` (monotone telescoping), which is
    returned alongside the value.
    """
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
    a = l1_weights(alpha, K + 1)
    j = np.arange(1, K + 1, dtype=float)
    value = a[0] + np.sum(np.diff(a) * np.exp(1j * j * phi))
    tail = float(a[K])
    return GSymbolValue(value=complex(value), tail=tail)


def caputo_l1_apply(coeffs: L1Coefficients, u: np.ndarray, u0: float) -> np.ndarray:
    """Discrete Caputo derivative of samples u(mu), ..., u(N*mu); oracle use.

    ``u[k-1]`` holds the sample at t = k*mu; returns the L1 approximation at
    each t = n*mu, n = 1..N.
    """
    u = np.asarray(u, dtype=float)
    N = coeffs.N
    if u.size != N:
        raise ValueError(f"need {N} samples, got {u.size}")
    out = np.empty(N)
    for n in range(1, N + 1):
        out[n - 1] = np.dot(coeffs.l[n - 1 :: -1][: n], u[:n]) - coeffs.kappa * coeffs.a[n - 1] * u0
    return out
