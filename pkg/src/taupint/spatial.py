"""1D spatial stencils and their Kronecker-sum assembly.

Supported operators (all with homogeneous Dirichlet boundaries on a box):

* ``laplacian``: second-order central differences for the negated
  Laplacian: per-dimension stencil ``(-1, 2, -1) / h^2``.
* ``riesz``: fractional centered differences of order ``beta`` in (1, 2)
  for ``-c * d^beta/d|x|^beta``: coefficients ``c * h^-beta * g_k`` with
  ``g_k = (-1)^k Gamma(beta+1) / (Gamma(beta/2-k+1) Gamma(beta/2+k+1))``.
* ``riemann_liouville``: second-order shifted Grunwald (WSGD, shifts
  (1, 0)) weights ``w_0 = (beta/2) g_0`` and
  ``w_k = (beta/2) g_k + ((2-beta)/2) g_{k-1}`` built from the Grunwald
  weights ``g_k = (-1)^k binom(beta, k)``. The block for
  ``-(k_plus D_+^beta + k_minus D_-^beta)`` is
  ``-h^-beta (k_plus W + k_minus W^T)`` where ``W`` carries ``w_1`` on the
  main diagonal, ``w_0`` on the first superdiagonal and ``w_{k+1}`` on the
  k-th subdiagonal.

Vectors over the tensor grid are flattened with dimension 1 fastest: the
flat index is ``j_1 + m_1*(j_2 + m_2*(...))``, i.e. an array of shape
``(m_d, ..., m_1)`` in C order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma

from .toeplitz import DENSE_CAP, Toeplitz1D, _check_cap

_KINDS = ("laplacian", "riesz", "riemann_liouville")


@dataclass(frozen=True)
class SpatialSpec:
    """Configuration of the spatial operator on a d-dimensional box."""

    kind: str
    m: tuple[int, ...]
    beta: tuple[float, ...] | None = None
    coeff: tuple[float, ...] | None = None
    k_plus: tuple[float, ...] | None = None
    k_minus: tuple[float, ...] | None = None
    bounds: tuple[tuple[float, float], ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown spatial kind {self.kind!r}")
        if not self.m or any(mi < 1 for mi in self.m):
            raise ValueError("every m_i must be >= 1")
        if self.bounds is None:
            object.__setattr__(self, "bounds", tuple((0.0, 1.0) for _ in self.m))
        if len(self.bounds) != self.d:
            raise ValueError("bounds must match the number of dimensions")
        if any(hi <= lo for lo, hi in self.bounds):
            raise ValueError("each bound must satisfy lower < upper")
        if self.kind in ("riesz", "riemann_liouville"):
            if self.beta is None or len(self.beta) != self.d:
                raise ValueError("fractional kinds need one beta per dimension")
            if any(not 1.0 < b < 2.0 for b in self.beta):
                raise ValueError("beta must lie in (1, 2)")
        if self.kind == "riesz":
            c = self.coeff if self.coeff is not None else tuple(1.0 for _ in self.m)
            if len(c) != self.d or any(ci <= 0 for ci in c):
                raise ValueError("riesz coefficients must be positive, one per dimension")
            object.__setattr__(self, "coeff", tuple(float(ci) for ci in c))
        if self.kind == "riemann_liouville":
            if self.k_plus is None or self.k_minus is None:
                raise ValueError("riemann_liouville needs k_plus and k_minus")
            if len(self.k_plus) != self.d or len(self.k_minus) != self.d:
                raise ValueError("k_plus / k_minus need one entry per dimension")
            if any(kp < 0 or km < 0 for kp, km in zip(self.k_plus, self.k_minus)):
                raise ValueError("k_plus and k_minus must be nonnegative")
            if any(kp == 0 and km == 0 for kp, km in zip(self.k_plus, self.k_minus)):
                raise ValueError("k_plus and k_minus cannot both vanish")

    @property
    def d(self) -> int:
        return len(self.m)

    @property
    def h(self) -> tuple[float, ...]:
        return tuple((hi - lo) / (mi + 1) for (lo, hi), mi in zip(self.bounds, self.m))

    @property
    def J(self) -> int:
        return int(np.prod(self.m))

    def grid(self) -> list[np.ndarray]:
        """Interior grid coordinates per dimension: x = lower + j*h, j=1..m."""
        return [
            lo + step * np.arange(1, mi + 1)
            for (lo, _), step, mi in zip(self.bounds, self.h, self.m)
        ]


def laplacian_coeffs(h: float, m: int) -> Toeplitz1D:
    """Central-difference stencil for the negated 1D Laplacian."""
    c = np.zeros(2 * m - 1)
    c[m - 1] = 2.0 / h**2
    if m > 1:
        c[m - 2] = c[m] = -1.0 / h**2
    return Toeplitz1D(c)


def centered_frac_weights(beta: float, count: int) -> np.ndarray:
    """Fractional centered-difference weights g_0 .. g_{count-1}.

    Ratio recurrence g_{k+1} = g_k * (k - beta/2) / (k + 1 + beta/2), which
    avoids Gamma overflow for large k.
    """
    g = np.empty(count)
    g[0] = gamma(beta + 1.0) / gamma(beta / 2.0 + 1.0) ** 2
    for k in range(count - 1):
        g[k + 1] = g[k] * (k - beta / 2.0) / (k + 1.0 + beta / 2.0)
    return g


def riesz_centered_coeffs(beta: float, h: float, m: int, coeff: float = 1.0) -> Toeplitz1D:
    """Symmetric stencil for -coeff * d^beta/d|x|^beta, beta in (1, 2)."""
    if not 1.0 < beta < 2.0:
        raise ValueError(f"beta must lie in (1, 2), got {beta}")
    g = coeff * h ** (-beta) * centered_frac_weights(beta, m)
    c = np.concatenate([g[:0:-1], g])
    return Toeplitz1D(c)


def grunwald_weights(beta: float, count: int) -> np.ndarray:
    """Grunwald weights g_k = (-1)^k binom(beta, k) via the stable recurrence."""
    g = np.empty(count)
    g[0] = 1.0
    for k in range(1, count):
        g[k] = g[k - 1] * (1.0 - (beta + 1.0) / k)
    return g


def wsgd_weights(beta: float, count: int) -> np.ndarray:
    """Second-order WSGD weights w_0 .. w_{count-1} for shifts (1, 0)."""
    g = grunwald_weights(beta, count)
    w = np.empty(count)
    w[0] = (beta / 2.0) * g[0]
    w[1:] = (beta / 2.0) * g[1:] + ((2.0 - beta) / 2.0) * g[:-1]
    return w


def wsgd_coeffs(
    beta: float, h: float, m: int, k_plus: float, k_minus: float
) -> Toeplitz1D:
    """Stencil for -(k_plus D_+^beta + k_minus D_-^beta) via WSGD weights."""
    if not 1.0 < beta < 2.0:
        raise ValueError(f"beta must lie in (1, 2), got {beta}")
    if k_plus < 0 or k_minus < 0 or (k_plus == 0 and k_minus == 0):
        raise ValueError("k_plus, k_minus must be nonnegative and not both zero")
    w = wsgd_weights(beta, m + 1)
    # W: w_1 on the diagonal, w_0 on the first superdiagonal, w_{k+1} on the
    # k-th subdiagonal; as diag coefficients t_k = w_{k+1} (k >= 0), t_{-1} = w_0.
    wc = np.zeros(2 * m - 1)
    wc[m - 1 :] = w[1 : m + 1]
    if m > 1:
        wc[m - 2] = w[0]
    scale = -(h ** (-beta))
    c = scale * (k_plus * wc + k_minus * wc[::-1])
    return Toeplitz1D(c)


def _dim_block(spec: SpatialSpec, i: int) -> Toeplitz1D:
    h = spec.h[i]
    m = spec.m[i]
    if spec.kind == "laplacian":
        return laplacian_coeffs(h, m)
    if spec.kind == "riesz":
        return riesz_centered_coeffs(spec.beta[i], h, m, coeff=spec.coeff[i])
    return wsgd_coeffs(spec.beta[i], h, m, spec.k_plus[i], spec.k_minus[i])


class SpatialOperator:
    """Kronecker-sum operator sum_i I x ... x T_i x ... x I.

    ``blocks[i]`` acts along dimension ``i+1``; on an array of shape
    ``(m_d, ..., m_1) + trailing`` that is axis ``d - 1 - i``.
    """

    def __init__(self, spec: SpatialSpec, blocks: list[Toeplitz1D]):
        self.spec = spec
        self.blocks = blocks
        self.m = spec.m
        self.d = spec.d
        self.J = spec.J
        self.shape = tuple(reversed(spec.m))

    def apply_array(self, arr: np.ndarray) -> np.ndarray:
        """Apply to an array whose first d axes are the spatial axes."""
        out = np.zeros_like(arr)
        for i, block in enumerate(self.blocks):
            out += block.matvec_axis(arr, axis=self.d - 1 - i)
        return out

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.size != self.J:
            raise ValueError(f"vector length {x.size} != operator size {self.J}")
        return self.apply_array(x.reshape(self.shape)).ravel()

    def materialize(self, cap: int = DENSE_CAP) -> np.ndarray:
        _check_cap(self.J, cap)
        G = np.zeros((self.J, self.J))
        for i, block in enumerate(self.blocks):
            term = np.ones((1, 1))
            for k in range(self.d - 1, -1, -1):  # slowest dimension first
                factor = block.materialize(cap) if k == i else np.eye(self.m[k])
                term = np.kron(term, factor)
            G += term
        return G


def assemble_G(spec: SpatialSpec) -> SpatialOperator:
    return SpatialOperator(spec, [_dim_block(spec, i) for i in range(spec.d)])


def G_matvec(G: SpatialOperator, x: np.ndarray) -> np.ndarray:
    return G.matvec(x)


def dim_symbol(spec: SpatialSpec, i: int, theta: np.ndarray) -> np.ndarray:
    """Generating function of the dimension-(i+1) block on angles ``theta``.

    Evaluated as the Fourier sum of the stored stencil coefficients, so it
    is the exact symbol of the truncated (size m_i) coefficient sequence.
    """
    theta = np.asarray(theta, dtype=float)
    block = _dim_block(spec, i)
    c = block.diag_coeffs
    k = np.arange(-(block.m - 1), block.m)
    return np.exp(1j * np.outer(theta, k)) @ c


def spatial_symbol_eval(spec: SpatialSpec, theta) -> complex:
    """Symbol of the full operator at one d-dimensional angle."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.size != spec.d:
        raise ValueError(f"theta needs {spec.d} components, got {theta.size}")
    return complex(sum(dim_symbol(spec, i, theta[i])[0] for i in range(spec.d)))
