"""Matrix-free all-at-once operator and its sine-transform preconditioner.

The space-time system couples all N time levels of the J spatial unknowns:

    A = G x I_N + I_J x kappa*B,

acting on vectors ordered space-major, u = (u_1; ...; u_J) with each block
u_j running over the time levels 1..N. Equivalently u reshapes to an array
of shape (m_d, ..., m_1, N) in C order.

The preconditioner replaces each nonsymmetric factor by a sine-algebra
surrogate: the spatial part by the Kronecker sum of the per-dimension tau
projections of the symmetrized blocks (for the Laplacian this is the
spatial matrix itself), and the temporal part by kappa * tau(H(B)). The
result P = S Lambda S is applied through forward/inverse DST-I sweeps over
every axis, with the diagonal Lambda stored as two factor sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spatial import SpatialOperator, SpatialSpec, assemble_G
from .tau import dst1, tau_eigs_fast
from .temporal import L1Coefficients, build_B, l1_coefficients
from .toeplitz import DENSE_CAP, LowerTriToeplitz, _check_cap


@dataclass(frozen=True)
class ProblemSpec:
    """A non-local evolution problem with manufactured data.

    ``source`` and ``initial`` take the spatial coordinate arrays (one per
    dimension, broadcastable) plus, for the source, the time array;
    ``exact`` is optional and only used for error reporting.
    """

    spatial: SpatialSpec
    alpha: float
    T_final: float
    N: int
    source: Callable[..., np.ndarray]
    initial: Callable[..., np.ndarray]
    exact: Callable[..., np.ndarray] | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.T_final <= 0.0:
            raise ValueError(f"T_final must be positive, got {self.T_final}")


class AllAtOnceOperator:
    """The operator A = G x I_N + I_J x kappa*B, applied via FFT kernels."""

    def __init__(self, G: SpatialOperator, B: LowerTriToeplitz, kappa: float):
        self.G = G
        self.B = B
        self.kappa = float(kappa)
        self.N = B.m
        self.J = G.J
        self.size = self.N * self.J
        self.shape3 = G.shape + (self.N,)

    def apply(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.size != self.size:
            raise ValueError(f"vector length {u.size} != system size {self.size}")
        u3 = u.reshape(self.shape3)
        out = self.G.apply_array(u3)
        out += self.kappa * self.B.matvec_axis(u3, axis=-1)
        return out.ravel()

    def materialize(self, cap: int = DENSE_CAP) -> np.ndarray:
        _check_cap(self.size, cap)
        Gd = self.G.materialize(cap)
        Bd = self.B.materialize(cap)
        return np.kron(Gd, np.eye(self.N)) + np.kron(
            np.eye(self.J), self.kappa * Bd
        )


def build_operator(prob: ProblemSpec) -> tuple[AllAtOnceOperator, L1Coefficients]:
    coeffs = l1_coefficients(prob.alpha, prob.N, prob.T_final)
    G = assemble_G(prob.spatial)
    B = build_B(coeffs)
    return AllAtOnceOperator(G, B, coeffs.kappa), coeffs


def apply_A(op: AllAtOnceOperator, u: np.ndarray) -> np.ndarray:
    return op.apply(u)


def _open_grid(spec: SpatialSpec) -> list[np.ndarray]:
    """Coordinate arrays shaped for broadcasting over (m_d, ..., m_1, N)."""
    axes = spec.grid()
    d = spec.d
    out = []
    for i, x in enumerate(axes):  # dimension i+1 lives on axis d-1-i
        shape = [1] * (d + 1)
        shape[d - 1 - i] = x.size
        out.append(x.reshape(shape))
    return out


def time_grid(prob: ProblemSpec) -> np.ndarray:
    """Time levels t_n = n*mu, n = 1..N."""
    mu = prob.T_final / prob.N
    return mu * np.arange(1, prob.N + 1)


def assemble_rhs(prob: ProblemSpec, coeffs: L1Coefficients) -> np.ndarray:
    """Right-hand side f(x_j, t_n) + kappa * a_{n-1} * psi(x_j), space-major."""
    xs = _open_grid(prob.spatial)
    t = time_grid(prob)
    rhs = np.broadcast_to(
        prob.source(*xs, t), prob.spatial.m[::-1] + (prob.N,)
    ).astype(float, copy=True)
    psi = np.asarray(prob.initial(*[x[..., 0] for x in xs]), dtype=float)
    if np.any(psi != 0.0):
        rhs += coeffs.kappa * psi[..., None] * coeffs.a
    return rhs.ravel()


def evaluate_exact(prob: ProblemSpec) -> np.ndarray:
    """Exact solution sampled on the space-time grid, space-major order."""
    if prob.exact is None:
        raise ValueError("problem has no exact solution attached")
    xs = _open_grid(prob.spatial)
    t = time_grid(prob)
    vals = np.broadcast_to(prob.exact(*xs, t), prob.spatial.m[::-1] + (prob.N,))
    return np.asarray(vals, dtype=float).ravel()


class TauPinTPreconditioner:
    """Diagonalized preconditioner P = S Lambda S.

    ``lam_space`` holds the spatial Kronecker-sum eigenvalues on the grid
    shape, ``upsilon`` the temporal tau eigenvalues; the combined diagonal
    is Lambda[j, n] = lam_space[j] + kappa * upsilon[n], formed on the fly.
    """

    def __init__(
        self,
        space_eigs: list[np.ndarray],
        upsilon: np.ndarray,
        kappa: float,
    ):
        self.space_eigs = [np.asarray(q, dtype=float) for q in space_eigs]
        self.upsilon = np.asarray(upsilon, dtype=float)
        self.kappa = float(kappa)
        d = len(self.space_eigs)
        lam = np.zeros(tuple(q.size for q in reversed(self.space_eigs)))
        for i, q in enumerate(self.space_eigs):
            shape = [1] * d
            shape[d - 1 - i] = q.size
            lam = lam + q.reshape(shape)
        self.lam_space = lam
        self.N = self.upsilon.size
        self.J = lam.size
        self.size = self.N * self.J
        self.lambda_min = float(lam.min() + self.kappa * self.upsilon.min())
        self.lambda_max = float(lam.max() + self.kappa * self.upsilon.max())
        if self.lambda_min <= 0.0:
            raise ValueError(
                "preconditioner diagonal is not positive; "
                "the discretization violates a construction invariant"
            )

    def _combined(self) -> np.ndarray:
        return self.lam_space[..., None] + self.kappa * self.upsilon

    def _sweep(self, v: np.ndarray, weight: np.ndarray) -> np.ndarray:
        v3 = np.asarray(v, dtype=float).reshape(self.lam_space.shape + (self.N,))
        w = v3
        for ax in range(w.ndim):
            w = dst1(w, axis=ax)
        w = w * weight
        for ax in range(w.ndim):
            w = dst1(w, axis=ax)
        return w.ravel()

    def apply_inv(self, v: np.ndarray) -> np.ndarray:
        return self._sweep(v, 1.0 / self._combined())

    def apply_inv_sqrt(self, v: np.ndarray) -> np.ndarray:
        return self._sweep(v, 1.0 / np.sqrt(self._combined()))

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self._sweep(v, self._combined())

    def materialize(self, cap: int = DENSE_CAP) -> np.ndarray:
        from .tau import dst1_dense  # local import keeps oracle deps out of hot path

        _check_cap(self.size, cap)
        S = np.ones((1, 1))
        for q in reversed(self.space_eigs):
            S = np.kron(S, dst1_dense(q.size))
        S = np.kron(S, dst1_dense(self.N))
        lam = self._combined().ravel()
        return (S * lam) @ S


def build_preconditioner(op: AllAtOnceOperator) -> TauPinTPreconditioner:
    """Tau surrogate of the symmetrized operator, per factor.

    Spatial eigenvalues come from tau(H(T_i)) per dimension (for symmetric
    stencils already in the sine algebra, e.g. the Laplacian, that is T_i
    itself); temporal eigenvalues from tau(H(B)).
    """
    space_eigs = [
        tau_eigs_fast(block.symmetric_part().first_column).eigs
        for block in op.G.blocks
    ]
    upsilon = tau_eigs_fast(op.B.symmetric_part().first_column).eigs
    return TauPinTPreconditioner(space_eigs, upsilon, op.kappa)


def apply_P_inv(P: TauPinTPreconditioner, v: np.ndarray) -> np.ndarray:
    return P.apply_inv(v)


def apply_P_inv_sqrt(P: TauPinTPreconditioner, v: np.ndarray) -> np.ndarray:
    return P.apply_inv_sqrt(v)
