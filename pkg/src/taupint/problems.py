"""Built-in benchmark problems with manufactured exact solutions.

All three live on the unit square with T = 1 and zero initial data:

1. heat (Laplacian) with exact solution t^3 x1^3 x2^3 (1-x1)^2 (1-x2)^2;
2. Riesz diffusion, unit coefficients, exact solution
   t^(alpha+1) x1^2 (1-x1)^2 x2^2 (1-x2)^2;
3. two-sided Riemann-Liouville diffusion with coefficients
   k_plus = (0.4, 1.2), k_minus = (0.7, 1.5) and exact solution
   t^(alpha+2) x1^4 (1-x1)^4 x2^4 (1-x2)^4.

Source terms are the exact Caputo time derivative minus the exact spatial
operator applied to the manufactured solution.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gamma

from .allatonce import ProblemSpec
from .spatial import SpatialSpec

EXAMPLE3_K_PLUS = (0.4, 1.2)
EXAMPLE3_K_MINUS = (0.7, 1.5)


def _zero_initial(*xs):
    return np.zeros(np.broadcast_shapes(*[np.shape(x) for x in xs]))


def make_example1(alpha: float, m: tuple[int, int], N: int) -> ProblemSpec:
    """Heat problem (Laplacian spatial operator)."""

    def exact(x1, x2, t):
        return t**3 * x1**3 * x2**3 * (1 - x1) ** 2 * (1 - x2) ** 2

    def source(x1, x2, t):
        time_part = (
            6.0 * t ** (3.0 - alpha) / gamma(4.0 - alpha)
            * x1**3 * x2**3 * (1 - x1) ** 2 * (1 - x2) ** 2
        )
        lap = x2**3 * (1 - x2) ** 2 * (20 * x1**3 - 24 * x1**2 + 6 * x1) + x1**3 * (
            1 - x1
        ) ** 2 * (20 * x2**3 - 24 * x2**2 + 6 * x2)
        return time_part - t**3 * lap

    spatial = SpatialSpec(kind="laplacian", m=tuple(m))
    return ProblemSpec(
        spatial=spatial, alpha=alpha, T_final=1.0, N=N,
        source=source, initial=_zero_initial, exact=exact,
    )


def _riesz_1d_profile(x, beta):
    """(D_+^beta + D_-^beta) of x^2 (1-x)^2 on (0, 1)."""

    def one_sided(y):
        return (
            2.0 * y ** (2.0 - beta) / gamma(3.0 - beta)
            - 12.0 * y ** (3.0 - beta) / gamma(4.0 - beta)
            + 24.0 * y ** (4.0 - beta) / gamma(5.0 - beta)
        )

    return one_sided(x) + one_sided(1.0 - x)


def make_example2(
    alpha: float, beta: tuple[float, float], m: tuple[int, int], N: int
) -> ProblemSpec:
    """Riesz diffusion with unit coefficients."""
    b1, b2 = beta

    def exact(x1, x2, t):
        return t ** (alpha + 1.0) * x1**2 * (1 - x1) ** 2 * x2**2 * (1 - x2) ** 2

    def source(x1, x2, t):
        s1 = _riesz_1d_profile(x1, b1) / (2.0 * np.cos(b1 * np.pi / 2.0))
        s2 = _riesz_1d_profile(x2, b2) / (2.0 * np.cos(b2 * np.pi / 2.0))
        space = s1 * x2**2 * (1 - x2) ** 2 + s2 * x1**2 * (1 - x1) ** 2
        time_part = gamma(alpha + 2.0) * t * x1**2 * (1 - x1) ** 2 * x2**2 * (1 - x2) ** 2
        return t ** (alpha + 1.0) * space + time_part

    spatial = SpatialSpec(kind="riesz", m=tuple(m), beta=tuple(beta), coeff=(1.0, 1.0))
    return ProblemSpec(
        spatial=spatial, alpha=alpha, T_final=1.0, N=N,
        source=source, initial=_zero_initial, exact=exact,
    )


def _rl_profile(psi, order):
    """One-sided derivative of order ``order`` of x^4 (1-x)^4, evaluated at psi.

    Expands x^4 (1-x)^4 = sum_k (-1)^k C(4,k) x^(8-k) and differentiates
    term by term.
    """
    out = np.zeros(np.shape(psi))
    for k in range(5):
        coef = (-1.0) ** k * _binom4(k) * gamma(9.0 - k) / gamma(9.0 - k - order)
        out = out + coef * psi ** (8.0 - k - order)
    return out


def _binom4(k: int) -> float:
    return float([1, 4, 6, 4, 1][k])


def make_example3(
    alpha: float,
    beta: tuple[float, float],
    m: tuple[int, int],
    N: int,
    k_plus: tuple[float, float] = EXAMPLE3_K_PLUS,
    k_minus: tuple[float, float] = EXAMPLE3_K_MINUS,
) -> ProblemSpec:
    """Two-sided Riemann-Liouville diffusion (WSGD discretization)."""
    b1, b2 = beta
    kp1, kp2 = k_plus
    km1, km2 = k_minus

    def exact(x1, x2, t):
        return (
            t ** (alpha + 2.0)
            * x1**4 * (1 - x1) ** 4 * x2**4 * (1 - x2) ** 4
        )

    def source(x1, x2, t):
        prof1 = x1**4 * (1 - x1) ** 4
        prof2 = x2**4 * (1 - x2) ** 4
        time_part = gamma(alpha + 3.0) / 2.0 * t**2 * prof1 * prof2
        space = (kp1 * _rl_profile(x1, b1) + km1 * _rl_profile(1.0 - x1, b1)) * prof2
        space = space + (kp2 * _rl_profile(x2, b2) + km2 * _rl_profile(1.0 - x2, b2)) * prof1
        return time_part - t ** (2.0 + alpha) * space

    spatial = SpatialSpec(
        kind="riemann_liouville", m=tuple(m), beta=tuple(beta),
        k_plus=(kp1, kp2), k_minus=(km1, km2),
    )
    return ProblemSpec(
        spatial=spatial, alpha=alpha, T_final=1.0, N=N,
        source=source, initial=_zero_initial, exact=exact,
    )


def make_example(
    example: int,
    alpha: float,
    m: tuple[int, int],
    N: int,
    beta: tuple[float, float] | None = None,
) -> ProblemSpec:
    if example == 1:
        return make_example1(alpha, m, N)
    if example == 2:
        return make_example2(alpha, beta or (1.5, 1.5), m, N)
    if example == 3:
        return make_example3(alpha, beta or (1.5, 1.5), m, N)
    raise ValueError(f"unknown example {example}; choose 1, 2 or 3")
