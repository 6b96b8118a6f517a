"""Dense, small-scale certification of the solver's spectral guarantees.

Every check builds the relevant matrices densely (sizes are capped), takes
exact eigenvalue/singular-value measurements, compares them against the
closed-form bound constants, and reports a machine-readable pass/fail
record. Essential suprema of symbols are estimated on dense angle grids,
with the temporal symbol's truncation tail budgeted explicitly.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from .allatonce import (
    ProblemSpec,
    assemble_rhs,
    build_operator,
    build_preconditioner,
)
from .gmres import GmresConfig, gmres, solve_one_sided, solve_two_sided
from .spatial import dim_symbol
from .tau import tau_dense
from .temporal import g_alpha_eval, l1_coefficients, build_B
from .toeplitz import DENSE_CAP, _check_cap

SLACK = 1e-8  # absolute slack on strict dense-eigenvalue inequalities


@dataclass
class SpectralBounds:
    """Measured constants and the bound constants they certify."""

    epsilon: float | None = None        # ideal-preconditioner skew radius
    eta: float | None = None            # symbol-quotient bound for the full symbol
    mu_beta: float | None = None        # spatial symbol quotient (0 for symmetric)
    a_check: float | None = None        # extreme eigenvalues of Ptilde^{-1} H(G)
    a_hat: float | None = None
    b_check: float | None = None        # composed equivalence interval
    b_hat: float | None = None
    varsigma: float | None = None       # practical-preconditioner skew bound
    omega_ideal: float | None = None    # eps/sqrt(1+eps^2)
    omega_practical: float | None = None  # sqrt((2+4s^2)/(3+4s^2))
    c_check: float | None = None        # lower bound on lambda_min(P)


@dataclass
class CheckReport:
    name: str
    passed: bool
    config: dict = field(default_factory=dict)
    measured: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _sym(M: np.ndarray) -> np.ndarray:
    return (M + M.T) / 2.0


def _skew(M: np.ndarray) -> np.ndarray:
    return (M - M.T) / 2.0


def _spectral_radius_skew(M: np.ndarray) -> float:
    # real skew-symmetric matrices are normal: 2-norm == spectral radius
    return float(scipy.linalg.svdvals(M)[0])


def check_weighted_mean_inequality(xi, zeta) -> CheckReport:
    """Ratio bounds of a weighted mean of nonnegative over positive numbers."""
    xi = np.asarray(xi, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    if np.any(xi < 0) or np.any(zeta <= 0) or xi.shape != zeta.shape:
        raise ValueError("need xi >= 0 and zeta > 0 of equal length")
    ratios = xi / zeta
    mean = xi.sum() / zeta.sum()
    lo, hi = float(ratios.min()), float(ratios.max())
    passed = lo - 1e-14 <= mean <= hi + 1e-14
    return CheckReport(
        name="weighted_mean_inequality",
        passed=bool(passed),
        config={"length": int(xi.size)},
        measured={"mean": float(mean)},
        bounds={"min_ratio": lo, "max_ratio": hi},
    )


def _dense_toeplitz_from_center(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Dense n x n Toeplitz from centered diagonal coefficients."""
    coeffs = np.asarray(coeffs, dtype=float)
    K = (coeffs.size - 1) // 2
    T = np.zeros((n, n))
    for k in range(-min(K, n - 1), min(K, n - 1) + 1):
        val = coeffs[k + K]
        if val != 0.0:
            T += val * np.eye(n, k=-k)
    return T


def _symbol_from_center(coeffs: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    K = (coeffs.size - 1) // 2
    k = np.arange(-K, K + 1)
    return np.exp(1j * np.outer(thetas, k)) @ coeffs


def check_localization(f_coeffs, g_coeffs, n: int, n_grid: int = 4096) -> CheckReport:
    """Generalized eigenvalues of T[g]^{-1} T[f] against the f/g range.

    Both coefficient sequences must describe real even symbols (centered
    storage, symmetric); g must generate an SPD matrix at size n.
    """
    f_coeffs = np.asarray(f_coeffs, dtype=float)
    g_coeffs = np.asarray(g_coeffs, dtype=float)
    for name, c in (("f_coeffs", f_coeffs), ("g_coeffs", g_coeffs)):
        if c.size % 2 != 1 or not np.allclose(c, c[::-1]):
            raise ValueError(f"{name} must be centered and even-symmetric")
    Tf = _dense_toeplitz_from_center(f_coeffs, n)
    Tg = _dense_toeplitz_from_center(g_coeffs, n)
    if np.linalg.eigvalsh(Tg).min() <= 0:
        raise ValueError("g does not generate an SPD matrix at this size")
    thetas = np.linspace(-np.pi, np.pi, n_grid, endpoint=False)
    fs = _symbol_from_center(f_coeffs, thetas).real
    gs = _symbol_from_center(g_coeffs, thetas).real
    keep = np.abs(gs) > 1e-12 * np.abs(gs).max()  # zeros of g are measure-zero
    quot = fs[keep] / gs[keep]
    r, R = float(quot.min()), float(quot.max())
    eigs = scipy.linalg.eigh(Tf, Tg, eigvals_only=True)
    passed = bool(eigs.min() >= r - SLACK and eigs.max() <= R + SLACK)
    return CheckReport(
        name="toeplitz_localization",
        passed=passed,
        config={"n": n, "grid": n_grid},
        measured={"eig_min": float(eigs.min()), "eig_max": float(eigs.max())},
        bounds={"r": r, "R": R},
    )


def check_temporal_equivalence(alpha: float, N: int) -> CheckReport:
    """Spectrum of tau(H(B))^{-1} H(B) against the (1/2, 3/2) interval."""
    co = l1_coefficients(alpha, N, 1.0)
    B = build_B(co)
    Hd = B.symmetric_part().materialize()
    taud = tau_dense(B.symmetric_part().first_column)
    eigs = scipy.linalg.eigh(Hd, taud, eigvals_only=True)
    passed = bool(eigs.min() > 0.5 and eigs.max() < 1.5)
    return CheckReport(
        name="temporal_tau_equivalence",
        passed=passed,
        config={"alpha": alpha, "N": N},
        measured={"eig_min": float(eigs.min()), "eig_max": float(eigs.max())},
        bounds={"lower": 0.5, "upper": 1.5},
    )


def check_diag_dominance(alpha: float, N: int) -> CheckReport:
    """Sign pattern and strict row dominance of tau(H(B))."""
    co = l1_coefficients(alpha, N, 1.0)
    B = build_B(co)
    taud = tau_dense(B.symmetric_part().first_column)
    diag = np.diag(taud)
    off = taud - np.diag(diag)
    row_gap = diag - np.abs(off).sum(axis=1)
    passed = bool(diag.min() > 0 and off.max() <= 1e-15 and row_gap.min() > 0)
    return CheckReport(
        name="temporal_tau_diagonal_dominance",
        passed=passed,
        config={"alpha": alpha, "N": N},
        measured={
            "diag_min": float(diag.min()),
            "offdiag_max": float(off.max()),
            "row_gap_min": float(row_gap.min()),
        },
        bounds={"diag": 0.0, "offdiag": 0.0, "row_gap": 0.0},
    )


def temporal_quotient_grid(
    alpha: float, n_phi: int = 64, K: int = 100_000
) -> tuple[np.ndarray, np.ndarray, float]:
    """Sampled |Im g|/Re g on phi = k*pi/n_phi, k = 1..n_phi, with tail."""
    phis = np.pi * np.arange(1, n_phi + 1) / n_phi
    vals = np.empty(n_phi, dtype=complex)
    tail = 0.0
    for i, phi in enumerate(phis):
        res = g_alpha_eval(phi, alpha, K=K)
        vals[i] = res.value
        tail = res.tail
    return phis, vals, tail


def measure_mu_beta(spec, n_theta: int = 512, n_coeff: int = 2048) -> float:
    """Essential-sup estimate of |Im w|/Re w for a nonsymmetric spatial symbol.

    The quotient is scale-free in the mesh width, so the symbol is sampled
    from a wide (n_coeff-term) stencil with unit spacing rather than the
    problem's truncated one. The sup of the d-variate quotient equals the
    worst per-dimension quotient (the other dimensions only add positive
    real part, and their symbols vanish at angle zero).
    """
    from .spatial import SpatialSpec

    sups = []
    for i in range(spec.d):
        probe = SpatialSpec(
            kind=spec.kind,
            m=(n_coeff,),
            beta=(spec.beta[i],),
            k_plus=(spec.k_plus[i],),
            k_minus=(spec.k_minus[i],),
            bounds=((0.0, float(n_coeff + 1)),),
        )
        thetas = np.linspace(-np.pi, np.pi, n_theta, endpoint=False)
        thetas = thetas[np.abs(thetas) > 1e-9]
        w = dim_symbol(probe, 0, thetas)
        if np.any(w.real <= 0):
            raise ValueError("sampled spatial symbol has nonpositive real part")
        sups.append(float(np.max(np.abs(w.imag) / w.real)))
    return max(sups)


def check_symbol_quotients(prob: ProblemSpec, K: int = 100_000, n_phi: int = 64,
                           n_theta: int = 512) -> CheckReport:
    """Temporal and spatial symbol quotients and the combined bound eta.

    The temporal quotient is compared against tan(alpha*pi/2) with a
    per-sample budget for the truncated tail; the spatial quotient mu_beta
    is measured on a dense theta grid (0 for symmetric kinds).
    """
    alpha = prob.alpha
    tan_bound = np.tan(alpha * np.pi / 2.0)
    phis, gvals, tail = temporal_quotient_grid(alpha, n_phi=n_phi, K=K)
    re, im = gvals.real, np.abs(gvals.imag)
    re_ok = bool(np.all(re > tail))
    quot = im / re
    budget = tail * (1.0 + quot) / np.maximum(re - tail, 1e-300)
    temporal_ok = bool(np.all(quot < tan_bound + budget))

    spec = prob.spatial
    symmetric = spec.kind in ("laplacian", "riesz")
    if symmetric:
        mu_beta = 0.0
    else:
        mu_beta = measure_mu_beta(spec, n_theta=n_theta)
    eta = tan_bound if symmetric else max(mu_beta, tan_bound)
    passed = re_ok and temporal_ok
    return CheckReport(
        name="symbol_quotients",
        passed=bool(passed),
        config={"alpha": alpha, "kind": spec.kind, "K": K,
                "n_phi": n_phi, "n_theta": n_theta},
        measured={
            "temporal_quotient_max": float(quot.max()),
            "temporal_tail": float(tail),
            "re_min": float(re.min()),
            "mu_beta": mu_beta,
            "eta": float(eta),
        },
        bounds={"tan_alpha_half_pi": float(tan_bound)},
    )


def _dense_system(prob: ProblemSpec, cap: int = DENSE_CAP):
    A, co = build_operator(prob)
    _check_cap(A.size, cap)
    return A, co, A.materialize(cap)


def check_practical_bounds(prob: ProblemSpec, cap: int = DENSE_CAP) -> CheckReport:
    """Spectral equivalence, skew bound and contraction of the tau preconditioner.

    Measures a_check/a_hat densely from Ptilde^{-1} H(G), composes the
    equivalence interval (b_check, b_hat), bounds the preconditioned skew
    radius by varsigma, and verifies the per-iteration residual contraction
    omega = sqrt((2+4*varsigma^2)/(3+4*varsigma^2)) on a two-sided solve.
    """
    A, co, Ad = _dense_system(prob, cap)
    P = build_preconditioner(A)
    Pd = P.materialize(cap)

    Gd = A.G.materialize(cap)
    HG = _sym(Gd)
    # dense Ptilde: spatial part of P (kron-sum of per-dimension tau blocks)
    Ptilde = np.zeros((A.J, A.J))
    for i, block in enumerate(A.G.blocks):
        taud = tau_dense(block.symmetric_part().first_column)
        term = np.ones((1, 1))
        for k in range(A.G.d - 1, -1, -1):
            term = np.kron(term, taud if k == i else np.eye(A.G.m[k]))
        Ptilde += term
    a_eigs = scipy.linalg.eigh(HG, Ptilde, eigvals_only=True)
    a_check, a_hat = float(a_eigs.min()), float(a_eigs.max())
    b_check, b_hat = min(a_check, 0.5), max(a_hat, 1.5)

    HA_eigs = scipy.linalg.eigh(_sym(Ad), Pd, eigvals_only=True)
    equivalence_ok = bool(
        HA_eigs.min() >= b_check - SLACK and HA_eigs.max() <= b_hat + SLACK
    )

    evals, evecs = np.linalg.eigh(Pd)
    Pinv_sqrt = (evecs / np.sqrt(evals)) @ evecs.T
    skew_radius = _spectral_radius_skew(Pinv_sqrt @ _skew(Ad) @ Pinv_sqrt)
    tan_term = 1.5 * np.tan(prob.alpha * np.pi / 2.0)
    if prob.spatial.kind in ("laplacian", "riesz"):
        mu_beta = 0.0
        varsigma = tan_term
    else:
        mu_beta = check_symbol_quotients(prob).measured["mu_beta"]
        varsigma = max(mu_beta * a_hat, tan_term)
    skew_ok = bool(skew_radius <= varsigma + SLACK)

    omega = float(np.sqrt((2.0 + 4.0 * varsigma**2) / (3.0 + 4.0 * varsigma**2)))
    omega_ok = bool(np.sqrt(2.0 / 3.0) - 1e-12 <= omega < 1.0)

    rhs = assemble_rhs(prob, co)
    rep = solve_two_sided(A, P, rhs, GmresConfig(restart=A.size, maxit=A.size))
    hist = rep.residual_history
    k = np.arange(hist.size)
    contraction_ok = bool(np.all(hist <= (omega**k) * hist[0] * (1.0 + 1e-12)))

    c_check = float(scipy.linalg.eigvalsh(Ptilde).min())
    lam_min_ok = bool(P.lambda_min >= c_check - SLACK)

    passed = equivalence_ok and skew_ok and omega_ok and contraction_ok and lam_min_ok
    bounds_rec = SpectralBounds(
        mu_beta=mu_beta, a_check=a_check, a_hat=a_hat,
        b_check=b_check, b_hat=b_hat, varsigma=float(varsigma),
        omega_practical=omega, c_check=c_check,
    )
    return CheckReport(
        name="practical_preconditioner_bounds",
        passed=bool(passed),
        config={"alpha": prob.alpha, "kind": prob.spatial.kind,
                "N": prob.N, "J": prob.spatial.J},
        measured={
            "equivalence_eig_min": float(HA_eigs.min()),
            "equivalence_eig_max": float(HA_eigs.max()),
            "skew_radius": float(skew_radius),
            "lambda_min_P": float(P.lambda_min),
            "contraction_iters": int(rep.iterations),
            "equivalence_ok": equivalence_ok,
            "skew_ok": skew_ok,
            "contraction_ok": contraction_ok,
        },
        bounds={k: v for k, v in asdict(bounds_rec).items() if v is not None},
    )


def check_ideal_contraction(prob: ProblemSpec, cap: int = DENSE_CAP) -> CheckReport:
    """Residual contraction under the exact symmetric-part preconditioner.

    Builds H(A)^{-1/2} densely, runs GMRES on the two-sided system, and
    asserts the per-iteration bound with omega = eps/sqrt(1+eps^2), where
    eps is the dense spectral radius of the preconditioned skew part. The
    symbol-grid estimate of eps is reported alongside but not asserted.
    """
    A, co, Ad = _dense_system(prob, cap)
    HA = _sym(Ad)
    evals, evecs = np.linalg.eigh(HA)
    if evals.min() <= 0:
        raise ValueError("symmetric part is not positive definite")
    Hinv_sqrt = (evecs / np.sqrt(evals)) @ evecs.T
    eps = _spectral_radius_skew(Hinv_sqrt @ _skew(Ad) @ Hinv_sqrt)
    omega = eps / np.sqrt(1.0 + eps**2)

    rhs = assemble_rhs(prob, co)
    bhat = Hinv_sqrt @ rhs
    rep = gmres(
        lambda v: Hinv_sqrt @ (Ad @ (Hinv_sqrt @ v)),
        bhat,
        cfg=GmresConfig(restart=A.size, maxit=A.size),
    )
    hist = rep.residual_history
    k = np.arange(hist.size)
    contraction_ok = bool(
        np.all(hist <= np.maximum(omega, 1e-300) ** k * hist[0] * (1.0 + 1e-12))
    )

    # symbol-grid estimate of the essential-sup quotient, reported only
    q = check_symbol_quotients(prob)
    eps_symbol = q.measured["eta"]

    return CheckReport(
        name="ideal_preconditioner_contraction",
        passed=contraction_ok,
        config={"alpha": prob.alpha, "kind": prob.spatial.kind,
                "N": prob.N, "J": prob.spatial.J},
        measured={
            "epsilon_matrix": float(eps),
            "epsilon_symbol_grid": float(eps_symbol),
            "omega_ideal": float(omega),
            "iterations": int(rep.iterations),
        },
        bounds={"omega_ideal": float(omega)},
    )


def check_residual_relation(prob: ProblemSpec, cap: int = DENSE_CAP) -> CheckReport:
    """One-sided residuals bounded by scaled two-sided residuals.

    With matched zero initial guesses the one-sided preconditioned residual
    at every step j is at most lambda_min(P)^{-1/2} times the two-sided one.
    """
    A, co = build_operator(prob)
    _check_cap(A.size, cap)
    P = build_preconditioner(A)
    rhs = assemble_rhs(prob, co)
    cfg = GmresConfig(restart=A.size, maxit=A.size, rel_tol=1e-12)
    one = solve_one_sided(A, P, rhs, cfg)
    two = solve_two_sided(A, P, rhs, cfg)
    scale = 1.0 / np.sqrt(P.lambda_min)
    k = min(one.residual_history.size, two.residual_history.size)
    lhs = one.residual_history[:k]
    rhs_hist = scale * two.residual_history[:k]
    passed = bool(np.all(lhs <= rhs_hist * (1.0 + 1e-10) + 1e-300))
    return CheckReport(
        name="one_vs_two_sided_residuals",
        passed=passed,
        config={"alpha": prob.alpha, "kind": prob.spatial.kind,
                "N": prob.N, "J": prob.spatial.J},
        measured={
            "max_violation": float(np.max(lhs - rhs_hist)),
            "lambda_min_P": float(P.lambda_min),
            "compared_steps": int(k),
        },
        bounds={"scale": float(scale)},
    )


def measure_spectral_bounds(prob: ProblemSpec, cap: int = DENSE_CAP) -> SpectralBounds:
    """One complete record of measured and bound constants for a problem.

    Combines the symbol quotients, the practical-preconditioner interval
    and skew measurements, and the ideal-preconditioner skew radius.
    """
    quot = check_symbol_quotients(prob)
    practical = check_practical_bounds(prob, cap=cap)
    ideal = check_ideal_contraction(prob, cap=cap)
    return SpectralBounds(
        epsilon=ideal.measured["epsilon_matrix"],
        eta=quot.measured["eta"],
        mu_beta=quot.measured["mu_beta"],
        a_check=practical.bounds["a_check"],
        a_hat=practical.bounds["a_hat"],
        b_check=practical.bounds["b_check"],
        b_hat=practical.bounds["b_hat"],
        varsigma=practical.bounds["varsigma"],
        omega_ideal=ideal.measured["omega_ideal"],
        omega_practical=practical.bounds["omega_practical"],
        c_check=practical.bounds["c_check"],
    )


def _default_probs() -> list[ProblemSpec]:
    from .problems import make_example1, make_example2, make_example3

    return [
        make_example1(0.5, (9, 9), 8),
        make_example2(0.5, (1.5, 1.5), (9, 9), 8),
        make_example3(0.5, (1.2, 1.8), (9, 9), 8),
    ]


def run_suite(suite: str) -> list[CheckReport]:
    """Run a named certification suite: tau, temporal, spectral or all."""
    rng = np.random.default_rng(20240601)
    reports: list[CheckReport] = []
    if suite not in ("tau", "temporal", "spectral", "all"):
        raise ValueError(f"unknown suite {suite!r}")
    if suite in ("tau", "all"):
        lap = np.array([-1.0, 2.0, -1.0])
        one = np.array([1.0])
        reports.append(check_localization(lap, lap, 16))
        reports.append(check_localization(2.0 * lap, lap, 16))
        reports.append(check_localization(lap, one, 16))
        xi = rng.uniform(0.0, 2.0, size=10)
        zeta = rng.uniform(0.5, 2.0, size=10)
        reports.append(check_weighted_mean_inequality(xi, zeta))
    if suite in ("temporal", "all"):
        for alpha in (0.1, 0.2, 0.5, 0.8, 0.9):
            for N in (4, 16, 64, 256):
                reports.append(check_temporal_equivalence(alpha, N))
        for alpha in (0.2, 0.9):
            reports.append(check_diag_dominance(alpha, 256))
        for prob in _default_probs():
            reports.append(check_symbol_quotients(prob))
    if suite in ("spectral", "all"):
        for prob in _default_probs():
            reports.append(check_practical_bounds(prob))
            reports.append(check_ideal_contraction(prob))
            reports.append(check_residual_relation(prob))
    return reports


def write_reports(reports: list[CheckReport], out_path: str | Path) -> Path:
    """Write reports as JSON: one combined file, or one file per check.

    A path ending in ``.json`` receives the full list; otherwise the path
    is treated as a directory with one JSON document per check.
    """
    out_path = Path(out_path)
    payload = [r.to_dict() for r in reports]
    if out_path.suffix == ".json":
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(json.dumps(payload, indent=2))
        return out_path
    out_path.mkdir(parents=True, exist_ok=True)
    counts: dict[str, int] = {}
    for rec in payload:
        base = rec["name"]
        counts[base] = counts.get(base, 0) + 1
        name = base if counts[base] == 1 else f"{base}_{counts[base]}"
        (out_path / f"{name}.json").write_text(json.dumps(rec, indent=2))
    return out_path
