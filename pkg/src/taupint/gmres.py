"""Restarted GMRES with left- and two-sided-preconditioned drives.

Modified Gram-Schmidt Arnoldi with Givens-rotation least squares. With a
left preconditioner M the Krylov space is built for M^{-1}A and the
minimized (and by default monitored) residual norm is the preconditioned
one, matching the stock behaviour of common library solvers; the true
residual norm can be monitored instead, or recorded alongside.

Iteration counts are total inner iterations across restart cycles.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass
class GmresConfig:
    restart: int = 20
    maxit: int = 1000  # total inner iterations
    rel_tol: float = 1e-8
    residual_norm_mode: str = "preconditioned"  # or "true"
    record_history: bool = False
    breakdown_tol: float = 1e-14
    wall_budget: float | None = None  # seconds; None = unlimited

    def __post_init__(self):
        if self.restart < 1:
            raise ValueError("restart must be >= 1")
        if self.maxit < 1:
            raise ValueError("maxit must be >= 1")
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")
        if self.residual_norm_mode not in ("preconditioned", "true"):
            raise ValueError(f"unknown residual norm mode {self.residual_norm_mode!r}")


@dataclass
class SolveReport:
    iterations: int
    converged: bool
    residual_history: np.ndarray
    wall_seconds: float
    solution: np.ndarray
    true_residual_history: np.ndarray | None = None
    breakdown: bool = False
    budget_exceeded: bool = False


def _norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def gmres(apply_op, b, x0=None, apply_prec=None, cfg: GmresConfig | None = None) -> SolveReport:
    """Solve ``apply_op(x) = b``, optionally left-preconditioned.

    ``apply_op`` and ``apply_prec`` are callables mapping vectors to
    vectors; ``apply_prec`` applies the preconditioner inverse. On Arnoldi
    breakdown the best iterate so far is returned, flagged as either
    converged (happy breakdown) or broken down, never silently wrong.
    """
    cfg = cfg or GmresConfig()
    b = np.asarray(b, dtype=float)
    n = b.size
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    prec = apply_prec if apply_prec is not None else (lambda v: v)
    track_true = cfg.residual_norm_mode == "true" or cfg.record_history
    t_start = time.perf_counter()

    def cfg_norms(r_true: np.ndarray, z: np.ndarray) -> tuple[float, float]:
        return _norm(r_true), _norm(z)

    r = b - apply_op(x) if np.any(x) else b.copy()
    z = prec(r)
    true0, prec0 = cfg_norms(r, z)
    norm0 = true0 if cfg.residual_norm_mode == "true" else prec0
    history = [norm0]
    true_history = [true0] if cfg.record_history else None
    if norm0 == 0.0:
        return SolveReport(0, True, np.array(history), time.perf_counter() - t_start,
                           x, _arr(true_history))
    tol_abs = cfg.rel_tol * norm0
    scale = prec0  # breakdown detection scale: rhs norm of the iterated system

    total = 0
    converged = False
    breakdown = False
    budget_hit = False
    while total < cfg.maxit and not (converged or breakdown or budget_hit):
        r = b - apply_op(x)
        z = prec(r)
        beta = _norm(z)
        if beta == 0.0:
            converged = True
            break
        V = np.empty((cfg.restart + 1, n))
        V[0] = z / beta
        H = np.zeros((cfg.restart + 1, cfg.restart))
        cs = np.zeros(cfg.restart)
        sn = np.zeros(cfg.restart)
        g = np.zeros(cfg.restart + 1)
        g[0] = beta
        j = -1
        formed = None
        for j in range(cfg.restart):
            if total >= cfg.maxit:
                j -= 1
                break
            # np.array (not asarray): operator callbacks may return their
            # input unchanged, and MGS updates w in place
            w = np.array(prec(apply_op(V[j])), dtype=float)
            for i in range(j + 1):  # modified Gram-Schmidt
                H[i, j] = V[i] @ w
                w -= H[i, j] * V[i]
            hnext = _norm(w)
            H[j + 1, j] = hnext
            is_breakdown = hnext < cfg.breakdown_tol * scale
            if not is_breakdown:
                V[j + 1] = w / hnext
            for i in range(j):  # apply accumulated rotations to the new column
                hi = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
                H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = hi
            denom = np.hypot(H[j, j], H[j + 1, j])
            cs[j] = H[j, j] / denom
            sn[j] = H[j + 1, j] / denom
            H[j, j] = denom
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]
            total += 1
            est = abs(g[j + 1])

            formed = None
            cur = est
            if track_true:
                xj = _form_iterate(x, V, H, g, j)
                tn = _norm(b - apply_op(xj))
                formed = xj
                if cfg.record_history:
                    true_history.append(tn)
                if cfg.residual_norm_mode == "true":
                    cur = tn
            history.append(cur)

            over_budget = (
                cfg.wall_budget is not None
                and time.perf_counter() - t_start > cfg.wall_budget
            )
            if cur <= tol_abs or is_breakdown or over_budget:
                xj = formed if formed is not None else _form_iterate(x, V, H, g, j)
                if cfg.residual_norm_mode == "true":
                    actual = _norm(b - apply_op(xj)) if formed is None else cur
                else:
                    actual = _norm(prec(b - apply_op(xj)))
                history[-1] = actual
                x = xj
                if actual <= tol_abs:
                    converged = True
                    break
                if is_breakdown:
                    breakdown = True
                    break
                if over_budget:
                    budget_hit = True
                    break
                formed = xj
                break  # estimate was optimistic; restart from the formed iterate
        if not (converged or breakdown or budget_hit) and j >= 0 and formed is None:
            x = _form_iterate(x, V, H, g, j)
        elif formed is not None and not (converged or breakdown or budget_hit):
            x = formed
        if (
            cfg.wall_budget is not None
            and time.perf_counter() - t_start > cfg.wall_budget
        ):
            budget_hit = True

    return SolveReport(
        iterations=total,
        converged=converged,
        residual_history=np.array(history),
        wall_seconds=time.perf_counter() - t_start,
        solution=x,
        true_residual_history=_arr(true_history),
        breakdown=breakdown,
        budget_exceeded=budget_hit,
    )


def _arr(seq):
    return None if seq is None else np.asarray(seq, dtype=float)


def _form_iterate(x, V, H, g, j):
    y = scipy.linalg.solve_triangular(H[: j + 1, : j + 1], g[: j + 1])
    return x + V[: j + 1].T @ y


def solve_one_sided(A, P, f, cfg: GmresConfig | None = None) -> SolveReport:
    """Left-preconditioned solve of A u = f with zero initial guess."""
    return gmres(A.apply, f, x0=None, apply_prec=P.apply_inv, cfg=cfg)


def solve_two_sided(A, P, f, cfg: GmresConfig | None = None) -> SolveReport:
    """Symmetric-form preconditioned solve; returns u in original variables.

    Runs GMRES on v -> P^{-1/2} A P^{-1/2} v with right-hand side P^{-1/2}f
    and maps the iterate back through P^{-1/2}. The recorded history is the
    plain residual of the transformed system.
    """
    rep = gmres(
        lambda v: P.apply_inv_sqrt(A.apply(P.apply_inv_sqrt(v))),
        P.apply_inv_sqrt(np.asarray(f, dtype=float)),
        x0=None,
        apply_prec=None,
        cfg=cfg,
    )
    rep.solution = P.apply_inv_sqrt(rep.solution)
    return rep
