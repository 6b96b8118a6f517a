"""Benchmark harness: configure a problem, solve, and emit table rows.

Rows carry (alpha, beta, h, mu, method, cpu seconds, iterations, max-norm
error, converged) and serialize to CSV or JSON with a fixed schema. Wall
budgets abort plain-GMRES runs, which are then reported with dash cells,
mirroring how over-budget runs are conventionally tabulated.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .allatonce import (
    ProblemSpec,
    assemble_rhs,
    build_operator,
    build_preconditioner,
    evaluate_exact,
)
from .gmres import GmresConfig, SolveReport, gmres, solve_one_sided
from .problems import make_example

CSV_HEADER = ["alpha", "beta1", "beta2", "h", "mu", "method",
              "cpu_s", "iters", "error", "converged"]

# Plain GMRES needs room above the preconditioned default: reference runs
# report totals in the thousands under restart 20.
UNPRECONDITIONED_MAXIT = 20_000


@dataclass
class RunConfig:
    """One benchmark invocation; mirrors the CLI and the JSON config file."""

    example: int = 1
    alpha: float = 0.5
    beta: tuple[float, float] | None = None
    N: int = 64
    m: tuple[int, ...] = (31, 31)
    method: str = "both"  # gmres | pgmres | both
    restart: int = 20
    # None: 1000 for preconditioned runs, 20000 for plain runs (reference
    # plain-GMRES totals under restart 20 run into the thousands)
    maxit: int | None = None
    tol: float = 1e-8
    time_budget: float = 300.0
    out: str | None = None
    format: str = "csv"  # csv | json
    oracle: bool = False
    figures: bool = True

    def __post_init__(self):
        if self.method not in ("gmres", "pgmres", "both"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.example not in (1, 2, 3):
            raise ValueError(f"example must be 1, 2 or 3, got {self.example}")


@dataclass
class TableRow:
    alpha: float
    beta1: float
    beta2: float
    h: float
    mu: float
    method: str
    cpu_s: float | None
    iters: int | None
    error: float | None
    converged: bool
    residual_history: np.ndarray | None = field(default=None, repr=False, compare=False)


def _fmt_error(x: float | None) -> str:
    return "-" if x is None else f"{x:.4e}"


def _fmt_cpu(x: float | None) -> str:
    return "-" if x is None else f"{x:.2f}"


def _row_cells(row: TableRow) -> list[str]:
    return [
        f"{row.alpha:g}",
        f"{row.beta1:g}",
        f"{row.beta2:g}",
        f"{row.h:.10g}",
        f"{row.mu:.10g}",
        row.method,
        _fmt_cpu(row.cpu_s),
        "-" if row.iters is None else str(row.iters),
        _fmt_error(row.error),
        str(row.converged).lower(),
    ]


def build_problem(cfg: RunConfig) -> ProblemSpec:
    return make_example(cfg.example, cfg.alpha, tuple(cfg.m), cfg.N, beta=cfg.beta)


def _solve(prob: ProblemSpec, cfg: RunConfig, preconditioned: bool) -> SolveReport:
    A, co = build_operator(prob)
    rhs = assemble_rhs(prob, co)
    if preconditioned:
        maxit = cfg.maxit if cfg.maxit is not None else 1000
        gcfg = GmresConfig(restart=cfg.restart, maxit=maxit, rel_tol=cfg.tol)
        return solve_one_sided(A, build_preconditioner(A), rhs, gcfg)
    maxit = cfg.maxit if cfg.maxit is not None else UNPRECONDITIONED_MAXIT
    gcfg = GmresConfig(
        restart=cfg.restart,
        maxit=maxit,
        rel_tol=cfg.tol,
        wall_budget=cfg.time_budget,
    )
    return gmres(A.apply, rhs, cfg=gcfg)


def _error_against_exact(prob: ProblemSpec, rep: SolveReport) -> float | None:
    if prob.exact is None:
        return None
    return float(np.max(np.abs(rep.solution - evaluate_exact(prob))))


def _to_row(prob: ProblemSpec, cfg: RunConfig, method: str, rep: SolveReport) -> TableRow:
    beta = prob.spatial.beta or (2.0, 2.0)
    if rep.budget_exceeded:
        cpu, iters, err = None, None, None
    else:
        cpu, iters = rep.wall_seconds, rep.iterations
        err = _error_against_exact(prob, rep)
    return TableRow(
        alpha=prob.alpha,
        beta1=float(beta[0]),
        beta2=float(beta[1]) if len(beta) > 1 else float(beta[0]),
        h=prob.spatial.h[0],
        mu=prob.T_final / prob.N,
        method=method,
        cpu_s=cpu,
        iters=iters,
        error=err,
        converged=rep.converged,
        residual_history=rep.residual_history,
    )


def run_example(cfg: RunConfig) -> list[TableRow]:
    """Solve one configuration with the requested method(s)."""
    prob = build_problem(cfg)
    rows = []
    if cfg.method in ("gmres", "both"):
        rows.append(_to_row(prob, cfg, "gmres", _solve(prob, cfg, False)))
    if cfg.method in ("pgmres", "both"):
        rows.append(_to_row(prob, cfg, "pgmres", _solve(prob, cfg, True)))
    return rows


def run_mesh_independence_sweep(
    cfg: RunConfig, mus: list[float] | None = None
) -> list[TableRow]:
    """Rows across a mu ladder at fixed spatial mesh."""
    mus = mus or [1 / 8, 1 / 16, 1 / 32, 1 / 64]
    rows: list[TableRow] = []
    for mu in mus:
        N = round(1.0 / mu)
        step_cfg = RunConfig(**{**_cfg_dict(cfg), "N": N, "out": None})
        rows.extend(run_example(step_cfg))
    return rows


def preconditioned_spread(rows: list[TableRow]) -> int:
    """Max spread of preconditioned iteration counts in a sweep."""
    iters = [r.iters for r in rows if r.method == "pgmres" and r.iters is not None]
    return 0 if not iters else int(max(iters) - min(iters))


def _cfg_dict(cfg: RunConfig) -> dict:
    return {f.name: getattr(cfg, f.name) for f in fields(RunConfig)}


def rows_to_csv(rows: list[TableRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(_row_cells(row))
    return buf.getvalue()


def rows_to_json(rows: list[TableRow]) -> str:
    recs = [dict(zip(CSV_HEADER, _row_cells(row))) for row in rows]
    return json.dumps(recs, indent=2)


def emit_report(rows: list[TableRow], fmt: str, path: str | Path) -> Path:
    """Write rows in the fixed schema; deterministic field formatting."""
    path = Path(path)
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise ReportIOError(str(exc)) from exc
    return path


class ReportIOError(RuntimeError):
    """Report file could not be written."""


def parse_report(path: str | Path) -> list[dict]:
    """Round-trip reader for emitted CSV/JSON reports."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return json.loads(text)
    reader = csv.DictReader(io.StringIO(text))
    return list(reader)
