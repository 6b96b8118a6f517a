"""Command-line interface: benchmark solves and spectral verification.

Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 output I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import ReportIOError, RunConfig, emit_report, run_example

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(","))


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taupint",
        description="All-at-once solvers for non-local evolutionary PDEs "
        "with a sine-transform preconditioner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run a benchmark configuration")
    solve.add_argument("--example", type=int, choices=(1, 2, 3), default=None,
                       help="built-in problem: 1 heat, 2 Riesz, 3 Riemann-Liouville")
    solve.add_argument("--alpha", type=float, default=None)
    solve.add_argument("--beta", type=_parse_floats, default=None,
                       metavar="B1,B2", help="fractional orders per dimension")
    solve.add_argument("--n", type=int, default=None, help="time steps N")
    solve.add_argument("--m", type=_parse_ints, default=None,
                       metavar="M1,M2", help="interior points per dimension")
    solve.add_argument("--method", choices=("gmres", "pgmres", "both"), default=None)
    solve.add_argument("--out", type=str, default=None)
    solve.add_argument("--format", choices=("csv", "json"), default=None)
    solve.add_argument("--restart", type=int, default=None)
    solve.add_argument("--maxit", type=int, default=None)
    solve.add_argument("--tol", type=float, default=None)
    solve.add_argument("--time-budget", type=float, default=None,
                       help="wall budget (s) for unpreconditioned runs")
    solve.add_argument("--config", type=str, default=None,
                       help="JSON file with RunConfig fields; flags override")
    solve.add_argument("--oracle", action="store_true", default=None,
                       help="also run the spectral checks when the system is small")
    fig = solve.add_mutually_exclusive_group()
    fig.add_argument("--figures", dest="figures", action="store_true", default=None)
    fig.add_argument("--no-figures", dest="figures", action="store_false")

    verify = sub.add_parser("verify", help="run dense spectral certification checks")
    verify.add_argument("--suite", choices=("tau", "temporal", "spectral", "all"),
                        default="all")
    verify.add_argument("--out", type=str, default=None,
                        help="JSON file or directory for the check reports")
    return parser


_FLAG_TO_FIELD = {
    "example": "example",
    "alpha": "alpha",
    "beta": "beta",
    "n": "N",
    "m": "m",
    "method": "method",
    "out": "out",
    "format": "format",
    "restart": "restart",
    "maxit": "maxit",
    "tol": "tol",
    "time_budget": "time_budget",
    "oracle": "oracle",
    "figures": "figures",
}


def _load_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config is not None:
        raw = json.loads(Path(args.config).read_text())
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        for key, val in raw.items():
            if key not in {f for f in RunConfig.__dataclass_fields__}:
                raise ValueError(f"unknown config field {key!r}")
            values[key] = tuple(val) if isinstance(val, list) else val
    for flag, field_name in _FLAG_TO_FIELD.items():
        val = getattr(args, flag)
        if val is not None:
            values[field_name] = val
    return RunConfig(**values)


def _cmd_solve(args: argparse.Namespace) -> int:
    try:
        cfg = _load_config(args)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    rows = run_example(cfg)
    for row in rows:
        iters = "-" if row.iters is None else row.iters
        err = "-" if row.error is None else f"{row.error:.4e}"
        print(f"{row.method}: iters={iters} error={err} converged={row.converged}")

    if cfg.out:
        try:
            path = emit_report(rows, cfg.format, cfg.out)
        except ReportIOError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {path}")
        if cfg.figures:
            from .figures import render_report_figures

            for made in render_report_figures(rows, path):
                print(f"wrote {made}")

    if cfg.oracle:
        size = cfg.N
        for mi in cfg.m:
            size *= mi
        if size <= 4096:
            from .bench import build_problem
            from .oracle import check_practical_bounds

            rep = check_practical_bounds(build_problem(cfg))
            print(f"oracle practical bounds: {'pass' if rep.passed else 'FAIL'}")
            if not rep.passed:
                return EXIT_VERIFY_FAILED
        else:
            print(f"oracle skipped: system size {size} exceeds the dense cap")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    from .oracle import run_suite, write_reports

    try:
        reports = run_suite(args.suite)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    failed = [r for r in reports if not r.passed]
    for rep in reports:
        print(f"{'pass' if rep.passed else 'FAIL'}: {rep.name} {rep.config}")
    if args.out:
        try:
            write_reports(reports, args.out)
        except OSError as exc:
            print(f"error: cannot write reports: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {args.out}")
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve":
        return _cmd_solve(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
