"""Figure rendering for benchmark reports.

Figures are written next to the delimited output: a semilog residual
history per solve and an iteration-count summary across the rows.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bench import TableRow


def _label(row: TableRow) -> str:
    return (
        f"{row.method} a={row.alpha:g} b=({row.beta1:g},{row.beta2:g}) "
        f"h={row.h:.4g} mu={row.mu:.4g}"
    )


def render_residual_figure(rows: list[TableRow], path: str | Path) -> Path | None:
    """Residual-history curves, one per solve that recorded a history."""
    curves = [r for r in rows if r.residual_history is not None]
    if not curves:
        return None
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for row in curves:
        hist = row.residual_history
        ax.semilogy(range(len(hist)), hist / hist[0], label=_label(row))
    ax.set_xlabel("iteration")
    ax.set_ylabel("relative residual")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_iteration_figure(rows: list[TableRow], path: str | Path) -> Path | None:
    """Iteration counts per row, grouped by method."""
    plotted = [r for r in rows if r.iters is not None]
    if not plotted:
        return None
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    methods = sorted({r.method for r in plotted})
    positions = range(len(plotted))
    for method in methods:
        xs = [i for i, r in enumerate(plotted) if r.method == method]
        ys = [plotted[i].iters for i in xs]
        ax.plot(xs, ys, "o-", label=method)
    ax.set_xticks(list(positions))
    ax.set_xticklabels(
        [f"h={r.h:.3g}\nmu={r.mu:.3g}" for r in plotted], fontsize=7
    )
    ax.set_ylabel("iterations")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_figures(rows: list[TableRow], report_path: str | Path) -> list[Path]:
    """Render the standard figure set alongside a report file."""
    report_path = Path(report_path)
    stem = report_path.with_suffix("")
    out = []
    for renderer, suffix in (
        (render_residual_figure, "_residuals.png"),
        (render_iteration_figure, "_iterations.png"),
    ):
        made = renderer(rows, Path(str(stem) + suffix))
        if made is not None:
            out.append(made)
    return out
