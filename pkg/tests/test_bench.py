import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from taupint.bench import (
    CSV_HEADER,
    RunConfig,
    TableRow,
    emit_report,
    parse_report,
    preconditioned_spread,
    rows_to_csv,
    run_example,
    run_mesh_independence_sweep,
)
from taupint.cli import main

DATA = Path(__file__).parent / "data"


def small_cfg(**overrides):
    base = dict(example=1, alpha=0.5, N=8, m=(7, 7), method="pgmres",
                out=None, figures=False)
    base.update(overrides)
    return RunConfig(**base)


def test_run_example_produces_converged_row():
    rows = run_example(small_cfg())
    assert len(rows) == 1
    row = rows[0]
    assert row.method == "pgmres"
    assert row.converged
    assert row.iters >= 1
    assert row.error is not None and row.error > 0
    assert np.isclose(row.h, 1.0 / 8.0)
    assert np.isclose(row.mu, 1.0 / 8.0)


def test_run_example_both_methods():
    rows = run_example(small_cfg(method="both"))
    assert [r.method for r in rows] == ["gmres", "pgmres"]
    assert all(r.converged for r in rows)
    # both solve the same system to the same tolerance
    assert np.isclose(rows[0].error, rows[1].error, rtol=1e-3)


def test_rerun_is_bitwise_identical_modulo_cpu():
    rows1 = run_example(small_cfg())
    rows2 = run_example(small_cfg())
    assert rows1[0].iters == rows2[0].iters
    assert rows1[0].error == rows2[0].error


def test_emit_csv_header_and_format(tmp_path):
    rows = run_example(small_cfg())
    out = emit_report(rows, "csv", tmp_path / "rows.csv")
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    cells = lines[1].split(",")
    assert cells[5] == "pgmres"
    # error printed in scientific notation with 4 digits after the point
    mantissa, exponent = cells[8].split("e")
    assert len(mantissa.split(".")[1]) == 4


def test_emit_empty_rows_gives_header_only(tmp_path):
    out = emit_report([], "csv", tmp_path / "empty.csv")
    assert out.read_text() == ",".join(CSV_HEADER) + "\n"


def test_json_round_trip(tmp_path):
    rows = run_example(small_cfg())
    out = emit_report(rows, "json", tmp_path / "rows.json")
    recs = parse_report(out)
    assert len(recs) == 1
    assert set(recs[0]) == set(CSV_HEADER)
    assert recs[0]["method"] == "pgmres"
    assert int(recs[0]["iters"]) == rows[0].iters


def test_csv_round_trip(tmp_path):
    rows = run_example(small_cfg())
    out = emit_report(rows, "csv", tmp_path / "rows.csv")
    recs = parse_report(out)
    assert len(recs) == 1
    assert float(recs[0]["alpha"]) == 0.5
    assert recs[0]["converged"] == "true"


def test_unwritable_path_raises_report_error(tmp_path):
    from taupint.bench import ReportIOError

    rows = run_example(small_cfg())
    target = tmp_path / "blocked"
    target.write_text("")  # a file where a directory is needed
    with pytest.raises(ReportIOError):
        emit_report(rows, "csv", target / "rows.csv")


def test_golden_file_regeneration():
    # regenerates the stored verified configuration and diffs everything
    # except wall time
    golden_rows = list(
        csv.DictReader(io.StringIO((DATA / "golden_heat_a02.csv").read_text()))
    )
    cfg = RunConfig(example=1, alpha=0.2, N=256, m=(31, 31), method="pgmres",
                    out=None, figures=False)
    fresh = run_example(cfg)
    got = list(csv.DictReader(io.StringIO(rows_to_csv(fresh))))
    assert len(got) == len(golden_rows) == 1
    for key in CSV_HEADER:
        if key == "cpu_s":
            continue
        assert got[0][key] == golden_rows[0][key], key


def test_mesh_independence_sweep_rows_and_spread():
    cfg = small_cfg(m=(9, 9))
    rows = run_mesh_independence_sweep(cfg, mus=[1 / 4, 1 / 8])
    assert [round(1 / r.mu) for r in rows] == [4, 8]
    assert preconditioned_spread(rows) >= 0


def test_plain_gmres_counts_grow_under_spatial_refinement():
    # qualitative ordering: halving h at fixed mu inflates plain-GMRES
    # counts while preconditioned counts stay put
    counts = {}
    for m in (15, 31):
        rows = run_example(small_cfg(m=(m, m), N=16, method="both"))
        counts[m] = {r.method: r.iters for r in rows}
    assert counts[31]["gmres"] > counts[15]["gmres"]
    assert abs(counts[31]["pgmres"] - counts[15]["pgmres"]) <= 2


def test_budget_exceeded_row_renders_dashes(tmp_path):
    row = TableRow(alpha=0.5, beta1=2.0, beta2=2.0, h=0.1, mu=0.1,
                   method="gmres", cpu_s=None, iters=None, error=None,
                   converged=False)
    out = emit_report([row], "csv", tmp_path / "dash.csv")
    cells = out.read_text().splitlines()[1].split(",")
    assert cells[6] == cells[7] == cells[8] == "-"
    assert cells[9] == "false"


def test_invalid_config_rejected():
    with pytest.raises(ValueError):
        RunConfig(example=7)
    with pytest.raises(ValueError):
        RunConfig(method="cg")
    with pytest.raises(ValueError):
        RunConfig(format="xml")


def test_cli_solve_writes_report_and_figures(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    code = main([
        "solve", "--example", "1", "--alpha", "0.5", "--n", "8", "--m", "7,7",
        "--method", "pgmres", "--out", str(out), "--format", "csv",
    ])
    assert code == 0
    assert out.exists()
    assert (tmp_path / "rows_residuals.png").exists()
    assert (tmp_path / "rows_iterations.png").exists()
    assert "pgmres" in capsys.readouterr().out


def test_cli_no_figures(tmp_path):
    out = tmp_path / "rows.csv"
    code = main([
        "solve", "--example", "1", "--alpha", "0.5", "--n", "8", "--m", "7,7",
        "--method", "pgmres", "--out", str(out), "--no-figures",
    ])
    assert code == 0
    assert out.exists()
    assert not (tmp_path / "rows_residuals.png").exists()


def test_cli_config_file_with_flag_override(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({
        "example": 1, "alpha": 0.8, "N": 8, "m": [7, 7],
        "method": "pgmres", "figures": False,
    }))
    out = tmp_path / "rows.json"
    code = main([
        "solve", "--config", str(cfg_file), "--alpha", "0.5",
        "--out", str(out), "--format", "json",
    ])
    assert code == 0
    recs = json.loads(out.read_text())
    assert recs[0]["alpha"] == "0.5"  # flag overrides the file value


def test_cli_bad_config_field_exits_2(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"no_such_field": 1}))
    assert main(["solve", "--config", str(cfg_file)]) == 2


def test_cli_unwritable_out_exits_3(tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("")
    code = main([
        "solve", "--example", "1", "--alpha", "0.5", "--n", "4", "--m", "5,5",
        "--method", "pgmres", "--out", str(blocker / "rows.csv"),
    ])
    assert code == 3


def test_cli_verify_writes_reports(tmp_path, capsys):
    out = tmp_path / "reports.json"
    code = main(["verify", "--suite", "tau", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload and all(rec["passed"] for rec in payload)
    assert "checks passed" in capsys.readouterr().out


def test_cli_oracle_flag_small_system(capsys):
    code = main([
        "solve", "--example", "1", "--alpha", "0.5", "--n", "4", "--m", "7,7",
        "--method", "pgmres", "--oracle",
    ])
    assert code == 0
    assert "oracle practical bounds: pass" in capsys.readouterr().out


def test_figures_render_histories(tmp_path):
    from taupint.figures import render_report_figures

    rows = run_example(small_cfg(method="both"))
    report = tmp_path / "rows.csv"
    emit_report(rows, "csv", report)
    made = render_report_figures(rows, report)
    names = {p.name for p in made}
    assert names == {"rows_residuals.png", "rows_iterations.png"}
    assert all(p.stat().st_size > 0 for p in made)
