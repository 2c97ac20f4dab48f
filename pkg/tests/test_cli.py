import json
import subprocess
import sys

import pytest

from phaseclone.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_table_markdown(capsys):
    code, out, _ = run(capsys, "table", "--d", "2,3")
    assert code == 0
    assert "0.750000 | computed" in out and "0.555556 | computed" in out
    assert "cited" in out


def test_table_json_roundtrip(capsys):
    code, out, _ = run(capsys, "table", "--d", "2", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and all(r["schema"] == 1 for r in rows)
    assert json.loads(json.dumps(rows)) == rows
    assert {r["source"] for r in rows} == {"computed", "cited"}


def test_table_dimension_cap(capsys):
    code, _, err = run(capsys, "table", "--d", "13")
    assert code == 2 and "outside supported range" in err


def test_bad_format_is_usage_error(capsys):
    assert run(capsys, "table", "--format", "xml")[0] == 2


@pytest.mark.parametrize("problem,d,value", [("phase-cloner", 3, 5 / 9), ("transpose-cloner", 2, 0.75),
                                             ("universal-transpose-cloner", 4, 0.2),
                                             ("phase-transpose", 3, 2 / 3), ("hybrid", 2, 0.75)])
def test_solve_json(capsys, problem, d, value):
    code, out, _ = run(capsys, "solve", "--problem", problem, "--d", str(d), "--samples", "4000",
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "OPTIMAL"
    assert abs(rep["sdp_value"] - value) < 1e-6
    keys = {"schema", "problem", "d", "closed_form", "sdp_value", "gap", "primal_min_eig",
            "dual_min_eig", "verdict", "mc_mean", "mc_stderr", "samples", "seed", "elapsed_ms"}
    assert keys <= rep.keys()
    assert json.dumps(json.loads(json.dumps(rep))) == json.dumps(rep)


def test_solve_unknown_problem(capsys):
    code, _, err = run(capsys, "solve", "--problem", "nope", "--d", "3")
    assert code == 2 and "unknown problem" in err


def test_solve_skips_mc_with_reason(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "phase-cloner", "--d", "2", "--samples", "0",
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["mc_mean"] is None and "mc_mean" in rep["notes"]


def test_compose_reports_mismatch(capsys):
    code, out, err = run(capsys, "compose", "--d", "3", "--variant", "cloner", "--samples", "4000",
                         "--format", "json")
    rep = json.loads(out)
    assert code == 1 and rep["verdict"] == "MISMATCH"
    assert rep["direct_optimum"] == pytest.approx(5 / 9)
    assert rep["closed_form"] == pytest.approx(1 / 6)
    assert err.startswith("FAIL:")


def test_compose_bad_variant(capsys):
    assert run(capsys, "compose", "--d", "3", "--variant", "x")[0] == 2


def test_csv_output(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "hybrid", "--d", "3", "--samples", "100",
                       "--format", "csv")
    header, row = out.strip().splitlines()
    assert header.startswith("schema,problem,d") and row.startswith("1,hybrid,3")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "phaseclone", "table", "--d", "2", "--format", "csv"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("row,d,quantity")


def test_notebooks_run():
    import pathlib
    import runpy
    root = pathlib.Path(__file__).resolve().parents[1] / "notebooks"
    for path in sorted(root.glob("*.py")):
        runpy.run_path(str(path), run_name="__main__")
