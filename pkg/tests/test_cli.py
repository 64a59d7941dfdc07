import json
import subprocess
import sys

import pytest

from painleve_totals.cli import main


def run(argv, tmp_path):
    summary = tmp_path / "summary.json"
    out = tmp_path / "out.txt"
    code = main(argv + ["--output", str(out), "--summary", str(summary)])
    data = json.loads(summary.read_text()) if summary.exists() else None
    return code, out.read_text() if out.exists() else "", data


def test_solve_csv(tmp_path):
    code, out, summary = run(["solve", "--class", "as:0.5", "--count", "5"], tmp_path)
    assert code == 0
    assert out.splitlines()[0] == "x,re_u,im_u,re_ux,im_ux"
    assert summary["schema"] == 1 and summary["passed"] is True
    assert summary["class"] == "RealAblowitzSegur"


def test_integral_default_class(tmp_path):
    code, out, summary = run(["integral", "--theorem", "hm"], tmp_path)
    assert code == 0
    assert json.loads(out)["theorem"] == "HM"
    assert summary["abs_err"] < 1e-6


def test_generic_default_c(tmp_path):
    code, _, summary = run(["integral", "--theorem", "generic"], tmp_path)
    assert code == 0 and summary["m"] == 0


def test_incompatible_theorem_is_usage_error(tmp_path):
    code, _, _ = run(["integral", "--theorem", "hm", "--class", "as:0.5"], tmp_path)
    assert code == 2


def test_bad_monodromy(tmp_path):
    assert run(["solve", "--monodromy", "1,1,1"], tmp_path)[0] == 2
    assert run(["solve", "--class", "nonsense"], tmp_path)[0] == 2


def test_argparse_error_is_usage(tmp_path, capsys):
    assert main(["solve", "--count", "many"]) == 2
    assert main(["no-such-command"]) == 2


def test_failed_check_exit_code(tmp_path):
    code, _, summary = run(["solve", "--class", "hm", "--count", "5", "--residual-tol", "1e-30"], tmp_path)
    assert code == 1
    assert summary["passed"] is False


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample\ncount = 3\nxmin = -2\nxmax = 2\n")
    code, out, _ = run(["solve", "--config", str(cfg), "--xmax", "1"], tmp_path)
    assert code == 0
    rows = out.splitlines()[1:]
    assert [float(r.split(",")[0]) for r in rows] == [-2.0, -0.5, 1.0]


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(["solve", "--config", str(cfg)], tmp_path)[0] == 2


def test_mkdv_latex_and_json(tmp_path):
    code, out, summary = run(["mkdv", "--density", "1"], tmp_path)
    assert code == 0 and out.startswith(r"\alpha_{1}")
    code, out, _ = run(["mkdv", "--density", "3", "--format", "json"], tmp_path)
    assert json.loads(out)["k"] == 3


def test_trace(tmp_path):
    code, out, summary = run(["trace", "--n", "0", "--format", "json"], tmp_path)
    assert code == 0
    assert summary["rel_err"] < 3e-2 and summary["vp"] < 1e-5


def test_sine_table(tmp_path):
    code, out, _ = run(["sine", "--count", "3", "--order", "32"], tmp_path)
    assert code == 0
    assert len(out.splitlines()) == 4


def test_verify_all_quick(tmp_path):
    report = tmp_path / "rows.json"
    code, _, summary = run(["verify-all", "--quick", "--json", str(report)], tmp_path)
    assert code == 0
    rows = json.loads(report.read_text())
    assert rows["schema"] == 1 and len(rows["rows"]) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "painleve_totals", "mkdv", "--density", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stderr)["passed"] is True
