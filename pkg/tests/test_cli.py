import csv
import io
import json
import math
import subprocess
import sys

import pytest

from capbounds.cli import run
from capbounds.report import emit, format_number, parse_json


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_format_number():
    assert format_number(1.0) == "1.00000000000"
    assert format_number(math.inf) == "INF"
    assert format_number(True) == "true"
    assert format_number(61) == "61"
    assert format_number(None) == ""


def test_empty_table_is_header_only():
    assert emit(["loss_db", "eps_LB"], []) == "loss_db,eps_LB\n"


def test_inf_cell():
    text = emit(["value"], [{"value": math.inf}])
    assert text.splitlines()[1] == "INF"


def test_json_round_trip_is_exact():
    values = [0.1, 1 / 3, math.pi * 1e-17, 2.0**0.5, math.inf]
    text = emit(["x"], [{"x": v} for v in values], "json", {"command": "t"})
    back = parse_json(text)
    assert [r["x"] for r in back["data"]] == values
    assert back["meta"] == {"command": "t"}


def test_bound_pure_loss(capsys):
    code, out, _ = _run(capsys, "bound", "--channel", "pure-loss", "--eta", "0.5")
    assert code == 0
    row = _rows(out)[0]
    assert row["value"] == "1.00000000000" and row["kind"] == "capacity"


def test_bound_unbounded(capsys):
    code, out, _ = _run(capsys, "bound", "--channel", "identity")
    assert code == 0 and _rows(out)[0]["value"] == "INF"


def test_dv_bound(capsys):
    code, out, _ = _run(capsys, "bound", "--channel", "erasure", "--p", "0.25")
    assert code == 0 and float(_rows(out)[0]["value"]) == 0.75


def test_capacity_rejects_non_distillable(capsys):
    code, _, err = _run(capsys, "capacity", "--channel", "thermal-loss", "--eta", "0.5", "--nbar", "0.2")
    assert code == 3 and "distillable" in err
    code, out, _ = _run(capsys, "capacity", "--channel", "thermal-loss", "--eta", "0.5", "--nbar", "0")
    assert code == 0 and _rows(out)[0]["kind"] == "capacity"


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "--channel", "warp-drive"],
        ["bound", "--channel", "pure-loss"],
        ["bound", "--channel", "pure-loss", "--eta", "0.5", "--g", "2"],
        ["bound", "--channel", "pure-loss", "--eta", "0.5", "--bogus", "1"],
        ["sweep", "--channel", "pure-loss", "--param", "eta", "--grid", "0:1:1"],
        ["sweep", "--channel", "pure-loss", "--param", "eta", "--grid", "0:1"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2 and "usage" in err


def test_domain_error_exit_3(capsys):
    code, _, err = _run(capsys, "bound", "--channel", "pure-loss", "--eta", "1.5")
    assert code == 3 and "transmissivity" in err


def test_unwritable_path_exit_4(capsys, tmp_path):
    code, _, err = _run(capsys, "bound", "--channel", "pure-loss", "--eta", "0.5",
                        "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 4 and "cannot write" in err


def test_sweep_log_scale(capsys):
    code, out, _ = _run(capsys, "sweep", "--channel", "pure-loss", "--param", "eta",
                        "--grid", "1e-4:1e-1:4", "--scale", "log")
    rows = _rows(out)
    assert code == 0 and list(rows[0]) == ["eta", "pure-loss"]
    assert [float(r["eta"]) for r in rows] == pytest.approx([1e-4, 1e-3, 1e-2, 1e-1])


def test_sweep_db_scale(capsys):
    code, out, _ = _run(capsys, "sweep", "--channel", "pure-loss", "--param", "eta",
                        "--grid", "0:30:4", "--scale", "db")
    rows = _rows(out)
    assert code == 0 and rows[0]["pure-loss"] == "INF"
    assert float(rows[1]["pure-loss"]) == pytest.approx(-math.log2(0.9))


def test_qkd_thresholds_file(capsys, tmp_path):
    path = tmp_path / "thresholds.csv"
    code, _, _ = _run(capsys, "qkd-thresholds", "--db", "0:30:61", "--out", str(path))
    rows = _rows(path.read_text())
    assert code == 0 and len(rows) == 61
    assert list(rows[0]) == ["loss_db", "eps_UB", "eps_LB", "eps_trusted_inf", "no_switching",
                             "two_way_coherent", "two_way_thermal"]


def test_strong_converse_distillable(capsys):
    code, out, _ = _run(capsys, "strong-converse", "--channel", "pure-loss", "--eta", "0.5",
                        "--n", "100", "--eps", "0.01", "--variant", "distillable")
    assert code == 0 and float(_rows(out)[0]["value"]) == pytest.approx(1.02643, abs=1e-5)


def test_strong_converse_corrected(capsys):
    code, out, _ = _run(capsys, "strong-converse", "--channel", "pure-loss", "--eta", "0.5",
                        "--n", "100", "--eps", "0.01", "--mu", "10", "--N", "10")
    assert code == 0 and _rows(out)[0]["value"] == "INF"
    code, _, _ = _run(capsys, "strong-converse", "--channel", "pure-loss", "--eta", "0.5",
                      "--n", "100", "--eps", "0.01", "--mu", "10")
    assert code == 2


def test_sim_error_tables(capsys):
    code, out, _ = _run(capsys, "sim-error", "--mu", "100", "--N", "10", "--n", "10", "--eps", "0.01")
    row = _rows(out)[0]
    assert code == 0 and float(row["delta"]) > 0 and row["saturated"] in ("true", "false")
    code, out, _ = _run(capsys, "sim-error", "--table", "convergence", "--format", "json",
                        "--mu-grid", "1,10", "--mu-in-grid", "0.5,100")
    doc = json.loads(out)
    assert code == 0 and len(doc["data"]) == 4
    assert doc["meta"]["command"] == "sim-error"
    assert doc["meta"]["decay_exponent"] == pytest.approx(0.5, abs=1e-3)


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nchannel = pure-loss\neta = 0.75\n")
    code, out, _ = _run(capsys, "bound", "--config", str(cfg))
    assert code == 0 and float(_rows(out)[0]["value"]) == pytest.approx(2.0)
    code, out, _ = _run(capsys, "bound", "--config", str(cfg), "--eta", "0.5")
    assert float(_rows(out)[0]["value"]) == pytest.approx(1.0)
    cfg.write_text("nonsense = 1\n")
    code, _, _ = _run(capsys, "bound", "--config", str(cfg))
    assert code == 2


def test_csv_output_deterministic():
    argv = [sys.executable, "-m", "capbounds.cli", "qkd-thresholds", "--db", "0:30:61"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and len(a.splitlines()) == 62
