import csv
import io
import json
import subprocess
import sys

import pytest

from nehari_shape.cli import main, worker_count
from nehari_shape.config import ScenarioConfig, parse_config, parse_only
from nehari_shape.errors import ConfigError
from nehari_shape.report import CSV_COLUMNS, REPORT_VERSION

SMALL = """\
# two cases, two a values
cases = i, iv
a_start = 1.0
a_stop = 1.02
a_step = 0.02
correctors = yu, phi12
quad_panels = 4
"""


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(SMALL)
    return p


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_defaults_and_values():
    cfg = parse_config(SMALL)
    assert cfg.cases == ["i", "iv"]
    assert cfg.a_values() == [1.0, 1.02]
    assert cfg.quad_panels == 4 and cfg.quad_order == ScenarioConfig().quad_order
    cfg = parse_config("case = v\na = 1.05\ngrid_t = -0.01, 0.01\n", ["threads=2"])
    assert cfg.cases == ["v"] and cfg.a_values() == [1.05]
    assert cfg.grid_t == (-0.01, 0.01) and cfg.threads == 2
    assert cfg.scenarios() == [("v", "x", "sin")]
    custom = parse_config("f = sin\ntheta = y\n")
    assert custom.scenarios() == [("custom", "sin", "y")]


@pytest.mark.parametrize("text, line, field", [
    ("cases = i\ncolour = red\n", 2, "colour"),
    ("a_step = fast\n", 1, "a_step"),
    ("\n\njust words\n", 3, None),
    ("oracle_fd = maybe\n", 1, "oracle_fd"),
])
def test_parse_errors_carry_location(text, line, field):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line
    assert info.value.field == field


@pytest.mark.parametrize("text, field", [
    ("cases = vii\n", "cases"),
    ("a_start = 1.1\na_stop = 1.0\n", "a_stop"),
    ("path = fastest\n", "path"),
    ("fd_step = 0.1\n", "fd_step"),
    ("f = one\ntheta = y\n", "f"),
    ("f = x\ntheta = one\n", "theta"),
    ("a = 0.9\n", "a_start"),
])
def test_semantic_errors(text, field):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.field == field


def test_small_a_needs_override():
    assert parse_config("a = 0.9\n", ["allow_small_a=true"]).a_values() == [0.9]


def test_parse_only():
    assert parse_only("case=iv,a=1.05,corrector=yu") == {"case": "iv", "a": 1.05, "corrector": "yu"}
    with pytest.raises(ConfigError):
        parse_only("colour=red")


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("cases = i\nbogus = 1\n")
    assert main(["sweep", "--config", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err and "bogus" in err
    assert main(["sweep", "--config", str(tmp_path / "missing.cfg")]) == 2
    small = tmp_path / "small.cfg"
    small.write_text("a = 0.95\n")
    assert main(["sweep", "--config", str(small)]) == 2
    capsys.readouterr()
    assert main(["sweep", "--config", str(small), "--allow-small-a"]) == 0


def test_sweep_csv(cfg_path, capsys):
    assert main(["sweep", "--config", str(cfg_path)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_csv(out)
    assert len(rows) == 2 * 2 * 2
    keys = [(r["case"], float(r["a"]), r["corrector"]) for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        assert abs(float(r["first_order"])) <= 1e-10
        assert r["fast_path"] == "one_dimensional"
    assert rows[0]["f"] == "sin(pi x/2)" and rows[0]["theta"] == "y"


def test_sweep_deterministic(cfg_path, tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("NEHARI_SHAPE_THREADS", threads)
        path = tmp_path / f"out{threads}.csv"
        assert main(["sweep", "--config", str(cfg_path), "--out-csv", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_only_reproduces_single_row(cfg_path, capsys):
    main(["sweep", "--config", str(cfg_path)])
    full = capsys.readouterr().out.splitlines()
    assert main(["sweep", "--config", str(cfg_path), "--only", "case=iv,a=1.02,corrector=phi12"]) == 0
    one = capsys.readouterr().out.splitlines()
    assert len(one) == 2
    assert one[1] in full


def test_json_reports(cfg_path, tmp_path, capsys):
    out = tmp_path / "json"
    assert main(["sweep", "--config", str(cfg_path), "--out-json", str(out)]) == 0
    files = sorted(out.iterdir())
    assert len(files) == 8
    doc = json.loads(files[0].read_text())
    assert doc["report_version"] == REPORT_VERSION
    assert doc["status"] == "ok" and doc["error"] is None
    assert set(doc["report"]) >= {"first_order", "second_order", "terms", "gamma_star"}


def test_error_rows(tmp_path, capsys):
    cfg = tmp_path / "err.cfg"
    cfg.write_text("cases = iv, vi\na = 1.02\ncorrectors = optimal_analytic\n")
    jdir = tmp_path / "json"
    assert main(["sweep", "--config", str(cfg), "--out-json", str(jdir)]) == 1
    captured = capsys.readouterr()
    rows = read_csv(captured.out)
    good, bad = rows
    assert good["case"] == "iv" and good["second_order"] != "error"
    assert bad["case"] == "vi"
    assert all(bad[c] == "error" for c in CSV_COLUMNS[5:])
    assert "case=vi" in captured.err
    doc = json.loads((jdir / "vi_a1.020000_optimal_analytic.json").read_text())
    assert doc["status"] == "error" and "vi" in doc["error"]


def test_validate_small_grid_inconclusive(tmp_path, capsys):
    cfg = tmp_path / "val.cfg"
    cfg.write_text("cases = iv\na = 1.02\ncorrectors = yu\noracle_grid = true\ngrid_n = 16\n")
    assert main(["validate", "--config", str(cfg)]) == 1
    out = capsys.readouterr().out
    assert "inconclusive" in out
    assert "closed_form[iv,a=1.02]" in out and "fd[iv,a=1.02,yu]" in out


def test_validate_passes(tmp_path, capsys):
    cfg = tmp_path / "val.cfg"
    cfg.write_text("cases = v\na = 1.05\ncorrectors = w46\noracle_grid = true\n"
                   "grid_n = 129\noracle_rtilde = true\n")
    assert main(["validate", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "rtilde_taylor" in out
    assert out.strip().splitlines()[-1] == "5/5 checks passed"


def test_worker_count(monkeypatch):
    monkeypatch.setenv("NEHARI_SHAPE_THREADS", "2")
    assert worker_count(8) == 2
    assert worker_count(1) == 1
    monkeypatch.setenv("NEHARI_SHAPE_THREADS", "lots")
    with pytest.raises(ConfigError):
        worker_count()
    monkeypatch.delenv("NEHARI_SHAPE_THREADS")
    assert worker_count(3) == 3


def test_console_entry_point(cfg_path):
    proc = subprocess.run([sys.executable, "-m", "nehari_shape.cli", "sweep", "--config",
                           str(cfg_path), "--only", "case=i,a=1.0,corrector=yu"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 2
