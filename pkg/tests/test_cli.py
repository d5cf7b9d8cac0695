import hashlib
import json
import subprocess
import sys

import pytest

from hyperconf import cache
from hyperconf.cli import main, share_point
from hyperconf.objects import parse_spec

REPORT_KEYS = {"check", "inputs", "passed", "tables", "subchecks", "notes", "timings"}


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_build_writes_cache(capsys, tmp_path):
    path = tmp_path / "a.json"
    code, rep, _ = _run(capsys, "build", "--n", "1", "--d", "3", "--cache", str(path))
    assert code == 0 and rep["passed"]
    assert rep["tables"]["vertices"] == 9 and rep["tables"]["basis"] == 27
    data = json.loads(path.read_text())
    assert data["schema_version"] == cache.SCHEMA_VERSION
    assert (data["n"], data["d"]) == (1, 3)


def test_build_small_vertex_count(capsys, tmp_path):
    code, rep, _ = _run(capsys, "build", "--n", "1", "--d", "2", "--cache", str(tmp_path / "b.json"))
    assert code == 0 and rep["tables"]["vertices"] == 5


def test_rebuild_is_byte_identical(capsys, tmp_path):
    path = tmp_path / "c.json"
    _run(capsys, "build", "--n", "2", "--d", "4", "--cache", str(path))
    first = hashlib.sha256(path.read_bytes()).hexdigest()
    _run(capsys, "build", "--n", "2", "--d", "4", "--cache", str(path))
    assert hashlib.sha256(path.read_bytes()).hexdigest() == first


def test_cache_env_directory(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cache.CACHE_ENV, str(tmp_path))
    code, rep, _ = _run(capsys, "build", "--n", "1", "--d", "3")
    assert code == 0
    assert (tmp_path / "algebra-n1-d3.json").exists()
    code, rep, _ = _run(capsys, "ext", "--n", "1", "--d", "3", "--source", "E(1;0)", "--target", "E(1;0)")
    assert code == 0 and rep["tables"]["ext"] == {"0": 1}


def test_cache_version_mismatch_is_an_error(capsys, tmp_path):
    path = tmp_path / "v.json"
    _run(capsys, "build", "--n", "1", "--d", "3", "--cache", str(path))
    data = json.loads(path.read_text())
    data["schema_version"] = cache.SCHEMA_VERSION + 1
    path.write_text(json.dumps(data))
    code, rep, err = _run(capsys, "ext", "--n", "1", "--d", "3", "--cache", str(path),
                          "--source", "O(0)", "--target", "O(0)")
    assert code == 2 and rep is None
    assert json.loads(err)["error"] == "CacheError"


def test_cache_type_mismatch_is_an_error(capsys, tmp_path):
    path = tmp_path / "t.json"
    _run(capsys, "build", "--n", "1", "--d", "3", "--cache", str(path))
    code, _, err = _run(capsys, "check", "cy", "--n", "2", "--d", "4", "--cache", str(path))
    assert code == 2 and "holds type" in json.loads(err)["message"]


@pytest.mark.parametrize("src,dst,want", [
    ("O(0)", "O(0)", {"0": 1, "1": 1}),
    ("proj(1;0)", "E(1;1)", {"0": 2}),
])
def test_ext_examples(capsys, src, dst, want):
    code, rep, _ = _run(capsys, "ext", "--n", "1", "--d", "3", "--source", src, "--target", dst)
    assert code == 0
    assert rep["tables"]["ext"] == want
    assert set(rep) == REPORT_KEYS


def test_ext_skyscraper_witness(capsys):
    code, rep, _ = _run(capsys, "ext", "--n", "1", "--d", "3", "--source", "sky*(1)", "--target", "sky!(1,2)")
    assert code == 0
    assert rep["inputs"]["source"] == "sky*(1@1,2)"
    assert rep["tables"]["ext"].get("2", 0) > 0


def test_share_point_rules():
    a, b = share_point(parse_spec("sky*(1)"), parse_spec("sky!(1,2)"))
    assert a.point == b.point == (1, 2)
    a, b = share_point(parse_spec("sky*(1)"), parse_spec("sky!(2,3)"))
    assert a.point is None and b.point is None
    a, b = share_point(parse_spec("sky*(1@1,3)"), parse_spec("sky!(1,2)"))
    assert a.point == (1, 3) and b.point is None


def test_check_cy(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, rep, _ = _run(capsys, "check", "cy", "--n", "2", "--d", "4", "--report", str(out))
    assert code == 0 and rep["passed"]
    assert rep["tables"]["vector"] == [1, 0, 1]
    assert json.loads(out.read_text()) == rep


def test_check_exceptional(capsys):
    code, rep, _ = _run(capsys, "check", "exceptional", "--n", "1", "--d", "3")
    assert code == 0 and rep["check"] == "exceptional"
    assert all(isinstance(v, str) for v in rep["timings"].values())


def test_check_cohdim_reports_without_asserting(capsys):
    code, rep, _ = _run(capsys, "check", "cohdim", "--n", "2", "--d", "1")
    assert code == 0
    assert rep["tables"]["stated_formula"] == 3
    assert rep["tables"]["measured"] == 2
    assert rep["notes"]


def test_failed_check_exit_code(capsys):
    code, rep, _ = _run(capsys, "check", "cech", "--n", "1", "--d", "4")
    assert code == 1 and not rep["passed"]
    assert any(not s["passed"] for s in rep["subchecks"])


@pytest.mark.parametrize("argv", [
    ["check", "cy", "--n", "1", "--d", "4"],
    ["ext", "--n", "1", "--d", "3", "--source", "nonsense", "--target", "O(0)"],
    ["ext", "--n", "1", "--d", "3", "--source", "E(5;0)", "--target", "O(0)"],
    ["build", "--n", "0", "--d", "3"],
])
def test_input_errors_exit_2(capsys, argv):
    code, rep, err = _run(capsys, *argv)
    assert code == 2 and rep is None
    assert {"error", "message"} <= set(json.loads(err))


def test_reports_are_deterministic(capsys):
    _, a, _ = _run(capsys, "check", "localization", "--n", "1", "--d", "3")
    _, b, _ = _run(capsys, "check", "localization", "--n", "1", "--d", "3")
    a.pop("timings"), b.pop("timings")
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperconf", "check", "algebra", "--n", "1", "--d", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]
