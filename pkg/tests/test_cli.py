import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from zspec.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_partition_example(capsys):
    code, out, _ = invoke(capsys, "partition", "--kind", "wk", "--zone", "0", "--k", "2", "--lambda", "1",
                          "--t-grid", "1:1:1")
    assert code == 0
    (row,) = rows(out)
    assert float(row["re"]) == pytest.approx(1 / (2 * math.sinh(1.0)), rel=1e-15)
    assert float(row["im"]) == 0
    assert out.splitlines()[0] == "t,re,im"


def test_partition_grid_is_inclusive(capsys):
    code, out, _ = invoke(capsys, "partition", "--kind", "wk", "--zone", "1", "--t-grid", "0.1:2.0:0.1",
                          "--format", "csv")
    assert code == 0
    assert len(rows(out)) == 20


def test_pole_is_rejected(capsys):
    code, out, err = invoke(capsys, "kernel", "--kind", "df", "--zone", "global", "--t", "3.14159265",
                            "--k", "2", "--lambda", "1", "--x", "0,0", "--y", "1,0")
    assert code == 2 and out == ""
    assert "pole" in err


def test_kernel_zone1_example(capsys):
    code, out, _ = invoke(capsys, "kernel", "--kind", "wk", "--zone", "1", "--t", "0.5", "--x", "0,0", "--y", "1,0")
    assert code == 0
    (row,) = rows(out)
    assert float(row["re"]) == 0 and float(row["im"]) == 0


def test_zone_two_closed_form_is_an_input_error(capsys):
    code, _, err = invoke(capsys, "kernel", "--zone", "2", "--t", "0.5", "--x", "0,0", "--y", "1,0")
    assert code == 2 and "eigen-sum" in err
    code, out, _ = invoke(capsys, "kernel", "--zone", "2", "--t", "0.5", "--x", "0,0", "--y", "1,0",
                          "--method", "eigen-sum")
    assert code == 0 and len(rows(out)) == 1


def test_bad_config_reports_line(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{\n  "k": 2,\n  "lambda": -1.0\n}\n')
    code, _, err = invoke(capsys, "spectrum", "--config", str(cfg))
    assert code == 2
    assert f"{cfg}:3: lambda" in err


def test_unknown_key_and_broken_json(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"k": 2, "colour": "red"}')
    code, _, err = invoke(capsys, "spectrum", "--config", str(cfg))
    assert code == 2 and "colour" in err
    cfg.write_text('{"k": 2,\n "t": }')
    code, _, err = invoke(capsys, "spectrum", "--config", str(cfg))
    assert code == 2 and ":2: invalid JSON" in err


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"k": 4, "lambda": 0.5, "e_max": 12}))
    _, out, _ = invoke(capsys, "spectrum", "--config", str(cfg), "--lambda", "1.0")
    assert [float(r["E"]) for r in rows(out)] == [-4.0, -8.0, -12.0]


def test_argument_errors_exit_2(capsys):
    assert invoke(capsys, "kernel", "--zone", "abc")[0] == 2
    assert invoke(capsys, "verify", "--suite", "nope")[0] == 2
    assert invoke(capsys, "spectrum", "--k", "3")[0] == 2


def test_output_is_byte_identical(capsys):
    argv = ["kernel", "--kind", "wk", "--zone", "1", "--t-grid", "0.2:1.0:0.2", "--x", "0.3,-0.1",
            "--y", "0.5,0.2"]
    first = invoke(capsys, *argv)[1]
    second = invoke(capsys, *argv)[1]
    assert first == second and len(first.splitlines()) == 6


def test_json_mirrors_csv(capsys):
    argv = ["partition", "--zone", "1", "--k", "4", "--t-grid", "0.5:1.0:0.5"]
    as_csv = rows(invoke(capsys, *argv)[1])
    as_json = json.loads(invoke(capsys, *argv, "--format", "json")[1])
    assert [float(r["re"]) for r in as_csv] == [r["re"] for r in as_json]


def test_zones_emits_json_with_gram_residual(capsys):
    code, out, _ = invoke(capsys, "zones", "--k", "2", "--zone", "2", "--degree", "8", "--lambda", "1.0")
    assert code == 0
    body = json.loads(out)
    assert len(body["elements"]) == 7
    assert body["gram_residual"] < 1e-12


def test_spectrum_csv(capsys):
    code, out, _ = invoke(capsys, "spectrum", "--zone", "1", "--k", "4", "--e-max", "20")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["E", "p", "upsilon", "l", "m", "mult"]
    assert [int(r["mult"]) for r in table] == [2, 4, 6, 8, 10]


def test_isospec_csv(capsys):
    code, out, _ = invoke(capsys, "isospec", "--family", "3:2,0 vs 3:1,1", "--zgamma", "0,0,1", "--degree", "2",
                          "--format", "csv")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["index", "eig_A", "eig_B", "gap"]
    assert max(float(r["gap"]) for r in table) < 1e-8


def test_verify_single_suite(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "hgroup")
    assert code == 0
    assert out.splitlines()[-1] == "PASS suite hgroup"


def test_verify_tolerance_can_fail_a_suite(capsys):
    code, out, _ = invoke(capsys, "verify", "--suite", "numerics", "--tol", "1e-30")
    assert code == 1
    assert out.splitlines()[-1] == "FAIL suite numerics"


def test_quad_order_flag_restores_environment(capsys, monkeypatch):
    monkeypatch.delenv("ZSPEC_QUAD_ORDER", raising=False)
    code, _, _ = invoke(capsys, "partition", "--t", "1", "--quad-order", "30")
    assert code == 0
    assert "ZSPEC_QUAD_ORDER" not in os.environ


def test_out_file(tmp_path, capsys):
    target = tmp_path / "z.csv"
    code, out, _ = invoke(capsys, "partition", "--t", "0.5", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("t,re,im\n")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "zspec", "partition", "--t", "1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "1,0.42545906411966083,0"


def test_verify_all(capsys):
    # heavy criteria are cached per process, so this reuses the acceptance run
    code, out, _ = invoke(capsys, "verify", "--suite", "all", "--tol", "1e-6")
    assert code == 0, out
    assert out.count("VERDICT") == 3
