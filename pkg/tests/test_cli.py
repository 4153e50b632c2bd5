import csv
import json

import pytest

from varcount.cli import dump_json, main
from varcount.parser import load, to_json

from conftest import DATA

EX41 = str(DATA / "ex41.vsys")
EX42 = str(DATA / "ex42.vsys")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_text(capsys):
    code, out, _ = run(capsys, "count", EX41)
    assert code == 0
    assert "total = 8190" in out
    assert "d = (1, 1, 1, 1, 1, 291)" in out
    assert out.count("[corollary31]") == 2


def test_count_json(capsys):
    code, out, _ = run(capsys, "count", EX42, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["levels"][0]["term"] == "1911"
    assert [lv["N_l"] for lv in doc["levels"]] == ["1", "21", "823"]
    assert doc["total"] == "3007"
    assert set(doc) >= {"field", "structure", "alpha", "levels", "zero_term", "total", "timings"}
    assert dump_json(json.loads(out)) == out
    assert "." not in json.dumps(doc["total"])


def test_json_input(capsys, tmp_path, ex42):
    path = tmp_path / "ex42.json"
    path.write_text(json.dumps(to_json(ex42)))
    code, out, _ = run(capsys, "count", str(path))
    assert code == 0 and "total = 3007" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "count", "missing.vsys")
    assert code == 2 and "missing.vsys" in err


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.vsys"
    bad.write_text("field 7\nx1^0 = 1\n")
    code, _, err = run(capsys, "count", str(bad))
    assert code == 2 and "line 2" in err


@pytest.mark.parametrize("path,total", [(EX42, 3007), (EX41, 8190)])
def test_verify(capsys, path, total):
    code, out, _ = run(capsys, "verify", path)
    assert code == 0
    assert f"formula {total} == oracle {total}" in out


def test_verify_tampered(capsys, tmp_path):
    text = (DATA / "ex42.vsys").read_text().replace("= 3", "= 4")
    path = tmp_path / "tampered.vsys"
    path.write_text(text)
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and "3007" not in out


def test_verify_cap(capsys):
    code, _, err = run(capsys, "verify", EX42, "--cap", "100")
    assert code == 3 and "cap" in err


def test_env_cap(capsys, monkeypatch):
    monkeypatch.setenv("VARCOUNT_CAP", "100")
    assert run(capsys, "brute", EX42)[0] == 3


def test_brute_profile(capsys):
    code, out, _ = run(capsys, "brute", EX42, "--profile")
    assert code == 0
    assert "M_1 = 1911" in out and "M_3 = 823" in out and "total = 3007" in out


def test_snf_system(capsys):
    code, out, _ = run(capsys, "snf", EX42)
    assert code == 0
    assert "d = (1, 1, 9)" in out
    assert "s_2 = 5" in out and "s_3 = 7" in out
    code, out, _ = run(capsys, "snf", EX41)
    assert code == 0 and "291)" in out


def test_snf_matrix(capsys, tmp_path):
    path = tmp_path / "id.txt"
    path.write_text("1 0 0\n0 1 0\n0 0 1\n")
    code, out, _ = run(capsys, "snf", str(path))
    assert code == 0 and "d = (1, 1, 1)" in out
    path.write_text("2 4 4\n-6 6 12\n10 -4 -16\n")
    code, out, _ = run(capsys, "snf", str(path))
    assert code == 0 and "d = (2, 6, 12)" in out


def test_bench(capsys, tmp_path):
    out_csv = tmp_path / "out.csv"
    code, out, _ = run(capsys, "bench", EX42, "--repeat", "2", "--csv", str(out_csv))
    assert code == 0
    with open(out_csv) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["case", "path", "runs", "median_ns"]
    assert [r[1] for r in rows[1:]] == ["formula", "oracle"]
    assert all(r[2] == "2" for r in rows[1:])
    formula, oracle = (int(r[3]) for r in rows[1:])
    assert formula < oracle


def test_alpha(capsys):
    code, out, _ = run(capsys, "count", EX42, "--alpha", "5")
    assert code == 0 and "total = 3007" in out and "alpha = 5" in out
    code, _, err = run(capsys, "count", EX42, "--alpha", "2")
    assert code == 2
    assert run(capsys, "count", EX42, "--alpha", "x")[0] == 2


def test_method_and_no_fast_path(capsys):
    code, out, _ = run(capsys, "count", EX41, "--no-fast-path", "--method", "residue")
    assert code == 0 and "total = 8190" in out and "[general]" in out
    code, out, _ = run(capsys, "count", EX42, "--method", "stream", "--threads", "2")
    assert code == 0 and "total = 3007" in out


def test_force_even(capsys, tmp_path):
    path = tmp_path / "even.vsys"
    path.write_text("field 2\nx1*x2 + x1^2*x2*x3 = 1\n")
    assert run(capsys, "count", str(path))[0] == 2
    code, out, err = run(capsys, "count", str(path), "--force-even")
    assert "WARNING" in err
    assert "cross-checks match" in out or "MISMATCH" in out
    assert code in (0, 1)


def test_spec_roundtrip_through_json(ex41):
    assert load(json.dumps(to_json(ex41))) == ex41
