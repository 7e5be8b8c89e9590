import csv
import json
import os

import pytest

from cmsha.cli import (RunConfig, _fmt_mp, _load_existing, _record,
                       cmd_verify, main)
from cmsha.numerics import make_context
from cmsha.report import sha_order

COLS = ("q", "h", "clgp", "digits", "L_total", "G", "sha_real", "sha_round",
        "is_square", "sha_sqrt", "residual", "max_w_dev", "j", "m", "n",
        "runtime_ms")


def test_fmt_mp_significant_digits(ctx32):
    assert _fmt_mp(ctx32.pi, 32) == "3.1415926535897932384626433832795"
    assert _fmt_mp(ctx32.mp.mpf("2.5"), 10) == "2.5"
    assert _fmt_mp(ctx32.mp.mpf(0), 10) == "0"
    assert _fmt_mp(-ctx32.pi, 5) == "-3.1416"
    # exact dyadic, half-even at the boundary digit
    assert _fmt_mp(ctx32.mp.mpf("0.125"), 2) == "0.12"
    assert _fmt_mp(ctx32.mp.mpf("0.375"), 2) == "0.38"
    big = ctx32.mp.mpf(2) ** 200
    assert _fmt_mp(big, 12).startswith("1.60693804426")


def test_fmt_mp_round_trips_to_float(ctx32):
    for s in ("1e-37", "-3375", "4.1468671392077063935321506245055e6"):
        x = ctx32.mp.mpf(s)
        assert float(_fmt_mp(x, 32)) == pytest.approx(float(x), rel=1e-15)


def test_record_columns():
    rec = _record(sha_order(7, 32))
    assert tuple(rec) == COLS
    assert rec["q"] == 7 and rec["clgp"] == "1" and rec["sha_round"] == 1
    assert rec["is_square"] is True and rec["sha_sqrt"] == 1
    rec71 = _record(sha_order(71, 32))
    assert rec71["clgp"] == "7" and rec71["sha_sqrt"] == 9


def test_compute_exit_codes(capsys):
    assert main(["compute", "7"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == ",".join(COLS)
    assert out[1].startswith("7,1,1,32,")
    assert main(["compute", "11"]) == 1
    assert "7 mod 8" in capsys.readouterr().err
    assert main(["compute", "15"]) == 1
    assert "not prime" in capsys.readouterr().err
    assert main(["compute", "7", "--digits", "5"]) == 1
    assert main(["compute", "7", "--tgrid", "1,bogus"]) == 1
    assert main(["bogus-mode"]) == 1
    assert main([]) == 1
    assert main(["compute", "7", "--fmt", "json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["sha_round"] == 1


def test_compute_out_file(tmp_path, capsys):
    out = tmp_path / "one.csv"
    assert main(["compute", "23", "--out", str(out)]) == 0
    rows = _load_existing(str(out), "csv", 32)
    assert len(rows) == 1 and rows[0]["q"] == "23" and rows[0]["clgp"] == "3"
    capsys.readouterr()


def test_env_digits(monkeypatch, capsys):
    monkeypatch.setenv("CMSHA_DIGITS", "20")
    assert main(["compute", "7"]) == 0
    assert ",20," in capsys.readouterr().out.splitlines()[1]
    # explicit flag wins
    assert main(["compute", "7", "--digits", "32"]) == 0
    assert ",32," in capsys.readouterr().out.splitlines()[1]
    monkeypatch.setenv("CMSHA_DIGITS", "not-a-number")
    assert main(["compute", "7"]) == 1


def test_range_validation(tmp_path, capsys):
    out = str(tmp_path / "r.csv")
    assert main(["range", "--q-min", "50", "--q-max", "10",
                 "--out", out]) == 1
    assert main(["range", "--q-min", "0", "--q-max", "10",
                 "--out", out]) == 1
    assert main(["range", "--q-min", "7", "--q-max", "8",
                 "--out", "/nonexistent-dir/f.csv"]) == 1
    assert main(["range", "--q-min", "7", "--q-max", "8"]) == 1
    capsys.readouterr()


def test_range_sweep_and_resume(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["range", "--q-min", "1", "--q-max", "50",
                 "--out", str(out)]) == 0
    first = out.read_bytes()
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["q"] for r in rows] == ["7", "23", "31", "47"]
    assert all(r["is_square"] == "true" for r in rows)

    # resume recomputes nothing and rewrites the same bytes
    assert main(["range", "--q-min", "1", "--q-max", "50",
                 "--out", str(out), "--resume"]) == 0
    assert "resumed" in capsys.readouterr().out
    assert out.read_bytes() == first

    # resume extends the file, keeping old rows untouched
    assert main(["range", "--q-min", "1", "--q-max", "72",
                 "--out", str(out), "--resume"]) == 0
    with open(out, newline="") as fh:
        rows2 = list(csv.DictReader(fh))
    assert [r["q"] for r in rows2] == ["7", "23", "31", "47", "71"]
    assert [r for r in rows2 if r["q"] != "71"] == rows
    capsys.readouterr()


def test_range_jsonl_roundtrip(tmp_path, capsys):
    out = tmp_path / "sweep.jsonl"
    assert main(["range", "--q-min", "1", "--q-max", "32",
                 "--out", str(out), "--fmt", "json"]) == 0
    first = out.read_bytes()
    recs = [json.loads(line) for line in first.splitlines()]
    assert [r["q"] for r in recs] == [7, 23, 31]
    assert recs[0]["is_square"] is True
    assert main(["range", "--q-min", "1", "--q-max", "32",
                 "--out", str(out), "--fmt", "json", "--resume"]) == 0
    assert out.read_bytes() == first
    capsys.readouterr()


def test_range_parallel_matches_serial(tmp_path, capsys):
    a = tmp_path / "serial.csv"
    b = tmp_path / "par.csv"
    assert main(["range", "--q-min", "1", "--q-max", "50",
                 "--out", str(a)]) == 0
    assert main(["range", "--q-min", "1", "--q-max", "50",
                 "--out", str(b), "--jobs", "3"]) == 0

    def rows_sans_runtime(path):
        with open(path, newline="") as fh:
            return [{k: v for k, v in r.items() if k != "runtime_ms"}
                    for r in csv.DictReader(fh)]

    assert rows_sans_runtime(a) == rows_sans_runtime(b)
    capsys.readouterr()


def test_range_unverified_exit(tmp_path, capsys):
    # q=479 cannot pass the 10^(-digits/2) gate at 32 digits
    out = tmp_path / "u.csv"
    assert main(["range", "--q-min", "479", "--q-max", "480",
                 "--out", str(out)]) == 2
    err = capsys.readouterr().err
    assert "unverified" in err
    rows = _load_existing(str(out), "csv", 32)
    assert len(rows) == 1  # the record is still written


def test_verify_cli_and_fault_injection(capsys):
    assert main(["verify", "--q", "7,23"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 9 and "FAIL" not in out
    assert cmd_verify(RunConfig(mode="verify", qs=(7, 23),
                                inject_fault="coeff")) == 3
    out = capsys.readouterr().out
    assert "FAIL" in out and "coefficients-vs-ideals" in out
    assert main(["verify", "--q", "12"]) == 1
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert main(["compute", "--help"]) == 0
    capsys.readouterr()
