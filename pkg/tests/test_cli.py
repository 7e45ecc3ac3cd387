import json
import subprocess
import sys
from importlib import resources

import pytest

from rdskit.cli import main
from rdskit.orbitsearch import SearchJob
from test_orbitsearch import known_73_lift

STAMP = "2026-01-01T00:00:00Z"


def data(name):
    return str(resources.files("rdskit").joinpath("data").joinpath(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_bundled(capsys):
    code, out, _ = run(capsys, "verify", data("known_designs.jsonl"))
    assert code == 0
    assert out.count(" ok") == 2


def test_verify_reports_failing_residue(capsys, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"kind": "ds", "modulus": 7, "params": {"v": 7, "k": 4, "lam": 2},
                               "elements": [0, 1, 2, 3], "provenance": "ingested:test"}) + "\n")
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == 1
    assert "FAILED at residue" in out


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "verify", str(tmp_path / "missing.jsonl"))[0] == 4
    assert run(capsys, "construct", "paley", "p=9")[0] == 2
    assert run(capsys, "construct", "paley")[0] == 2
    assert run(capsys, "construct", "paley", "p=x")[0] == 2
    assert run(capsys, "feasibility", "7", "4", "3")[0] == 2
    assert run(capsys, "report", "--tables", "8")[0] == 2
    assert run(capsys, "--threads", "0", "report", "--tables", "6")[0] == 2
    assert run(capsys, "search-lifts", data("singer73_base.jsonl"), "14")[0] == 3


def test_construct_writes_verified_entries(capsys, tmp_path):
    out = tmp_path / "s.jsonl"
    code, _, _ = run(capsys, "construct", "singer-rds", "q=2", "d=3", "--out", str(out),
                     "--timestamp", STAMP)
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["kind"] == "rds" and obj["verified"] and obj["verified_at"] == STAMP
    assert obj["provenance"].startswith("constructed:")
    code, stdout, _ = run(capsys, "construct", "complement-paley", "p=11")
    assert code == 0 and json.loads(stdout)["params"] == {"k": 6, "lam": 3, "v": 11}


def test_feasibility_103(capsys):
    code, out, _ = run(capsys, "feasibility", "103", "51", "25")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines == ["n=5 Pott2.5 ruled_out", "n=25 Pott2.5 ruled_out"]


def test_feasibility_csv_and_design(capsys):
    code, out, _ = run(capsys, "feasibility", "7", "4", "2", "--design",
                       data("known_designs.jsonl"), "--csv")
    assert code == 0
    assert out.splitlines() == ["n,status,theorem,fired", "2,passes,,"]


def test_multipliers_verb(capsys):
    code, out, _ = run(capsys, "multipliers", data("singer73_base.jsonl"), "--n", "2")
    assert code == 0
    assert "multiplier group: [1, 2, 4, 8, 16, 32, 37, 55, 64]" in out
    assert "75" in out.splitlines()[-1]


def test_search_lifts_73(capsys, tmp_path):
    job = tmp_path / "t1.json"
    out = tmp_path / "found.jsonl"
    code, _, err = run(capsys, "search-lifts", data("singer73_base.jsonl"), "2", "-t", "75",
                       "--normalize", "--job", str(job), "--out", str(out))
    assert code == 0
    (line,) = out.read_text().splitlines()
    obj = json.loads(line)
    assert obj["elements"] == known_73_lift().support
    assert obj["provenance"] == "searched:t1"
    assert SearchJob.load(job).done
    assert "1 lifting(s)" in err
    # a finished job resumes to the same answer without searching again
    code, _, _ = run(capsys, "search-lifts", data("singer73_base.jsonl"), "2", "-t", "75",
                     "--normalize", "--job", str(job), "--out", str(out))
    assert code == 0 and out.read_text().splitlines() == [line]


def test_search_lifts_job_needs_multiplier(capsys, tmp_path):
    code, _, _ = run(capsys, "search-lifts", data("known_designs.jsonl"), "2", "--job",
                     str(tmp_path / "j.json"))
    assert code == 2


def test_cw_pipeline(capsys, tmp_path):
    rds7 = tmp_path / "r7.jsonl"
    rds13 = tmp_path / "r13.jsonl"
    cw7, cw13, cw91 = (tmp_path / f"c{n}.jsonl" for n in (7, 13, 91))
    assert run(capsys, "search-lifts", data("known_designs.jsonl"), "2", "--out", str(rds7))[0] == 0
    assert run(capsys, "construct", "singer-rds", "q=3", "d=3", "n=2",
               "--out", str(rds13))[0] == 0
    assert run(capsys, "cw-from-rds", str(rds7), "--out", str(cw7))[0] == 0
    assert run(capsys, "cw-from-rds", str(rds13), "--out", str(cw13))[0] == 0
    assert run(capsys, "cw-kronecker", str(cw7), str(cw13), "--out", str(cw91))[0] == 0
    code, out, _ = run(capsys, "cw-verify", str(cw91))
    assert code == 0 and out.strip() == "CW(91,36) ok proper"


def test_cw_verify_flags_bad_signs(capsys, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"kind": "cw", "modulus": 7, "params": {"n": 7, "k": 4},
                               "elements": [1, 2, 3, 5], "signs": [1, 1, 1, 1],
                               "provenance": "ingested:test"}) + "\n")
    code, out, _ = run(capsys, "cw-verify", str(bad))
    assert code == 1 and "FAILED" in out


def test_report_is_byte_stable(capsys, tmp_path):
    args = ["report", "--tables", "2,6,7"]
    code1, out1, _ = run(capsys, *args, "--csv", str(tmp_path / "a.csv"))
    code2, out2, _ = run(capsys, *args, "--csv", str(tmp_path / "b.csv"))
    assert code1 == code2 == 0
    assert out1 == out2
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert "summary:" in out1


def test_report_strict(capsys):
    # table 2 carries known disagreements, so strict mode signals them
    code, out, _ = run(capsys, "report", "--tables", "2", "--strict")
    assert code == 1
    assert "MISMATCH" in out
    code, _, _ = run(capsys, "report", "--tables", "6", "--strict")
    assert code == 0


def test_global_flags_before_or_after_verb():
    from rdskit.cli import build_parser
    ap = build_parser()
    for argv in (["--threads", "3", "report"], ["report", "--threads", "3"]):
        assert ap.parse_args(argv).threads == 3
    assert ap.parse_args(["verify", "x", "--backend", "numpy"]).backend == "numpy"


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "rdskit", "verify", data("known_designs.jsonl")],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0, r.stderr
    r = subprocess.run([sys.executable, "-m", "rdskit", "--help"], capture_output=True,
                       text=True, check=False)
    for verb in ("verify", "construct", "feasibility", "multipliers", "search-lifts",
                 "cw-verify", "cw-kronecker", "cw-from-rds", "report"):
        assert verb in r.stdout
