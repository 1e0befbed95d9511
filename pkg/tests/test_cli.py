from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from popov_verify.cli import ReportRecord, determinism_hash, expand_grid, fmt_num, main, parse_num
from popov_verify.errors import InvalidSpec

SCAN = ["scan", "theta_involution", "--k", "1..4", "--x", "0.7..2.0:8", "--y", "0.1..0.6:6", "--tol", "1e-9"]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_wall(doc):
    for r in doc["records"]:
        r.pop("wall_time")
    return doc


# list


def test_list_pretty(capsys):
    code, out, _ = run(["list"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 20
    assert any("x>y>0" in line for line in lines)


def test_list_json(capsys):
    code, out, _ = run(["list", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc) == 20
    assert {"id", "params", "constraints"} <= set(doc[0])


# run


def test_run_pass(capsys):
    code, out, _ = run(["run", "analogue_j", "--k", "2", "--x", "2.0", "--y", "1.0", "--tol", "1e-10"], capsys)
    assert code == 0
    assert out.startswith("PASS analogue_j")


def test_run_domain_violation(capsys):
    code, _, err = run(["run", "analogue_i", "--k", "2", "--x", "1.0", "--y", "2.0"], capsys)
    assert code == 2
    assert "x>y>0" in err and "x=1.0" in err and "y=2.0" in err


def test_run_unknown_identity(capsys):
    code, out, err = run(["run", "no_such_identity", "--x", "1"], capsys)
    assert code == 2 and "unknown identity" in err and out == ""


def test_run_rejects_grid(capsys):
    code, _, err = run(["run", "theta_k", "--k", "1..3", "--x", "1.0"], capsys)
    assert code == 2 and "scan" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "guinand_j", "--k", "3", "--nu", "1.0", "--x", "1", "--y", "0.3"],  # DomainNotCovered
        ["run", "guinand_k1", "--nu", "2", "--x", "1", "--y", "0"],  # PoleAt
        ["run", "theta_k", "--k", "2", "--x", "-1"],  # InvalidSpec
        ["mellin", "forward", "--s", "-0.6", "--alpha", "2", "--beta", "1", "--k", "1"],  # DomainError
        ["mellin", "forward", "--s", "2", "--alpha", "1", "--beta", "2", "--k", "2"],
    ],
)
def test_exit_code_spec_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err.startswith("verify:")


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "theta_k", "--k", "2", "--x", "0.001", "--tol", "1e-12", "--max-terms", "10"],  # TolUnreachable
        ["mellin", "gamma2f1", "--sigma", "1.5", "--mu", "0", "--nu", "0.5", "--alpha", "1", "--beta", "0.4", "--tol", "0.1"],
    ],
)
def test_exit_code_tolerance_errors(argv, capsys, monkeypatch):
    monkeypatch.delenv("POPOV_VERIFY_MAX_TERMS", raising=False)
    code, _, _ = run(argv, capsys)
    assert code == 3


def test_max_terms_env(capsys, monkeypatch):
    monkeypatch.setenv("POPOV_VERIFY_MAX_TERMS", "5")
    code, _, _ = run(["run", "theta_k", "--k", "2", "--x", "0.001"], capsys)
    assert code == 3


def test_exit_code_failure(capsys):
    argv = ["mellin", "asym2f1", "--heights", "50,100,200", "--sigma", "0.5", "--nu", "0.75", "--alpha", "1", "--beta", "0.5"]
    code, out, _ = run(argv, capsys)
    assert code == 1
    assert out.count("FAIL") == 3


# scan


def test_scan_grid(capsys):
    code, out, _ = run(SCAN + ["--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert len(doc["records"]) == 192
    assert all(r["pass"] == "true" for r in doc["records"])
    first = doc["records"][0]
    assert (first["param.k"], first["param.x"], first["param.y"]) == ("1", "0.69999999999999996", "0.10000000000000001")


def test_scan_deterministic_across_jobs(capsys, tmp_path):
    docs = []
    for jobs in ("1", "3", "1"):
        path = tmp_path / f"out{jobs}{len(docs)}.json"
        assert main(SCAN + ["--format", "json", "--jobs", jobs, "--out", str(path)]) == 0
        docs.append(json.loads(path.read_text()))
    hashes = {d["summary"]["determinism_hash"] for d in docs}
    assert len(hashes) == 1
    assert strip_wall(docs[0]) == strip_wall(docs[1]) == strip_wall(docs[2])


def test_scan_csv(capsys):
    code, out, _ = run(["scan", "theta_k", "--k", "1,2", "--x", "0.5..1.5:3", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 6
    recs = [ReportRecord.from_flat(r) for r in rows]
    assert [r.params["k"] for r in recs] == [1, 1, 1, 2, 2, 2]
    assert all(r.passed for r in recs)


def test_mixed_scan_reports_worst_code(capsys):
    # y >= x at some grid points
    code, out, err = run(["scan", "analogue_i", "--k", "2", "--x", "1.0", "--y", "0.5,1.5", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 2
    assert [r["status"] for r in doc["records"]] == ["ok", "InvalidSpec"]
    assert "y=1.5" in err


def test_mellin_commands(capsys):
    code, out, _ = run(["mellin", "forward", "--s", "2", "--alpha", "2", "--beta", "1", "--k", "2"], capsys)
    assert code == 0 and out.startswith("PASS")
    argv = ["mellin", "asym2f1", "--heights", "50,100,200", "--sigma", "1", "--nu", "0", "--alpha", "1", "--beta", "0.3",
            "--format", "json"]
    code, out, _ = run(argv, capsys)
    doc = json.loads(out)
    assert code == 0
    assert [r["param.t"] for r in doc["records"]] == ["50.0", "100.0", "200.0"]
    assert all("extra.deviation_t" in r for r in doc["records"])


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# analogue run\nk = 2\nx = 2.0\ny = 1.0\ntol = 1e-10\nformat = json\n")
    code, out, _ = run(["run", "analogue_j", "--config", str(cfg)], capsys)
    assert code == 0 and json.loads(out)["records"][0]["param.y"] == "1.0"
    # flags win over the file
    code, out, _ = run(["run", "analogue_j", "--config", str(cfg), "--y", "0.5", "--format", "pretty"], capsys)
    assert code == 0 and "y=0.5" in out


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, _ = run(["run", "theta_k", "--k", "1", "--x", "1", "--config", str(cfg)], capsys)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "popov_verify", "list", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0 and len(json.loads(proc.stdout)) == 20


# grids and records


def test_grid_syntax():
    assert expand_grid("k", "1..4") == [1, 2, 3, 4]
    pts = expand_grid("x", "0.7..2.0:8")
    assert len(pts) == 8 and pts[0] == 0.7 and pts[-1] == 2.0
    assert expand_grid("y", "0.1,0.2") == [0.1, 0.2]
    assert expand_grid("z", "0.5+1i,2") == [0.5 + 1j, 2.0]
    for bad in ("3..1", "1..2:0", ",", "0.5..1.5"):
        with pytest.raises(InvalidSpec):
            expand_grid("x", bad)


finite = st.floats(allow_nan=False, allow_infinity=False)
records = st.builds(
    ReportRecord,
    identity=st.sampled_from(["popov", "analogue_j", "mellin_forward"]),
    params=st.dictionaries(st.sampled_from(["k", "x", "y", "z", "nu"]), st.one_of(st.integers(-5, 50), finite,
                                                                                   st.complex_numbers(allow_nan=False, allow_infinity=False))),
    lhs=st.one_of(st.none(), st.complex_numbers(allow_nan=False, allow_infinity=False)),
    rhs=st.complex_numbers(allow_nan=False, allow_infinity=False),
    abs_residual=st.one_of(st.none(), finite),
    rel_residual=finite,
    lhs_tail=finite,
    rhs_tail=finite,
    tol=finite,
    terms_used=st.one_of(st.none(), st.integers(0, 10**9)),
    passed=st.booleans(),
    wall_time=st.floats(0, 100),
    status=st.sampled_from(["ok", "InvalidSpec"]),
    message=st.text(max_size=20),
    extra=st.dictionaries(st.sampled_from(["tau0", "band", "decreasing"]), st.one_of(finite, st.booleans())),
)


@given(records)
def test_record_round_trip_json(rec):
    text = json.dumps(rec.to_flat())
    assert ReportRecord.from_flat(json.loads(text)) == rec


@given(st.lists(records, min_size=1, max_size=4))
def test_record_round_trip_csv(recs):
    rows = [r.to_flat() for r in recs]
    cols = list(dict.fromkeys(k for row in rows for k in row))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\r\n")
    w.writeheader()
    w.writerows(rows)
    back = [{k: v for k, v in row.items() if v != "" or k in src} for row, src in zip(csv.DictReader(io.StringIO(buf.getvalue())), rows)]
    assert [ReportRecord.from_flat(r) for r in back] == recs


def test_number_format():
    assert fmt_num(0.1) == "0.10000000000000001"
    assert fmt_num(2.0) == "2.0"
    assert fmt_num(3) == "3"
    assert parse_num(fmt_num(1e-300)) == 1e-300
    assert parse_num(fmt_num(1.5 - 2j)) == 1.5 - 2j


def test_hash_ignores_wall_time():
    a = ReportRecord("popov", {"k": 2}, 1 + 0j, 1 + 0j, 0.0, passed=True, wall_time=0.5)
    b = ReportRecord("popov", {"k": 2}, 1 + 0j, 1 + 0j, 0.0, passed=True, wall_time=7.0)
    c = ReportRecord("popov", {"k": 3}, 1 + 0j, 1 + 0j, 0.0, passed=True, wall_time=0.5)
    assert determinism_hash([a]) == determinism_hash([b]) != determinism_hash([c])


def test_max_terms_flag_does_not_leak(capsys, monkeypatch):
    monkeypatch.delenv("POPOV_VERIFY_MAX_TERMS", raising=False)
    assert main(["run", "theta_k", "--k", "2", "--x", "0.001", "--max-terms", "10"]) == 3
    assert main(["run", "theta_k", "--k", "2", "--x", "0.001"]) == 0
