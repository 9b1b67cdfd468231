import json
import subprocess
import sys

import pytest

from ultradisc.cli import main, run_job
from ultradisc.ufield import FieldDesc, FieldKind

QUAD = {"field": {"kind": "padic", "p": 5}, "map": {"lambda": "5", "coefficients": ["1"]}}


def job(command, params=None, base=QUAD):
    out = dict(base, command=command)
    if params is not None:
        out["params"] = params
    return out


def run_cli(tmp_path, payload, *flags):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(payload))
    proc = subprocess.run(
        [sys.executable, "-m", "ultradisc", "--job", str(path), *flags],
        capture_output=True,
        text=True,
    )
    return proc


def rat(n, d=1):
    return {"num": str(n), "den": str(d)}


def test_radii_report():
    report, code = run_job(job("radii"))
    assert code == 0
    res = report["results"]
    assert res["rho"]["exponent"] == rat(0)
    assert res["Rf"]["exponent"] == "+inf"
    assert res["gamma"]["exponent"] == rat(-1)
    assert res["delta"]["exponent"] == rat(-1)
    assert res["sandwich_holds"] is True
    assert report["schema"] == "ultradisc/1"


def test_unknown_tail_radii_undetermined():
    base = {"field": {"kind": "padic", "p": 5}, "map": {"lambda": "5", "coefficients": ["1"], "tail": "unknown"}}
    report, code = run_job(job("radii", base=base))
    assert report["results"]["Rf"] == {"exponent": None, "status": "undetermined"}
    assert code == 2


def test_solve_linear_map():
    base = {"field": {"kind": "laurent_fp", "p": 3}, "map": {"lambda": "T"}}
    report, code = run_job(job("solve", {"N": 8}, base))
    assert code == 0
    assert report["results"]["b"] == ["1"] + ["0"] * 7
    assert all(v["verdict"] == "pass" for v in report["results"]["bound_check"])


def test_solve_quadratic_verdicts():
    report, code = run_job(job("solve", {"N": 8}))
    assert code == 0
    first = report["results"]["bound_check"][0]
    assert first == {
        "k": 2,
        "valuation": -1,
        "bound": {"linear": rat(0), "log2_coeff": rat(1)},
        "verdict": "pass",
        "tight": True,
    }


def test_oracle_job():
    report, code = run_job(job("oracle", {"kmax": 12, "lemma_kmax": 16}))
    assert code == 0
    assert report["results"]["solver_matches_oracle"] is True
    assert report["results"]["partition_lemma_holds"] is True


def test_census_job():
    census = {
        "field": {"kind": "laurent_fp", "p": 3},
        "command": "census",
        "params": {"series": {"coefficients": ["1", "1"], "polynomial": True}, "m": 1},
    }
    report, code = run_job(census)
    assert code == 0
    assert report["results"]["histogram"] == {"0": 2, "2": 1}
    assert report["results"]["lemma1"]["d"] == 2


def test_verify_job():
    report, code = run_job(job("verify", {"N": 24, "points": ["25", "-5"], "mode": "full"}))
    assert code == 0
    verdicts = [p["verdict"] for p in report["results"]["full"]["points"]]
    assert verdicts == ["pass", "out_of_domain"]


def test_schema_error_names_path():
    bad = job("radii")
    bad["map"] = dict(bad["map"], extra=1)
    report, code = run_job(bad)
    assert code == 1
    assert report["error"]["code"] == "SchemaError"
    assert report["error"]["path"] == "$.map"


def test_params_schema_error_path():
    report, code = run_job(job("solve", {"N": 1}))
    assert code == 1 and report["error"]["path"] == "$.params.N"


def test_module_error_has_code():
    base = {"field": {"kind": "padic", "p": 5}, "map": {"lambda": "3"}}
    report, code = run_job(job("radii", base=base))
    assert code == 1 and report["error"]["code"] == "IndifferentMultiplier"


def test_parse_error_code():
    base = {"field": {"kind": "padic", "p": 5}, "map": {"lambda": "5 +"}}
    report, code = run_job(job("radii", base=base))
    assert code == 1 and report["error"]["code"] == "ParseError"


def test_echo_round_trips():
    base = {"field": {"kind": "laurent_q"}, "map": {"lambda": "2*T", "coefficients": ["1/3", "T^-1"]}}
    report, _ = run_job(job("radii", base=base))
    field = FieldDesc(FieldKind.LAURENT_Q)
    echo = report["job"]["map"]
    for given, shown in zip(["2*T", "1/3", "T^-1"], [echo["lambda"], *echo["coefficients"]]):
        assert field.parse(shown) == field.parse(given)
    assert report["job"]["field"]["precision"] == 256


def test_missing_job_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 64
    assert "usage" in capsys.readouterr().err


def test_cli_deterministic(tmp_path):
    payload = job("verify", {"N": 16, "random_points": 3})
    a = run_cli(tmp_path, payload, "--seed", "7", "--quiet")
    b = run_cli(tmp_path, payload, "--seed", "7", "--quiet")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert a.stderr == ""


def test_cli_out_and_order(tmp_path):
    out = tmp_path / "r.json"
    proc = run_cli(tmp_path, job("solve", {"N": 8}), "--out", str(out), "--order", "5")
    assert proc.returncode == 0
    assert proc.stdout == ""
    report = json.loads(out.read_text())
    assert report["results"]["order"] == 5
    assert len(report["results"]["b"]) == 5
    assert "solve: pass" in proc.stderr


def test_cli_fail_exit_code(tmp_path):
    census = {
        "field": {"kind": "laurent_fp", "p": 3},
        "command": "census",
        "params": {"series": {"coefficients": ["1", "1"], "polynomial": True}, "m": 2, "radius_exponent": 1},
    }
    # on the larger disc the injectivity lemma does not apply, so there is no d to compare with
    proc = run_cli(tmp_path, census, "--quiet")
    assert proc.returncode == 2


def test_cli_bad_json(tmp_path):
    path = tmp_path / "job.json"
    path.write_text("{not json")
    proc = subprocess.run(
        [sys.executable, "-m", "ultradisc", "--job", str(path)], capture_output=True, text=True
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["error"]["code"] == "SchemaError"
