import json
import os
import subprocess
import sys

import pytest

from conftest import FIXTURES
from orbithull.cli import main
from test_acceptance import EPS_QPRIME, F_PRINTED

GOOD = ["three_cycle_relproj.toml", "four_cycle_two.toml", "four_cycle_one.toml", "triangle_sigma.toml",
        "a3_stalk.toml", "orbit_random.toml"]


def fixture(name):
    return os.path.join(FIXTURES, name)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", GOOD)
def test_fixture_round_trip(name, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, _, err = run(capsys, "run", fixture(name), "-o", cert)
    assert code == 0, err
    code, out, err = run(capsys, "verify", cert)
    assert code == 0, err
    assert json.loads(out)["verdict"] == "ACCEPTED"


@pytest.mark.parametrize("name", GOOD)
def test_deterministic(name, capsys):
    _, first, _ = run(capsys, "run", fixture(name))
    _, second, _ = run(capsys, "run", fixture(name))
    assert first == second


@pytest.mark.parametrize("command,field", [("splice", None), ("nongradable", None), ("cycle-complex", "5"),
                                           ("splice", "QQ")])
def test_other_commands_verify(command, field, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    extra = ["--field", field] if field else []
    code, _, err = run(capsys, command, fixture("four_cycle_two.toml"), "-o", cert, *extra)
    assert code == 0, err
    code, out, _ = run(capsys, "verify", cert)
    assert json.loads(out)["verdict"] == "ACCEPTED"


def test_cycle_complex_report(capsys):
    code, out, _ = run(capsys, "run", fixture("four_cycle_two.toml"))
    d = json.loads(out)
    assert code == 0
    assert d["witnesses"]["period"] == [["2", "g*b"], ["4", "a*d"]]


def test_flag_embeds_relproj_example(capsys):
    code, out, _ = run(capsys, "flag", fixture("three_cycle_relproj.toml"))
    d = json.loads(out)
    assert code == 0
    rel = d["witnesses"]["relproj"]
    assert rel["Qprime"]["differential"] == EPS_QPRIME
    assert rel["f"]["words"] == F_PRINTED


def test_tampered_certificate_rejected(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    run(capsys, "run", fixture("three_cycle_relproj.toml"), "-o", cert)
    d = json.loads(cert.read_text())
    d["witnesses"]["f"]["words"][0][0] = "0"
    cert.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", cert)
    assert json.loads(out)["verdict"] == "REJECTED"
    assert code == 1


def test_parse_errors(capsys):
    code, _, err = run(capsys, "run", fixture("bad_arrow.toml"))
    assert code == 2 and "7:25" in err and "unknown arrow 'x'" in err
    code, _, err = run(capsys, "run", fixture("bad_syntax.toml"))
    assert code == 2 and ":3:1:" in err


def test_semantic_error(tmp_path, capsys):
    job = tmp_path / "job.toml"
    job.write_text('[algebra]\nnamed = "three-cycle"\n[objects.M]\nmodule = ["2"]\nepsilon = [["a*g*b"]]\n'
                   '[job]\ncommand = "stalk-check"\nobject = "M"\n')
    code, _, err = run(capsys, "run", job)
    assert code == 3 and "NOT_HEREDITARY" in err
    job.write_text('[algebra]\nnamed = "three-cycle"\n[objects.M]\nmodule = ["2"]\nepsilon = [["e2"]]\n'
                   '[job]\ncommand = "indec"\nobject = "M"\n')
    code, _, err = run(capsys, "run", job)
    assert code == 3 and "NOT_A_COMPLEX" in err


def test_strict_unknown(tmp_path, capsys):
    job = tmp_path / "job.toml"
    job.write_text('[algebra]\nnamed = "three-cycle"\n[field]\np = 3\n'
                   '[objects.X]\nmodule = ["2", "2"]\nepsilon = [["0", "0"], ["a*g*b", "0"]]\n'
                   '[job]\ncommand = "iso"\nsource = "X"\ntarget = "X"\n')
    code, out, _ = run(capsys, "run", job, "--cap-enum", 1, "--cap-random", 0, "--strict")
    assert code == 4 and json.loads(out)["verdict"] == "UNKNOWN"
    code, out, _ = run(capsys, "run", job, "--cap-enum", 1, "--cap-random", 0)
    assert code == 0
    code, out, _ = run(capsys, "run", job)
    assert json.loads(out)["verdict"] == "YES"


def test_set_override(capsys):
    code, out, _ = run(capsys, "run", fixture("four_cycle_one.toml"), "--set", "n=2")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "NON_GRADABLE_OBJECT_EXISTS" and d["job"]["args"]["n"] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "orbithull", "cycle-complex", fixture("four_cycle_two.toml"), "--text"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.startswith("cycle-complex:")
