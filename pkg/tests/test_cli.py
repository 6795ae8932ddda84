import json

from click.testing import CliRunner

from flux.cli import cli, run


def invoke(*args):
    return CliRunner().invoke(cli, list(args))


def test_theta_p():
    r = invoke("theta", "p", "--hprec", "2")
    assert r.exit_code == 0
    doc = json.loads(r.output)
    assert doc["coefficients"][1] == "O(h^(2))"


def test_theta_verify_lines():
    r = invoke("theta", "verify", "--identity", "symmetry", "--hprec", "3", "--twindow", "8")
    assert r.exit_code == 0 and r.output.strip() == "PASS symmetry"


def test_hh_table_with_direct_route():
    r = invoke("hh", "table", "--imax", "3", "--jmin", "-1", "--jmax", "1", "--direct")
    assert r.exit_code == 0
    doc = json.loads(r.output)
    assert doc["agree"] and doc["table"]["(1,0)"] == 4


def test_torus_count_writes_witnesses(tmp_path):
    out = tmp_path / "w.json"
    r = invoke("torus", "count", "--product", "z2w1", "--witnesses", str(out))
    assert r.exit_code == 0
    assert json.loads(out.read_text())
    assert json.loads(r.output)["product"] == "z2w1"


def test_ext_commands():
    assert invoke("ext", "qh", "--r", "3").exit_code == 0
    assert json.loads(invoke("ext", "mt", "--d0", "0", "--d1", "2").output)["h0_dimension"] == 2


def test_bad_options_exit_2():
    assert invoke("verify-all", "--hprec", "x").exit_code == 2
    assert invoke("verify-all", "--hprec", "-1").exit_code == 2
    assert invoke("torus", "count", "--product", "nope").exit_code == 2
    assert invoke("theta", "verify", "--identity", "nope").exit_code == 2
    assert invoke("qp", "build", "--p", "1,2").exit_code == 2
    assert run(["verify-all", "--only", "99"]) == 2
    assert run(["no-such-command"]) == 2


def test_verify_all_exit_codes_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    r = invoke("verify-all", "--only", "3", "--only", "11", "--json", str(a))
    assert r.exit_code == 0
    invoke("verify-all", "--only", "3", "--only", "11", "--json", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert invoke("verify-all", "--only", "2").exit_code == 1
