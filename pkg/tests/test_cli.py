import json

import pytest
from click.testing import CliRunner

from artifact.cli import CORPUS, corpus_entry, main

RUSSELL = "x^2*u + x + y^2 + z^3"
P2 = "x*y^2*u + y + x^2*z + x*y*z^2"
P1 = "x*y^2*u + y + x*z + x*y*z^2"


@pytest.fixture
def runner():
    return CliRunner()


def test_classify_text(runner):
    res = runner.invoke(main, ["classify", RUSSELL])
    assert res.exit_code == 0
    assert "verdict: ExoticC3" in res.output
    assert "certificate: Pres3" in res.output


def test_classify_json(runner):
    res = runner.invoke(main, ["classify", "--json", P2])
    data = json.loads(res.output)
    assert res.exit_code == 0 and data["schema"] == 1
    assert data["verdict"]["outcome"] == "IsomorphicC3"
    assert data["residual"]["outcome"] == "Yes"


def test_json_is_byte_deterministic(runner):
    a = runner.invoke(main, ["classify", "--json", RUSSELL]).output
    b = runner.invoke(main, ["classify", "--json", RUSSELL]).output
    assert a == b and "timings" not in a


def test_timings_flag(runner):
    data = json.loads(runner.invoke(main, ["classify", "--json", "--timings", RUSSELL]).output)
    assert set(data["timings"]) == {"classify", "residual"}


def test_parse_error_exit_code(runner):
    assert runner.invoke(main, ["classify", "x^2*u + + y"]).exit_code == 2


def test_precondition_exit_code(runner):
    assert runner.invoke(main, ["classify", "x*u^2 + y"]).exit_code == 3
    assert runner.invoke(main, ["classify", "z*u + y"]).exit_code == 3
    assert runner.invoke(main, ["classify", "y + z"]).exit_code == 3


def test_input_from_file(runner, tmp_path):
    src = tmp_path / "p.txt"
    src.write_text(RUSSELL + "\n")
    res = runner.invoke(main, ["classify", str(src)])
    assert res.exit_code == 0 and "ExoticC3" in res.output


def test_rectify_verify_round_trip(runner, tmp_path):
    out = tmp_path / "w.json"
    res = runner.invoke(main, ["rectify", P1, "--witness-out", str(out)])
    assert res.exit_code == 0 and "result: XVariable" in res.output
    res = runner.invoke(main, ["verify", str(out), P1])
    assert res.exit_code == 0 and res.output.strip() == "OK"


def test_one_stable_round_trip(runner, tmp_path):
    out = tmp_path / "w.json"
    res = runner.invoke(main, ["rectify", P2, "--witness-out", str(out)])
    assert "result: OneStable" in res.output
    assert json.loads(out.read_text())["p_n"] == "x^3*y^2*u + x*y*z^2 + y + z"
    assert runner.invoke(main, ["verify", str(out), P2]).exit_code == 0


def test_verify_wrong_target_fails(runner, tmp_path):
    out = tmp_path / "w.json"
    runner.invoke(main, ["rectify", P1, "--witness-out", str(out)])
    res = runner.invoke(main, ["verify", str(out), P2])
    assert res.exit_code == 1 and "FAIL" in res.output


def test_verify_bare_map(runner, tmp_path):
    out = tmp_path / "w.json"
    runner.invoke(main, ["rectify", P1, "--witness-out", str(out)])
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(json.loads(out.read_text())["witness"]))
    assert runner.invoke(main, ["verify", str(bare), P1]).exit_code == 0


def test_certify(runner):
    data = json.loads(runner.invoke(main, ["certify", "--json", RUSSELL]).output)
    assert data["certificate"]["normal_form"] == "Pres3"
    assert data["lnd_check"]["check"]["kind"] == "LocallyNilpotentUpTo"


def test_corpus_command(runner):
    res = runner.invoke(main, ["corpus", "--json"])
    data = json.loads(res.output)
    assert res.exit_code == 0 and data["all_pass"]
    assert len(data["entries"]) == len(CORPUS)


@pytest.mark.parametrize("name,kind,expr,want", CORPUS)
def test_corpus_entries(name, kind, expr, want):
    assert corpus_entry(kind, expr) == want
