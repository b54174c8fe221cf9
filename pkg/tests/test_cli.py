from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from leibdef.cli import COMMANDS, main
from leibdef.fileformat import catalog_names, decode_base, decode_cochain, decode_deformation, load_algebra
from leibdef.leibniz import adjoint, cohomology
from leibdef.versal import versal_truncation

GOLDEN = Path(__file__).with_name("golden")
EXPECTED_EXIT = {"nonleibniz1": 1}
ORACLE_TOO_BIG = {"abelian2", "abelian3"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), out


def expected_code(cmd, name):
    if name in EXPECTED_EXIT:
        return EXPECTED_EXIT[name]
    if cmd == "harrison-oracle" and name in ORACLE_TOO_BIG:
        return 2
    return 0


@pytest.mark.parametrize("name", catalog_names())
@pytest.mark.parametrize("cmd", COMMANDS)
def test_matches_golden_and_is_deterministic(tmp_path, cmd, name):
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        code = main([cmd, name, "--format", "json", "--out", str(path)])
        assert code == expected_code(cmd, name)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0] == (GOLDEN / f"{cmd}-{name}.json").read_bytes()


def test_fresh_processes_agree():
    args = [sys.executable, "-m", "leibdef", "versal", "nilp2", "--order", "3", "--format", "json"]
    first = subprocess.run(args, capture_output=True, check=True).stdout
    second = subprocess.run(args, capture_output=True, check=True).stdout
    assert first == second


def test_check_nilp2_text(capsys):
    code, out = run(capsys, "check", "nilp2")
    assert code == 0
    assert out.splitlines()[0] == "Leibniz identity: ok"


def test_check_nonleibniz_reports_witness(capsys):
    code, report, _ = run_json(capsys, "check", "nonleibniz1")
    assert code == 1
    assert report["result"]["leibniz"]["violations"] == [
        {"triple": ["e", "e", "e"], "lhs": {"e": "1"}, "rhs": {}}
    ]
    code, out = run(capsys, "check", "nonleibniz1")
    assert code == 1 and "at (e,e,e)" in out


@pytest.mark.parametrize("cmd", [c for c in COMMANDS if c != "check"])
def test_other_commands_refuse_non_leibniz(capsys, cmd):
    code, report, _ = run_json(capsys, cmd, "nonleibniz1")
    assert code == 1
    assert report["status"] == "not-leibniz"
    assert report["violations"][0]["triple"] == ["e", "e", "e"]


def test_cohomology_abelian1(capsys):
    code, report, _ = run_json(capsys, "cohomology", "abelian1", "--degree", "2")
    assert code == 0 and report["result"]["betti"] == 1
    code, out = run(capsys, "cohomology", "abelian1", "--degree", "2")
    assert "dim HL^2(L; L) = 1" in out


def test_versal_abelian1_order3(capsys):
    code, report, _ = run_json(capsys, "versal", "abelian1", "--order", "3")
    assert code == 0
    res = report["result"]
    assert res["relations"] == ["t^2"]
    assert res["bracket"]["coefficients"] == [{"monomial": "t", "cochain": {"e1,e1": {"e1": "1"}}}]
    assert res["bracket"]["brackets"] == ["[e1,e1] = t*e1"]
    assert res["base"]["presentation"] == "Q[t]/(t^2)"


def test_versal_report_round_trips(capsys):
    code, report, _ = run_json(capsys, "versal", "nilp2", "--order", "3")
    alg = load_algebra("nilp2")
    res = versal_truncation(alg, 3)
    body = report["result"]
    assert decode_base(body["base"]).same_presentation(res.base)
    assert decode_deformation(alg, body["bracket"]).same_as(res.bracket)


def test_cohomology_report_round_trips(capsys):
    _, report, _ = run_json(capsys, "cohomology", "nilp2", "--degree", "3")
    alg = load_algebra("nilp2")
    data = cohomology(alg, adjoint(alg), 3)
    reps = [decode_cochain(alg, 3, r) for r in report["result"]["representatives"]]
    assert reps == list(data.representatives)


def test_obstruct_nilp2_vanishes(capsys):
    code, report, _ = run_json(capsys, "obstruct", "nilp2")
    assert code == 0 and report["result"]["vanishes"] is True


def test_obstruct_abelian1_is_nonzero(capsys):
    code, report, _ = run_json(capsys, "obstruct", "abelian1")
    assert code == 0
    res = report["result"]
    assert res["vanishes"] is False
    assert [d["kernel"] for d in res["directions"]] == ["t^2"]
    # [e,[e,e]] - [[e,e],e] + [[e,e],e] = t^2 e
    assert res["directions"][0]["phi_bar"] == {"e1,e1,e1": {"e1": "1"}}


def test_harrison_oracle(capsys):
    code, report, _ = run_json(capsys, "harrison-oracle", "nilp2", "--order", "2")
    res = report["result"]
    assert code == 0 and res["agree"]
    assert res["bruteforce"] == {"1": 1, "2": 1}
    code, report, _ = run_json(capsys, "harrison-oracle", "abelian2")
    assert code == 2 and "limited to dim <= 6" in report["error"]


def test_timing_is_opt_in(capsys):
    _, report, _ = run_json(capsys, "check", "nilp2")
    assert "timing_seconds" not in report
    _, report, _ = run_json(capsys, "check", "nilp2", "--timing")
    assert report["timing_seconds"] >= 0


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate", "nilp2"],
        ["check"],
        ["versal", "nilp2", "--order", "x"],
        ["check", "nilp2", "--format", "yaml"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2
    capsys.readouterr()


@pytest.mark.parametrize(
    "argv",
    [
        ["versal", "nilp2", "--order", "0"],
        ["versal", "nilp2", "--order", "99"],
        ["cohomology", "nilp2", "--degree", "-1"],
        ["harrison-oracle", "nilp2", "--degree", "4"],
        ["check", "no-such-algebra"],
    ],
)
def test_range_and_lookup_errors_exit_2(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2 and out.startswith("error: ")


def test_parse_error_exit_2_with_location(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "brackets": [{"left": 1, "right": 5, "value": []}]}')
    code, report, _ = run_json(capsys, "check", str(bad))
    assert code == 2
    assert "brackets[0].right: index 5 out of range 1..2" in report["error"]


def test_one_third_file_fails_check(capsys, tmp_path):
    path = tmp_path / "third.json"
    path.write_text('{"name": "third", "dim": 1, "brackets": [{"left": 1, "right": 1, "value": [[1, "1/3"]]}]}')
    code, report, _ = run_json(capsys, "check", str(path))
    assert code == 1
    assert report["result"]["leibniz"]["violations"][0]["lhs"] == {"e1": "1/9"}


def test_catalog_env_override(capsys, tmp_path, monkeypatch):
    (tmp_path / "mine.json").write_text('{"name": "mine", "dim": 1}')
    monkeypatch.setenv("LEIBDEF_CATALOG", str(tmp_path))
    code, out = run(capsys, "check", "mine")
    assert code == 0 and out.startswith("Leibniz identity: ok")
    assert run(capsys, "check", "nilp2")[0] == 2


def test_out_writes_file(capsys, tmp_path):
    path = tmp_path / "r.txt"
    assert main(["versal", "abelian1", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert "relations: t^2" in path.read_text()


def test_text_reports_render(capsys):
    for cmd in COMMANDS:
        code, out = run(capsys, cmd, "nilp2")
        assert code == 0 and out.strip()
