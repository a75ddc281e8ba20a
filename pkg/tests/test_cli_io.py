import json

import pytest

from exset.cli import run_cli
from exset.errors import ValidationErrors
from exset.io import (
    load_problem,
    parse_problem,
    series_from_json,
    state_from_json,
    state_to_json,
    validate,
)
from exset.steering import run
from exset.verify import check_state

from conftest import FIXTURES, random_points

WALK = FIXTURES / "walkthrough.json"
EXC = FIXTURES / "exceptional_2d.json"
ARTIFACTS = ("series.json", "stagelog.json", "report.json", "certificate.json")


def exc_problem(points, m=2):
    return {"variables": m, "mode": "exceptional", "seed": 1,
            "points": [{"coords": c, "role": r} for c, r in points]}


Z, ONE, I, MI, TWO = ["0/1", "0/1"], ["1/1", "0/1"], ["0/1", "1/1"], ["0/1", "-1/1"], ["2/1", "0/1"]


def kinds(errors):
    return sorted(type(e).__name__ for e in errors)


def test_fixtures_validate():
    assert validate(load_problem(WALK)) == []
    assert validate(load_problem(EXC)) == []


def test_origin_missing():
    p = parse_problem(exc_problem([([ONE, ONE], "S")]))
    assert kinds(validate(p)) == ["OriginMissing"]


def test_not_conj_closed():
    p = parse_problem(exc_problem([([Z, Z], "S"), ([I, ONE], "S")]))
    errs = validate(p)
    assert kinds(errs) == ["NotConjClosed"]
    assert errs[0].location == "points[1]"


def test_overlap_and_duplicate():
    p = parse_problem(exc_problem([([Z, Z], "S"), ([ONE, TWO], "S"), ([ONE, TWO], "V")]))
    assert kinds(validate(p)) == ["DuplicatePoint", "OverlapSV"]


def test_bad_rational_and_arity_collected():
    data = exc_problem([([Z, Z], "S"), ([["3/0", "0/1"], ONE], "S"), ([ONE], "V"), ([["1.5", "0"], ONE], "V")])
    with pytest.raises(ValidationErrors) as info:
        parse_problem(data)
    errs = info.value.errors
    assert kinds(errs) == ["ArityMismatch", "BadRational", "BadRational"]
    assert [e.location for e in errs] == ["points[1]", "points[2]", "points[3]"]


def test_degree_too_small():
    data = json.loads(WALK.read_text())
    data["degree"] = 1
    assert kinds(validate(parse_problem(data))) == ["BadProblem"]


def test_problem_roundtrip():
    for path in (WALK, EXC):
        p = load_problem(path)
        assert parse_problem(p.to_json()) == p
        assert parse_problem(json.loads(json.dumps(p.to_json()))).to_json() == p.to_json()


def test_state_roundtrip():
    s = run(random_points(2, 3, 4), seed=9, degree=6)
    back = state_from_json(json.loads(json.dumps(state_to_json(s))))
    assert state_to_json(back) == state_to_json(s)
    assert back.fstar == s.fstar and back.stages == s.stages
    assert check_state(back).passed


def test_cli_walkthrough(tmp_path):
    assert run_cli(["--input", str(WALK), "--out", str(tmp_path), "--verify"]) == 0
    series = json.loads((tmp_path / "series.json").read_text())
    poly = series_from_json(series)
    assert [(e, c.to_json()) for e, c in poly.items()] == [
        ((0,), [["1/1", "0/1"]]), ((1,), [["1/2", "0/1"]]), ((2,), [["-1/8", "0/1"]])]
    report = json.loads((tmp_path / "report.json").read_text())
    assert [p["f_value"] for p in report["points"]] == [[["1/1", "0/1"]], [["3/2", "0/1"]], [["5/2", "0/1"]]]
    assert json.loads((tmp_path / "certificate.json").read_text())["pass"] is True


def test_cli_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run_cli(["--input", str(EXC), "--out", str(out), "--verify", "--emit-psi"]) == 0
    for name in ARTIFACTS + ("psi.json",):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_cli_seeds_differ(tmp_path):
    outs = []
    for seed in ("1", "2"):
        out = tmp_path / seed
        assert run_cli(["--input", str(EXC), "--out", str(out), "--seed", seed, "--verify"]) == 0
        outs.append(json.loads((out / "series.json").read_text())["terms"])
    assert outs[0] != outs[1]


def test_cli_bad_rational(tmp_path, capsys):
    data = json.loads(WALK.read_text())
    data["points"][1]["coords"] = [["3/0", "0/1"]]
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(data))
    assert run_cli(["--input", str(f), "--out", str(tmp_path / "o")]) == 1
    assert "BadRational" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_cli_invalid_json(tmp_path):
    f = tmp_path / "x.json"
    f.write_text("{not json")
    assert run_cli(["--input", str(f), "--out", str(tmp_path / "o")]) == 1


def test_cli_stuck(tmp_path, capsys):
    data = {"variables": 1, "points": [
        {"coords": [["1/1", "0/1"]], "target": {"kind": "ExplicitValue", "value": [["100/1", "0/1"]]}}]}
    f = tmp_path / "stuck.json"
    f.write_text(json.dumps(data))
    assert run_cli(["--input", str(f), "--out", str(tmp_path / "o")]) == 2
    assert "SteeringStuck" in capsys.readouterr().err


def test_cli_certificate_failure(tmp_path, monkeypatch):
    import exset.cli as cli
    from exset.verify import Certificate

    def broken(obj):
        c = Certificate()
        c.add("injected", "always fails", "test", [{"issue": "forced"}])
        return c

    monkeypatch.setattr(cli, "check_all", broken)
    assert run_cli(["--input", str(WALK), "--out", str(tmp_path), "--verify"]) == 3


def test_cli_stages_mismatch(tmp_path):
    assert run_cli(["--input", str(WALK), "--out", str(tmp_path), "--stages", "3"]) == 1


def test_cli_degree_flag(tmp_path):
    assert run_cli(["--input", str(WALK), "--out", str(tmp_path), "--degree", "6", "--verify"]) == 0
    series = json.loads((tmp_path / "series.json").read_text())
    assert series["degree"] == 6 and len(series["terms"]) == 7


def test_cli_emit_psi_prescribe_needs_conjugates(tmp_path):
    data = {"variables": 1, "points": [
        {"coords": [["0/1", "0/1"]], "target": {"kind": "GaussianK"}},
        {"coords": [["1/1", "1/1"]], "target": {"kind": "GaussianK"}}]}
    f = tmp_path / "p.json"
    f.write_text(json.dumps(data))
    assert run_cli(["--input", str(f), "--out", str(tmp_path / "o"), "--emit-psi"]) == 1


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "exset", "--input", str(WALK), "--out", str(tmp_path)],
                       capture_output=True)
    assert r.returncode == 0
    assert (tmp_path / "series.json").exists()
