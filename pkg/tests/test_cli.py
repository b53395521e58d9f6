import json

import pytest

from ietlab.cli import main


@pytest.fixture
def spec_file(tmp_path):
    def make(obj, name="spec.json"):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return make


def test_analyze_lamplighter(spec_file, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["analyze", spec_file({"q": 4, "Qgens": ["(1,3)"], "s": 1, "alphas": "sqrt-primes"}), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["lamplighter"] == {"L": [2], "k": 1}
    assert "lamplighter" in capsys.readouterr().out


def test_analyze_is_byte_deterministic(spec_file, tmp_path):
    spec = spec_file({"q": 4, "Qgens": ["(1,2)", "(3,4)"]})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["analyze", spec, "-o", str(a)])
    main(["analyze", spec, "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_analyze_empty_q(spec_file, tmp_path):
    out = tmp_path / "r.json"
    assert main(["analyze", spec_file({"q": 3, "Qgens": [], "s": 2}), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["is_abelian"] and rep["abelianization"]["free_rank"] == 2


def test_analyze_nvs(spec_file, capsys):
    assert main(["analyze", spec_file({"q": 5, "Qgens": ["(1,2)"]})]) == 0
    assert "virtually solvable: no" in capsys.readouterr().out


@pytest.mark.parametrize("obj", [
    {"q": 4},
    {"q": 0, "Qgens": []},
    {"q": 4, "Qgens": ["(1,3"]},
    {"q": 4, "Qgens": ["(1,3)"], "extra": 1},
    {"q": 4, "Qgens": ["(1,9)"]},
])
def test_schema_errors(spec_file, obj, capsys):
    assert main(["analyze", spec_file(obj)]) == 2
    assert "error" in capsys.readouterr().err


def test_cap_exceeded(spec_file, capsys, monkeypatch):
    monkeypatch.delenv("IETLAB_CLOSURE_CAP", raising=False)
    spec = spec_file({"q": 7, "Qgens": ["(1,2)", "(1,2,3,4,5,6,7)"]})
    assert main(["--closure-cap", "100", "analyze", spec]) == 3
    assert json.loads(capsys.readouterr().out)["partial"]["W_order"] == 5040


def test_abelianization_command(spec_file, capsys):
    assert main(["abelianization", spec_file({"q": 4, "Qgens": ["(1,2)", "(3,4)"]})]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["F"] == [2] and out["witnesses"][0]["word"]


def test_probes_flag(spec_file, capsys):
    spec = spec_file({"q": 4, "Qgens": ["(1,2)", "(3,4)"]})
    assert main(["--probes", "1", "abelianization", spec]) == 0
    assert json.loads(capsys.readouterr().out)["F"] == [2]
    assert main(["--probes", "x", "abelianization", spec]) == 2


def test_compare(spec_file, capsys):
    a = spec_file({"q": 5, "Qgens": ["(1,2)", "(1,2,3,4,5)"]}, "a.json")
    b = spec_file({"q": 5, "Qgens": ["(1,2,3)", "(1,2,4)", "(1,2,5)"]}, "b.json")
    assert main(["compare", a, b]) == 0
    out = json.loads(capsys.readouterr().out)
    assert "F" in {e["type"] for e in out["evidence"]}
    assert main(["compare", a, a]) == 0
    assert json.loads(capsys.readouterr().out) == {"evidence": [], "verdict": "no evidence"}


def test_compare_rank(spec_file, capsys):
    a = spec_file({"q": 3, "Qgens": ["(1,3)"], "s": 1}, "a.json")
    b = spec_file({"q": 3, "Qgens": ["(1,3)"], "s": 2}, "b.json")
    main(["compare", a, b])
    assert "rank" in {e["type"] for e in json.loads(capsys.readouterr().out)["evidence"]}


def test_construct(capsys):
    assert main(["construct", "tower", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["order"] == 128 and out["derived_length"] == 3
    assert main(["construct", "catalog", "nvs-A5"]) == 0
    assert json.loads(capsys.readouterr().out)["q"] == 5
    assert main(["construct", "catalog", "nope"]) == 2
    assert main(["construct", "tower", "9"]) == 2


def test_verify(capsys):
    assert main(["verify", "conjugation", "-n", "20"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["verify", "WW0", "-n", "5"]) == 0
    assert main(["verify", "unknown"]) == 2
