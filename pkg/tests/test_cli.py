import json
import re
from pathlib import Path

import pytest

from filtcone import catalog
from filtcone.cli import main
from filtcone.invariants import cohomology_table
from filtcone.modelfile import ModelFileError, dump_model, load_model, parse_model

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fixture_round_trip():
    assert load_model(FIXTURES / "kodaira_thurston.json") == catalog.kodaira_thurston()


def test_wrong_degree_differential_names_generator():
    with pytest.raises(ModelFileError, match=r"d\(e1\)"):
        load_model(FIXTURES / "bad_degree.json")


def test_product_file_with_catalog_factors():
    m = load_model(FIXTURES / "kt_x_s2.json")
    assert cohomology_table(m, 1).as_dict() == dict(
        cohomology_table(catalog.get("kt_x_s2"), 1).as_dict(), model="kt_x_s2")


def test_syntax_error_reports_position():
    with pytest.raises(ModelFileError, match=r"line 1, column \d+"):
        parse_model('{"schema": 1,')


@pytest.mark.parametrize("doc, message", [
    ({"schema": 1, "name": "x", "kind": "ce", "generators": ["e1"], "extra": 1}, "unknown field"),
    ({"schema": 2, "name": "x", "kind": "ce", "generators": ["e1"]}, "unsupported schema"),
    ({"schema": 1, "name": "x", "kind": "ce", "generators": ["1e"]}, "invalid label"),
    ({"schema": 1, "name": "x", "kind": "ce", "generators": ["e1", "e2"],
      "omega": [["e1^e2", 0.5]]}, "coefficient"),
    ({"schema": 1, "name": "x", "kind": "product", "factors": ["@nowhere"]}, "unknown catalog"),
    ({"schema": 1, "name": "x", "kind": "blob"}, "kind must be"),
])
def test_schema_violations(doc, message):
    with pytest.raises(ModelFileError, match=message):
        parse_model(json.dumps(doc))


def test_rational_coefficients_parse():
    m = load_model(FIXTURES / "genus2.json")
    assert str(m.omega) == "3/2*vol"


@pytest.mark.parametrize("name", catalog.names())
def test_serialisation_round_trip(name):
    m = catalog.get(name)
    again = parse_model(dump_model(m))
    for p in (0, 1):
        assert cohomology_table(again, p).as_dict() == cohomology_table(m, p).as_dict()


def test_verify_s2_cubed(capsys):
    code, out, _ = run(capsys, "verify", "@s2xs2xs2")
    assert code == 0
    assert "ell = 0" in out
    assert "even sum = 6" in out


def test_filtered_kt_x_s2(capsys):
    code, out, _ = run(capsys, "filtered", "-p", "1", "@kt_x_s2")
    assert code == 0
    assert "even part = (1, 5, 5, 6, 3)" in out


def test_semichar_surface(capsys):
    code, out, _ = run(capsys, "semichar", "@surface_g2")
    assert code == 0
    assert "kChar = 1" in out and "ell = 0" in out


def test_validation_failure_exit_code(capsys):
    code, _, err = run(capsys, "betti", str(FIXTURES / "bad_degree.json"))
    assert code == 2
    assert "e1" in err


def test_validate_command(capsys):
    code, out, _ = run(capsys, "validate", "@torus3")
    assert code == 0 and "validation: pass" in out


def test_falsification_exit_code(capsys, monkeypatch):
    import filtcone.cli as cli
    from filtcone.invariants import verify_vanishing

    def broken(model):
        rep = verify_vanishing(model)
        rep.ell_direct = rep.ell_formula = 1
        rep.findings.append("injected")
        return rep

    monkeypatch.setattr(cli, "verify_vanishing", broken)
    code, out, _ = run(capsys, "verify", "@s2xs2xs2")
    assert code == 3
    assert "FAIL" in out


def numbers(text):
    return sorted(int(x) for x in re.findall(r"-?\d+", text))


@pytest.mark.parametrize("argv", [
    ["filtered", "-p", "1", "@kt_x_s2", "--all-degrees"],
    ["betti", "@s2xs2xs2"],
    ["semichar", "@surface_g3"],
    ["ops", "@s2xs2xs2"],
])
def test_text_and_json_agree(capsys, tmp_path, argv):
    out_path = tmp_path / "report.json"
    code, text, _ = run(capsys, *argv, "--json", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["provenance"]["tool_version"]
    assert len(doc["provenance"]["model_hash"]) == 64

    def ints(obj):
        if isinstance(obj, bool) or obj is None:
            return []
        if isinstance(obj, int):
            return [obj]
        if isinstance(obj, dict):
            return [x for v in obj.values() for x in ints(v)]
        if isinstance(obj, list):
            return [x for v in obj for x in ints(v)]
        return []

    text_numbers = set(numbers(text))
    for value in ints(doc["tables"]):
        assert value in text_numbers


def test_deterministic_output(capsys):
    first = run(capsys, "verify", "--with-ops", "@kt_x_s2", "--json", "-")
    second = run(capsys, "verify", "--with-ops", "@kt_x_s2", "--json", "-")
    assert first == second
    doc = json.loads(first[1])
    assert doc["tables"]["ops"]["hodge_even_kernel_dim"] == 20


def test_verify_dir(capsys):
    code, out, _ = run(capsys, "verify", "--dir", str(FIXTURES / "batch"), "--json", "-")
    assert code == 0
    doc = json.loads(out)
    assert [r["provenance"]["model"] for r in doc["reports"]] == ["kt_file_x_s2", "s2cubed", "t4"]
    assert [r["tables"]["verify"]["theorem_applicable"] for r in doc["reports"]] == [True, True, False]


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and "kt_x_s2" in out.split()
    code, out, _ = run(capsys, "catalog", "show", "sphere2")
    assert json.loads(out)["kind"] == "ring"
    code, _, _ = run(capsys, "catalog", "show", "nothing")
    assert code == 2
