import json
from fractions import Fraction

import pytest

from binfty.cli import SEED_ENV, UsageError, emit_report, parse_degrees, run_command
from binfty.cli.fileformat import (ParseError, catalog_file, load_file, parse_algebra,
                                   parse_files)
from binfty.errors import InvalidAlgebra
from binfty.report import Check, Report


def algebra_obj(**over):
    obj = {"field": "Q", "name": "k[e]", "basis": [["1", 0], ["e", 0]],
           "mult": [["1", "1", [["1", "1"]]], ["1", "e", [["e", "1"]]],
                    ["e", "1", [["e", "1"]]]],
           "unit": "1"}
    obj.update(over)
    return obj


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return path


def test_catalog_file_loads():
    (p,) = parse_files([catalog_file("dual")])
    assert len(p.labels) == 2
    assert p.unit == "1"


def test_coefficients_are_normalized_rationals():
    obj = algebra_obj(mult=[["1", "1", [["1", "1"]]], ["1", "e", [["e", "1"]]],
                            ["e", "1", [["e", "1"]]], ["e", "e", [["e", "0/3"]]]],
                      diff=[])
    p = parse_algebra(obj, validate=False)
    assert ("e", "e") not in p.mult_table
    q = parse_algebra(algebra_obj(basis=[["1", 0]], mult=[["1", "1", [["1", "2/4"]]]],
                                  unit=None), validate=False)
    assert q.mult_table[("1", "1")] == {"1": Fraction(1, 2)}


def test_unknown_basis_name_is_positioned():
    obj = algebra_obj(mult=[["1", "z", [["1", "1"]]]])
    with pytest.raises(ParseError) as info:
        parse_algebra(obj, "bad")
    assert "mult[0][1]" in str(info.value.position)


def test_json_syntax_error_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "basis": [\n    ["1", 0],,\n  ]\n}', encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_file(path)
    assert str(info.value.position).startswith(f"{path}:3:")


def test_float_coefficient_rejected():
    obj = algebra_obj(mult=[["1", "1", [["1", 0.5]]]])
    with pytest.raises(ParseError):
        parse_algebra(obj, validate=False)


# (x*x)*x = y*x = x but x*(x*x) = x*y = 0
NON_ASSOCIATIVE = {"name": "bad", "basis": [["1", 0], ["x", 0], ["y", 0]],
                   "mult": [["1", "1", [["1", "1"]]], ["1", "x", [["x", "1"]]],
                            ["x", "1", [["x", "1"]]], ["1", "y", [["y", "1"]]],
                            ["y", "1", [["y", "1"]]], ["x", "x", [["y", "1"]]],
                            ["y", "x", [["x", "1"]]]],
                   "unit": "1"}


def test_non_associative_file_is_rejected_with_witness(tmp_path):
    path = write(tmp_path, "bad.json", NON_ASSOCIATIVE)
    with pytest.raises(InvalidAlgebra):
        load_file(path)
    report, code, text = run_command(["validate", str(path), "--format", "machine"])
    assert code == 1
    failing = [c for c in json.loads(text)["checks"] if c["status"] == "fail"]
    assert failing and failing[0]["witnesses"][0]["probe"]


def test_unknown_command_is_usage_error():
    _, code, _ = run_command(["frobnicate"])
    assert code == 2


def test_bad_degree_window_is_usage_error():
    _, code, text = run_command(["hochschild", "dual", "--degrees", "5..0"])
    assert code == 2 and "degree" in text


def test_degree_beyond_cutoff_is_refused():
    _, code, text = run_command(["cohomology-compare", "unit_dual", "--degrees", "0..5",
                                 "--arity", "3", "--format", "machine"])
    assert code == 2
    assert json.loads(text)["error"]["type"] == "TruncationUnsound"


def test_tau_check_passes():
    report, code, _ = run_command(["tau-check", "unit_dual", "--arity", "3",
                                   "--samples", "50", "--seed", "7"])
    assert code == 0 and report.ok


def test_tau_check_needs_injective_map():
    report, code, _ = run_command(["tau-check", "trunc3_to_dual", "--arity", "3"])
    assert code == 2
    assert report["error"]["type"] == "InjectivityRequired"


def test_cohomology_compare_tables_agree():
    report, code, _ = run_command(["cohomology-compare", "unit_dual", "--degrees", "0..2",
                                   "--arity", "4"])
    assert code == 0
    data = report.data
    route = next(v for k, v in data.items() if k.endswith("dims_H_route"))
    diagram = next(v for k, v in data.items() if k.endswith("dims_diagram"))
    assert route == diagram


def test_machine_output_is_reproducible():
    argv = ["hochschild", "dual", "--arity", "3", "--samples", "10", "--seed", "4",
            "--format", "machine"]
    assert run_command(argv)[2] == run_command(argv)[2]


def test_hochschild_command_reports_cohomology():
    report, code, _ = run_command(["hochschild", "dual", "--arity", "4", "--degrees", "0..2"])
    assert code == 0
    assert report.data["HH"] == {"0": 2, "1": 1, "2": 1}


def test_diagram_command():
    report, code, _ = run_command(["diagram", "unit_dual"])
    assert code == 0 and report.data["dimension"] == 5


def test_empty_report_renders_header_only():
    text = emit_report(Report("nothing", {"N": 2}, 3))
    assert text.splitlines() == ["suite nothing  cutoffs: N=2  seed: 3", "overall: PASS"]
    body = json.loads(emit_report(Report("nothing"), "machine"))
    assert body["checks"] == [] and body["status"] == "pass"


def test_witness_block_shows_both_sides():
    r = Report("one")
    c = r.add(Check("demo", "Associativity"))
    c.record(False, ("a", "b"), {"x": 1}, {"x": 2})
    text = emit_report(r)
    assert "[FAIL] demo <Associativity>" in text
    assert "lhs: " in text and "rhs: " in text and "overall: FAIL" in text


def test_parse_degrees():
    assert parse_degrees("0..2") == [0, 1, 2]
    assert parse_degrees("3") == [3]
    with pytest.raises(UsageError):
        parse_degrees("a..b")
    with pytest.raises(UsageError):
        parse_degrees("2..1")


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "11")
    report, code, _ = run_command(["tau-check", "id_k", "--arity", "3", "--samples", "5"])
    assert code == 0
    assert report.seed == 11
    assert report.data["seed_source"] == f"{SEED_ENV}=11"


def test_out_file(tmp_path):
    from binfty.cli import main
    out = tmp_path / "r.json"
    assert main(["diagram", "unit_dual", "--format", "machine", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "pass"
