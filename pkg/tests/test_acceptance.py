"""Acceptance run: the full seeded proptest, executed twice in fresh interpreters.

Each criterion prints one ``Criterion N: PASS`` or ``Criterion N: FAIL`` line.
Running this file directly (``python3 tests/test_acceptance.py``) prints the ten
lines without pytest.
"""

import json
import subprocess
import sys

import pytest

COMMAND = [sys.executable, "-m", "binfty", "proptest", "--suite", "all", "--seed", "1",
           "--samples", "25", "--format", "machine"]


def run_once():
    proc = subprocess.run(COMMAND, capture_output=True, check=False)
    return proc.returncode, proc.stdout


def checks(body, suite, tag=None, name_part=None):
    out = [c for c in body["checks"] if c["name"].startswith(suite + ": ")]
    if tag:
        out = [c for c in out if c["equation"] == tag]
    if name_part:
        out = [c for c in out if name_part in c["name"]]
    return out


def all_pass(found):
    return bool(found) and all(c["status"] == "pass" and c["passed"] > 0 for c in found)


def criterion_1(body):
    found = checks(body, "binfty")
    tags = {c["equation"] for c in found}
    return all_pass(found) and tags >= {"Associativity", "Leibniz", "AInfty"}


def criterion_2(body):
    return (all_pass(checks(body, "deformation"))
            and all_pass(checks(body, "deformation", "BDeformation", "non-MC element is rejected"))
            and all_pass(checks(body, "deformation", "Associativity")))


def criterion_3(body):
    return all(all_pass(checks(body, "extensions", tag)) for tag in
               ("Associativity", "Leibniz", "AInfty", "TableEquality", "ShortExact",
                "MorphismProduct", "MorphismDifferential"))


def criterion_4(body):
    return (all_pass(checks(body, "cobar"))
            and all_pass(checks(body, "cobar", "CobarCompatibility", "Gamma"))
            and all_pass(checks(body, "cobar", "LeibnitzAction")))


def criterion_5(body):
    data = body["data"]
    return (all_pass(checks(body, "representation"))
            and len(checks(body, "representation", "Representation")) >= 2
            and data.get("representation: actions", 0) >= 25
            and data.get("representation: arity") == 3)


def criterion_6(body):
    return (all_pass(checks(body, "morphism"))
            and all_pass(checks(body, "morphism", "MaurerCartan"))
            and all_pass(checks(body, "morphism", "MorPoint", "planted"))
            and all_pass(checks(body, "morphism", "MorPoint", "triple")))


def criterion_7(body):
    ok = True
    for f in ("k -> k[e]", "id k[e]"):
        for tag in ("Tau1", "Tau2", "SubalgebraH"):
            ok = ok and all_pass(checks(body, "tau", tag, f"tau: {f}:"))
    return ok and all_pass(checks(body, "tau"))


def criterion_8(body):
    data = body["data"]
    route = data.get("cohomology: dims_H_route")
    diagram = data.get("cohomology: dims_diagram")
    hh = data.get("cohomology: HH k[e]", {})
    return (all_pass(checks(body, "cohomology"))
            and route is not None and route == diagram
            and set(route) >= {"0", "1", "2"}
            and hh.get("0") == 2 and hh.get("1") == 1)


def criterion_9(body):
    return all(all_pass(checks(body, "gerstenhaber", tag)) for tag in
               ("CupCommutative", "BracketAntisymmetric", "BracketJacobi",
                "GerstenhaberLeibniz"))


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


@pytest.fixture(scope="module")
def runs():
    return run_once(), run_once()


@pytest.fixture(scope="module")
def body(runs):
    (code, out), _ = runs
    assert code in (0, 1), out[:500]
    return json.loads(out)


def announce(capsys, n, ok):
    with capsys.disabled():
        print(f"\nCriterion {n}: {'PASS' if ok else 'FAIL'}")


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, body, capsys):
    ok = CRITERIA[n](body)
    announce(capsys, n, ok)
    assert ok


def test_criterion_10_byte_identical(runs, capsys):
    (c1, out1), (c2, out2) = runs
    ok = c1 == c2 == 0 and out1 == out2 and len(out1) > 0
    announce(capsys, 10, ok)
    assert ok


def test_overall_status(body):
    assert body["status"] == "pass"
    assert body["seed"] == 1


if __name__ == "__main__":
    first, second = run_once(), run_once()
    parsed = json.loads(first[1])
    for n, fn in sorted(CRITERIA.items()):
        print(f"Criterion {n}: {'PASS' if fn(parsed) else 'FAIL'}")
    same = first[0] == second[0] == 0 and first[1] == second[1]
    print(f"Criterion 10: {'PASS' if same else 'FAIL'}")
