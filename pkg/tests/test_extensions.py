import pytest

from binfty.actions import ActionData, trivial_action
from binfty.cli.fileformat import catalog_algebra
from binfty.cli.suites import _flat, exp_action
from binfty.errors import ActionAxiomViolation, ActionsDoNotCommute
from binfty.extensions import (algebra_as_binfty, check_commutation, commutation_probes,
                               commutation_report, compare_tables, extend_by_algebra,
                               extend_by_binfty, extend_two_sided, two_step,
                               verify_strict_morphism)
from binfty.graded import GradedSpace
from binfty.hochschild import AlgebraPresentation, derivations
from binfty.kernel import generate_probes, verify_binfty


def one_letter(name="t"):
    X = AlgebraPresentation(GradedSpace([(name, 0)], name), {}, name=name)
    return algebra_as_binfty(X)


def acting_by(actor, target, D, side="left"):
    """β_2(t, y) = D(y) and nothing in higher arity."""
    def beta(bs, y):
        return dict(D.get(y, {})) if len(bs) == 1 else {}
    return ActionData(actor, target, beta, side, "algebra", "D", target_pool=target.labels)


SQUARE = {"x": {"x2": 1}}  # the derivation x ↦ x² of k[x]/x³


@pytest.fixture(scope="module")
def square_extension(trunc3):
    X = one_letter()
    return extend_by_algebra(X, trunc3, acting_by(X, trunc3, SQUARE))


def test_extension_passes_the_axioms(square_extension):
    T = square_extension.total
    rep = verify_binfty(T, generate_probes(T, 4, samples=25, seed=1))
    assert rep.ok, rep.render()


def test_correction_term_multiplies_after_acting(square_extension):
    T = square_extension.total
    # b_{2,1}(m1, a, m2) = m1 · (a m2)
    assert T.bop(2, 1, (("A", "1"), ("B", "t"), ("A", "x"))) == {("A", "x2"): 1}
    assert T.bop(2, 1, (("A", "x"), ("B", "t"), ("A", "1"))) == {}
    assert T.bop(1, 1, (("B", "t"), ("A", "x"))) == {("A", "x2"): 1}


def test_inclusion_and_projection(square_extension):
    res = square_extension
    pr = generate_probes(res.total, 4, samples=20, seed=2)
    assert verify_strict_morphism(res.project, res.total, res.quotient, pr, "project").ok
    spr = generate_probes(res.sub, 4, samples=20, seed=2)
    assert verify_strict_morphism(res.include, res.sub, res.total, spr, "include").ok


def test_dimension_counts_are_short_exact(square_extension):
    counts = square_extension.dimension_counts()
    assert counts == {0: (4, 3, 1)}
    assert square_extension.check_exactness().ok


def test_trivial_action_gives_direct_product(trunc3):
    X = one_letter()
    res = extend_by_algebra(X, trunc3, trivial_action(X, trunc3, kind="algebra"))
    T = res.total
    assert T.bop(1, 1, (("B", "t"), ("A", "x"))) == {}
    assert T.bop(2, 1, (("A", "1"), ("B", "t"), ("A", "x"))) == {}
    assert T.bop(1, 1, (("A", "x"), ("A", "x"))) == {("A", "x2"): 1}


def test_non_derivation_is_rejected(trunc3):
    X = one_letter()
    bad = acting_by(X, trunc3, {"1": {"1": 1}})
    with pytest.raises(ActionAxiomViolation):
        extend_by_algebra(X, trunc3, bad)


def test_wrong_kind_is_rejected(trunc3):
    X = one_letter()
    with pytest.raises(ActionAxiomViolation):
        extend_by_algebra(X, trunc3, trivial_action(X, trunc3, kind="module"))


# ---------------------------------------------------------------- two-sided


@pytest.fixture(scope="module")
def euler_pair(trunc3):
    D = derivations(trunc3)[0]
    return exp_action(trunc3, D, "left", "E"), exp_action(trunc3, D, "right", "G")


def test_same_derivation_on_both_sides_commutes(trunc3, euler_pair):
    left, right = euler_pair
    assert check_commutation(left, right, commutation_probes(left, right, trunc3.labels))


def test_non_commuting_derivations_are_caught(trunc3):
    euler = {"x": {"x": 1}, "x2": {"x2": 2}}
    left = exp_action(trunc3, SQUARE, "left", "E")
    right = exp_action(trunc3, euler, "right", "G")
    probes = commutation_probes(left, right, trunc3.labels, samples=40, seed=0)
    assert not check_commutation(left, right, probes)
    witness = commutation_report(left, right, probes).checks[0].witnesses[0]
    assert witness["difference"] != "0"
    with pytest.raises(ActionsDoNotCommute):
        extend_two_sided(left, right, trunc3)


def test_actions_on_the_wrong_side_do_not_commute(trunc3, euler_pair):
    left, _ = euler_pair
    assert not check_commutation(left, left, commutation_probes(left, left, trunc3.labels))
    with pytest.raises(ActionAxiomViolation):
        extend_two_sided(left, left, trunc3)


def test_two_sided_equals_two_step(trunc3, euler_pair):
    left, right = euler_pair
    T = extend_two_sided(left, right, trunc3)
    pr = generate_probes(T.total, 4, samples=25, seed=3)
    assert verify_binfty(T.total, pr).ok
    S = two_step(left, right, trunc3)
    rep = compare_tables(T.total, S.total, _flat(pr))
    assert rep.ok and rep.checks[0].passed > 100


def test_left_pattern_is_the_left_action(trunc3, euler_pair):
    left, right = euler_pair
    T = extend_two_sided(left, right, trunc3).total
    for m in (1, 2, 3):
        word = (("B", "E"),) * m + (("A", "x2"),)
        assert T.bop(m, 1, word) == {("A", y): c for y, c in left.beta(("E",) * m, "x2").items()}


def test_two_sided_exactness(trunc3, euler_pair):
    T = extend_two_sided(*euler_pair, trunc3)
    assert T.dimension_counts() == {0: (5, 4, 1)}
    assert T.check_exactness().ok


def test_trivial_bb_action_gives_direct_product(dual):
    Bp = algebra_as_binfty(dual)
    B = one_letter()
    act = ActionData(B, Bp, None, "left", "bb", "trivial", target_pool=Bp.pool)
    res = extend_by_binfty(B, Bp, act, check=False)
    T = res.total
    assert T.bop(1, 1, (("B", "t"), "e")) == {}
    assert T.bop(1, 1, ("e", "e")) == {}
    assert T.bop(1, 1, ("1", "e")) == {"e": 1}
    assert verify_binfty(T, generate_probes(T, 4, samples=15, seed=0)).ok


def test_catalog_upper_triangular_derivation_extends():
    p = catalog_algebra("upper2")
    D = derivations(p)[0]
    left = exp_action(p, D, "left")
    res = extend_by_algebra(left.actor, p, left)
    assert verify_binfty(res.total, generate_probes(res.total, 4, samples=15, seed=0)).ok
