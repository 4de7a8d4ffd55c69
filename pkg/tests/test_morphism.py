from fractions import Fraction

import pytest

from binfty.cli.suites import _flat
from binfty.errors import NotAInftyStructure, NotAMorphismSolution, NotMaurerCartan
from binfty.extensions import check_commutation, compare_tables
from binfty.kernel import generate_probes, verify_binfty
from binfty.morphism import (AInftyTriple, HomComplexes, LElement, ainfty_to_mc,
                             algebra_morphism_triple, assemble_LAB, build_psi_actions,
                             cobar_gamma, deform_to_Bf, delta_squared_report, direct_structure,
                             filtration, gamma_pool, lie_bracket, mc_report, mc_to_ainfty,
                             morphism_conditions)

P = F = 3


@pytest.fixture(scope="module")
def unit_hc(unit_dual):
    return HomComplexes(unit_dual.dom, unit_dual.cod, 3)


@pytest.fixture(scope="module")
def unit_L(unit_hc):
    return assemble_LAB(unit_hc, P, F, seed=0, pool_size=25)


@pytest.fixture(scope="module")
def id_hc(id_dual):
    return HomComplexes(id_dual.dom, id_dual.cod, 3)


def degree_zero_psi(hc):
    return [x for x in hc.psi.labels if hc.psi.deg(x) == 0]


# ---------------------------------------------------------------- Γ


def test_single_letter_generator_has_no_splits(unit_hc):
    G, delta = cobar_gamma(unit_hc, P, F)
    for x in unit_hc.psi.labels:
        assert delta(((x,),)) == {}


def test_two_letter_generator_splits_with_sign(unit_hc):
    G, delta = cobar_gamma(unit_hc, P, F)
    p1, p2 = degree_zero_psi(unit_hc)[:1] * 2
    assert delta(((p1, p2),)) == {((p1,), (p2,)): -1}


def test_delta_squares_to_zero(unit_hc):
    G, _ = cobar_gamma(unit_hc, P, F)
    rep = delta_squared_report(G, gamma_pool(unit_hc, P, F, seed=1, size=40))
    assert rep.ok and rep.checks[0].passed >= 20


# ---------------------------------------------------------------- actions on T^c(Ψ)


def test_right_action_on_a_letter(unit_hc):
    _, right = build_psi_actions(unit_hc, F)
    psi = (("s1",), "se")
    alpha = (("s1",), "s1")
    assert right.beta((alpha,), (psi,)) == {((("s1",), "se"),): 1}


def test_left_action_needs_enough_letters(unit_hc):
    left, _ = build_psi_actions(unit_hc, F)
    beta3 = [h for h in unit_hc.h.pool if len(h[0]) == 3][0]
    for w in unit_hc.psi.labels[:4]:
        assert left.beta((beta3,), (w,)) == {}


def test_left_and_right_compositions_commute(unit_hc, id_hc):
    from binfty.extensions import commutation_probes
    for hc in (unit_hc, id_hc):
        left, right = build_psi_actions(hc, F)
        words = [w for w in left.target.labels if len(w) <= 2][:40]
        assert check_commutation(left, right, commutation_probes(left, right, words, 40, 0))


# ---------------------------------------------------------------- the assembled structure


def test_product_of_gamma_letters_is_concatenation(unit_L, unit_hc):
    p, q = unit_hc.psi.labels[:2]
    assert unit_L.bop(1, 1, (("A", ((p,),)), ("A", ((q,),)))) == {("A", ((p,), (q,))): 1}


def test_left_pattern_composes(unit_L, unit_hc):
    h = (("s1",), "se")
    psi = (("s1", "s1"), "s1")
    out = unit_L.bop(1, 1, (("B", h), ("A", ((psi,),))))
    assert out == {("A", (((("s1", "s1"), "se"),),)): 1}


def test_assembled_structure_matches_direct_formulas(unit_L, unit_hc):
    D = direct_structure(unit_hc, P, unit_L.pool)
    pr = generate_probes(unit_L, 3, samples=20, seed=2)
    rep = compare_tables(unit_L, D, _flat(pr))
    assert rep.ok, rep.render()
    assert rep.checks[0].passed > 50


def test_assembled_structure_passes_axioms(unit_L):
    pr = generate_probes(unit_L, 3, samples=15, seed=1)
    rep = verify_binfty(unit_L, pr)
    assert rep.ok, rep.render()


def test_bracket_of_g_and_h_vanishes(unit_L, unit_hc):
    for a in unit_hc.g.pool[:6]:
        for b in unit_hc.h.pool[:6]:
            assert lie_bracket(unit_L, {("B'", a): 1}, {("B", b): 1}) == {}


def test_bracket_of_even_element_with_itself(unit_L, unit_hc):
    evens = [h for h in unit_hc.h.pool if unit_L.deg(("B", h)) == 0][:5]
    x = {("B", h): i + 1 for i, h in enumerate(evens)}
    assert lie_bracket(unit_L, x, x) == {}


# ---------------------------------------------------------------- morphisms as MC elements


def test_unit_inclusion_is_maurer_cartan(unit_L, unit_hc, unit_dual):
    t = algebra_morphism_triple(unit_hc, unit_dual.table)
    assert morphism_conditions(t).ok
    l = ainfty_to_mc(t, F)
    assert {unit_L.deg(x) for x in l.tagged()} == {1}
    assert mc_report(unit_L, l).ok
    assert mc_to_ainfty(unit_hc, l) == t


def test_identity_on_dual_numbers_is_maurer_cartan(id_hc, id_dual):
    L = assemble_LAB(id_hc, P, F, seed=0, pool_size=20)
    t = algebra_morphism_triple(id_hc, id_dual.table)
    l = ainfty_to_mc(t, F)
    rep = mc_report(L, l)
    assert rep.ok and rep.checks[0].modulus == "filtration > 3"
    assert mc_to_ainfty(id_hc, l) == t


def test_planted_weight_two_component_is_rejected(unit_hc, unit_dual):
    l = ainfty_to_mc(algebra_morphism_triple(unit_hc, unit_dual.table), F)
    g = dict(l.gamma)
    w = min(g, key=lambda x: (filtration(x), repr(x)))
    g[(w[0], w[0])] = Fraction(1)
    planted = LElement(l.alpha, l.beta, gamma=g, F=F, N=3)
    with pytest.raises(NotAMorphismSolution):
        mc_to_ainfty(unit_hc, planted)


def test_truncated_series_is_rejected(unit_hc, unit_dual):
    l = ainfty_to_mc(algebra_morphism_triple(unit_hc, unit_dual.table), F)
    g = {x: c for x, c in l.gamma.items() if filtration(x) == 1}
    with pytest.raises(NotAMorphismSolution):
        mc_to_ainfty(unit_hc, LElement(l.alpha, l.beta, gamma=g, F=F, N=3))


def test_zero_element_gives_zero_triple(unit_hc):
    assert mc_to_ainfty(unit_hc, LElement(F=F, N=3)) == AInftyTriple(unit_hc, {}, {}, {})


def test_scaled_identity_is_not_a_morphism(id_hc):
    t = algebra_morphism_triple(id_hc, {"1": {"1": 2}, "e": {"e": 2}})
    assert not morphism_conditions(t).ok
    with pytest.raises(NotAInftyStructure):
        ainfty_to_mc(t, F)


def test_only_square_zero_parts(unit_hc, unit_L):
    t = algebra_morphism_triple(unit_hc, {})
    t.psi = {}
    l = ainfty_to_mc(t, F)
    assert l.gamma == {}
    assert mc_report(unit_L, l).ok


def test_deformed_structure_squares_to_zero(unit_hc, unit_dual):
    L = assemble_LAB(unit_hc, P, F, seed=0, pool_size=20)
    l = ainfty_to_mc(algebra_morphism_triple(unit_hc, unit_dual.table), F)
    Bf, lie = deform_to_Bf(L, l, extra=1)
    pr = generate_probes(Bf, 3, samples=12, seed=2)
    rep = verify_binfty(Bf, pr)
    assert rep.ok, rep.render()
    assert rep.checks[2].passed > 0
    g = [x for x in Bf.pool if x[0] == "B'"][0]
    assert lie.differential({g: 1}) == Bf.dop(1, (g,))


def test_non_mc_element_cannot_deform(unit_hc):
    L = assemble_LAB(unit_hc, P, F, seed=0, pool_size=10)
    psi = degree_zero_psi(unit_hc)[0]
    # s⁻¹ψ alone: its square is the nonzero concatenation (ψ)(ψ)
    with pytest.raises(NotMaurerCartan):
        deform_to_Bf(L, LElement(gamma={((psi,),): 1}, F=F, N=3))
