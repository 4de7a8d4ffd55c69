from fractions import Fraction
from itertools import permutations, product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from binfty.errors import InvalidPermutation, NotAMorphismDatum, NotHomogeneous
from binfty.graded import (TRUNCATION, GradedSpace, HomSpace, MultiMap, TruncatedTensorCoalgebra,
                           brace_compose, compositions, homogeneous_degree, koszul_sign,
                           lift_coalgebra_morphism, lift_coderivation, lift_derivation,
                           memoized_op, multi_insert_apply, note_truncation, suspend,
                           tensor_map_pair, vec_add)

W = GradedSpace([("a", 0), ("b", 1), ("c", -1)], "W")
deg = W.deg
letters = st.sampled_from(W.labels)
words = st.lists(letters, min_size=1, max_size=4).map(tuple)
coeffs = st.integers(-2, 2).filter(bool)


@st.composite
def multimaps(draw, degree=None, arities=(1, 2), max_entries=4):
    """A random homogeneous multilinear map on W (only degree-consistent entries)."""
    d = draw(st.integers(-1, 1)) if degree is None else degree
    table = {}
    for _ in range(draw(st.integers(0, max_entries))):
        p = draw(st.sampled_from(arities))
        ins = tuple(draw(letters) for _ in range(p))
        want = sum(deg(x) for x in ins) + d
        outs = W.in_degree(want)
        if outs:
            table.setdefault(ins, {})[draw(st.sampled_from(outs))] = draw(coeffs)
    return MultiMap(table, d)


def identity_on(word):
    return {word: Fraction(1)}


# ---------------------------------------------------------------- Koszul signs


def test_two_odd_elements_swap_negatively():
    assert koszul_sign((1, 1), (1, 0)) == -1


def test_even_elements_swap_freely():
    assert koszul_sign((2, 4), (1, 0)) == 1


def test_rotation_of_three():
    # (1,2,1) rotated to (x3, x1, x2): inverted pairs give 1*1 + 2*1
    assert koszul_sign((1, 2, 1), (2, 0, 1)) == -1


def test_bad_permutation_raises():
    with pytest.raises(InvalidPermutation):
        koszul_sign((1, 1), (0, 0))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-2, 3), min_size=1, max_size=5), st.data())
def test_koszul_sign_is_multiplicative(degrees, data):
    n = len(degrees)
    p = data.draw(st.permutations(range(n)))
    q = data.draw(st.permutations(range(n)))
    moved = [degrees[i] for i in p]
    composite = [p[i] for i in q]
    assert koszul_sign(degrees, p) * koszul_sign(moved, q) == koszul_sign(degrees, composite)


def test_koszul_sign_counts_odd_inversions():
    degrees = (1, 1, 1)
    for p in permutations(range(3)):
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
        assert koszul_sign(degrees, p) == (-1) ** inv


# ---------------------------------------------------------------- multi-insertion


def brute_insert(maps, word):
    """Enumerate every choice of start index and arity per map, left to right."""
    n = len(word)
    out = {}

    def rec(j, pos, chosen):
        if j == len(maps):
            result = {(): Fraction(1)}
            cur = 0
            s = 1
            for (start, p), f in zip(chosen, maps):
                seg = word[cur:start]
                result = {w + seg: c for w, c in result.items()}
                s *= (-1) ** ((f.degree * sum(deg(x) for x in word[:start])) % 2)
                val = f(word[start:start + p])
                result = {w + (y,): c * v for w, c in result.items() for y, v in val.items()}
                cur = start + p
            result = {w + word[cur:]: c for w, c in result.items()}
            for w, c in result.items():
                vec_add(out, {w: c * s})
            return
        for start in range(pos, n):
            for p in range(1, n - start + 1):
                if word[start:start + p] in maps[j].table:
                    rec(j + 1, start + p, chosen + [(start, p)])

    rec(0, 0, [])
    return out


@settings(max_examples=80, deadline=None)
@given(st.lists(multimaps(), min_size=1, max_size=2), words)
def test_multi_insert_matches_brute_force(maps, word):
    assert multi_insert_apply(maps, word, deg) == brute_insert(maps, word)


def test_even_unary_map_gives_plain_leibniz_sum():
    alpha = MultiMap({("a",): {"a": 2}, ("b",): {"b": 3}}, 0)
    assert lift_coderivation(alpha, ("a", "b"), deg) == {("a", "b"): 5}


def test_odd_unary_map_picks_up_sign_past_odd_letter():
    alpha = MultiMap({("a",): {"b": 1}, ("b",): {"c": 0}, ("c",): {"a": 1}}, 1)
    # α(b)=0 here; on (b, c) only the second slot contributes, past an odd letter
    assert lift_coderivation(alpha, ("b", "c"), deg) == {("b", "a"): -1}


def test_two_maps_on_weight_two_word_have_one_placement():
    f = MultiMap({("a",): {"b": 1}}, 1)
    g = MultiMap({("b",): {"a": 1}}, -1)
    # g passes the even letter a, so no sign
    assert multi_insert_apply([f, g], ("a", "b"), deg) == {("b", "a"): 1}


def test_identity_lift_counts_letters():
    ident = MultiMap({(x,): {x: 1} for x in W.labels}, 0)
    for n in range(1, 4):
        w = ("a",) * n
        assert lift_coderivation(ident, w, deg) == {w: n}


def test_binary_map_on_its_own_arity():
    mu = MultiMap({("a", "b"): {"b": 1}}, 0)
    assert lift_coderivation(mu, ("a", "b"), deg) == {("b",): 1}


@settings(max_examples=80, deadline=None)
@given(multimaps(arities=(1, 2, 3)), words)
def test_lift_is_a_coderivation(alpha, word):
    T = TruncatedTensorCoalgebra(W, 8)
    hat = lambda w: lift_coderivation(alpha, w, deg)
    lhs = T.coproduct_of(hat(word))
    split = T.coproduct(word)
    rhs = tensor_map_pair(hat, identity_on, split, T.deg, 0)
    vec_add(rhs, tensor_map_pair(identity_on, hat, split, T.deg, alpha.degree))
    assert lhs == rhs


# ---------------------------------------------------------------- coalgebra morphisms


@settings(max_examples=80, deadline=None)
@given(multimaps(degree=0, arities=(1, 2, 3)), words)
def test_tilde_lift_is_a_coalgebra_morphism(psi, word):
    T = TruncatedTensorCoalgebra(W, 8)
    lift = lambda w: lift_coalgebra_morphism(psi, w)
    lhs = T.coproduct_of(lift(word))
    rhs = tensor_map_pair(lift, lift, T.coproduct(word), T.deg, 0)
    assert lhs == rhs


def test_identity_lift_returns_the_word():
    ident = MultiMap({(x,): {x: 1} for x in W.labels}, 0)
    assert lift_coalgebra_morphism(ident, ("a", "b", "c")) == {("a", "b", "c"): 1}


def test_unary_component_acts_letterwise():
    phi = MultiMap({("a",): {"a": 2}, ("b",): {"b": -1}}, 0)
    assert lift_coalgebra_morphism(phi, ("a", "b")) == {("a", "b"): -2}


def test_weight_three_uses_three_decompositions():
    psi = MultiMap({("a",): {"a": 1}, ("a", "a"): {"a": 5}}, 0)
    out = lift_coalgebra_morphism(psi, ("a", "a", "a"))
    # 1+1+1 gives (a,a,a); 1+2 and 2+1 both give 5*(a,a); arity 3 is absent
    assert out == {("a", "a", "a"): 1, ("a", "a"): 10}


def test_odd_datum_is_refused():
    with pytest.raises(NotAMorphismDatum):
        lift_coalgebra_morphism(MultiMap({("a",): {"b": 1}}, 1), ("a",))


def test_weight_cutoff_is_recorded():
    psi = MultiMap({("a",): {"a": 1}}, 0)
    before = TRUNCATION.count
    assert lift_coalgebra_morphism(psi, ("a", "a", "a"), max_weight=2) == {}
    assert TRUNCATION.count > before


@pytest.mark.parametrize("n", range(1, 7))
def test_composition_counts(n):
    assert len(list(compositions(n))) == 2 ** (n - 1)
    for k in range(1, n + 1):
        assert len(list(compositions(n, k))) == comb(n - 1, k - 1)


# ---------------------------------------------------------------- derivations of T(W)


def leibniz_oracle(e, word):
    """e(w1 ... wn) by peeling the first letter: e(x·rest) = e(x)·rest + (−1)^{|e||x|} x·e(rest)."""
    if not word:
        return {}
    x, rest = word[0], word[1:]
    out = {}
    for w, c in e((x,)).items():
        vec_add(out, {tuple(w) + rest: c})
    for w, c in leibniz_oracle(e, rest).items():
        vec_add(out, {(x,) + w: c * (-1) ** ((e.degree * deg(x)) % 2)})
    return out


@st.composite
def word_valued(draw):
    d = draw(st.integers(-1, 1))
    table = {}
    for x in W.labels:
        if draw(st.booleans()):
            w = tuple(draw(st.lists(letters, min_size=1, max_size=2)))
            if sum(deg(y) for y in w) == deg(x) + d:
                table[(x,)] = {w: draw(coeffs)}
    return MultiMap(table, d)


@settings(max_examples=80, deadline=None)
@given(word_valued(), words)
def test_lift_derivation_matches_recursion(e, word):
    assert lift_derivation(e, {word: 1}, deg) == leibniz_oracle(e, word)


def test_derivation_on_generator_and_zero_map():
    e = MultiMap({("a",): {("b", "c"): 1}}, 0)
    assert lift_derivation(e, {("a",): 1}, deg) == {("b", "c"): 1}
    assert lift_derivation(MultiMap({}, 0), {("a", "b"): 1}, deg) == {}


def test_odd_derivation_on_product():
    e = MultiMap({("a",): {("b",): 1}, ("c",): {("a",): 1}}, 1)
    # e(b·c) = e(b)·c − b·e(c); e(b) = 0
    assert lift_derivation(e, {("b", "c"): 1}, deg) == {("b", "a"): -1}


# ---------------------------------------------------------------- braces


def test_unary_brace_is_composition():
    h = MultiMap({("a",): {"b": 1}}, 1)
    g = MultiMap({("b",): {"a": 1}}, -1)
    assert brace_compose(h, [g], deg).table == {("b",): {"b": 1}}


def test_binary_head_sums_two_placements():
    mu = MultiMap({("a", "a"): {"a": 1}}, 0)
    phi = MultiMap({("c",): {"a": 1}}, 1)
    out = brace_compose(mu, [phi], deg)
    # second placement passes the even input a: no sign
    assert out.table == {("c", "a"): {"a": 1}, ("a", "c"): {"a": 1}}
    assert out.degree == 1


def test_odd_arg_past_odd_input_flips_sign():
    mu = MultiMap({("b", "a"): {"b": 1}}, 0)
    phi = MultiMap({("c",): {"a": 1}}, 1)
    assert brace_compose(mu, [phi], deg).table == {("b", "c"): {"b": -1}}


def test_too_many_args_gives_zero():
    h = MultiMap({("a",): {"a": 1}}, 0)
    assert brace_compose(h, [h, h], deg).table == {}


# ---------------------------------------------------------------- spaces and bookkeeping


def test_suspension_lowers_degrees():
    sW = suspend(W)
    assert [sW.deg(x) for x in sW] == [-1, 0, -2]
    assert sW.labels == ["sa", "sb", "sc"]


def test_hom_space_dimensions():
    H = HomSpace(W, W, 2)
    assert len(H) == 3 * 3 + 9 * 3
    assert all(H.deg(l) == deg(l[1]) - sum(deg(x) for x in l[0]) for l in H)


def test_mixed_degrees_are_not_homogeneous():
    with pytest.raises(NotHomogeneous):
        homogeneous_degree({"a": 1, "b": 1}, deg)
    assert homogeneous_degree({}, deg) is None


def test_memoized_op_replays_truncation():
    calls = []

    @memoized_op
    def op(x):
        calls.append(x)
        note_truncation()
        return x

    before = TRUNCATION.count
    op(1)
    op(1)
    assert calls == [1]
    assert TRUNCATION.count == before + 2


def test_coproduct_splits():
    assert TruncatedTensorCoalgebra.coproduct(("a", "b", "c")) == {
        (("a",), ("b", "c")): 1, (("a", "b"), ("c",)): 1}
    assert len(list(product(W.labels, repeat=2))) == len(TruncatedTensorCoalgebra(W, 2).words(2))
