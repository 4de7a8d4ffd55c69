"""Actions of B∞-algebras, the operator B∞-algebras and the action/morphism dictionary.

An action family is a callable ``beta(bs, x)`` returning a vector over the
target: for a left action ``bs`` is the tuple (b1..b_{m-1}) and the value is
β_m(b1..b_{m-1}, x); for a right action the value is β′_m(x, b1..b_{m-1}).
β_1 = Id is built in.
"""

import random
from fractions import Fraction
from itertools import product

from .errors import ActionAxiomViolation, NotRepresentable, TruncationUnsound
from .graded import (GradedSpace, HomSpace, TruncatedTensorCoalgebra, brace_elementary,
                     memoized_op, note_truncation, sign, tensor_vectors, vec_add)
from .kernel import (BInftyStructure, coderivation_lift, composite_brace, deform_mc,
                     evaluate_safely, mc_check, run_probe)
from .report import Check, Report

ONE = Fraction(1)


# ---------------------------------------------------------------- targets


class DGSpace:
    """A graded space with a degree-1 differential given on basis labels."""

    def __init__(self, space, diff=None):
        self.space = space
        self._diff = diff or {}

    def deg(self, x):
        return self.space.deg(x)

    def diff(self, x):
        return self._diff.get(x, {})

    @property
    def labels(self):
        return self.space.labels


class TensorCoalgebraTarget:
    """T^c(W) truncated at weight F, optionally with a codifferential.

    codiff(word) returns the image of a word (or None for zero codifferential).
    """

    kind = "coalgebra"

    def __init__(self, cogenerators, max_weight, codiff=None, name=""):
        self.cogenerators = cogenerators
        self.max_weight = max_weight
        self.coalgebra = TruncatedTensorCoalgebra(cogenerators, max_weight)
        self._codiff = codiff
        self.name = name

    def deg(self, word):
        return sum(self.cogenerators.deg(x) for x in word)

    def diff(self, word):
        return self._codiff(word) if self._codiff else {}

    def coproduct(self, word):
        return TruncatedTensorCoalgebra.coproduct(word)

    def words(self, weight):
        return self.coalgebra.words(weight)

    @property
    def labels(self):
        return self.coalgebra.all_words()


class FreeAlgebraTarget:
    """T(W) truncated at weight F; the product is concatenation."""

    kind = "algebra"

    def __init__(self, generators, max_weight, diff_on_generators=None, name=""):
        self.generators = generators
        self.max_weight = max_weight
        self._gdiff = diff_on_generators or {}
        self.name = name

    def deg(self, word):
        return sum(self.generators.deg(x) for x in word)

    def mult(self, w1, w2):
        w = w1 + w2
        if len(w) > self.max_weight:
            note_truncation()
            return {}
        return {w: ONE}

    def diff(self, word):
        out = {}
        run = 0
        for i, x in enumerate(word):
            val = self._gdiff.get(x)
            if val:
                s = sign(run)
                for ww, c in val.items():
                    key = word[:i] + tuple(ww) + word[i + 1:]
                    if len(key) > self.max_weight:
                        note_truncation()
                        continue
                    vec_add(out, {key: s * c})
            run += self.generators.deg(x)
        return out

    @property
    def labels(self):
        return [tuple(w) for n in range(1, self.max_weight + 1)
                for w in product(self.generators.labels, repeat=n)]


# ---------------------------------------------------------------- action data


class ActionData:
    """β-family of s⁻¹B acting on a target, with side and kind.

    kind ∈ {module, algebra, coalgebra, bb}.  target must provide deg and diff;
    algebra targets provide mult(x, y); coalgebra targets coproduct(x); for
    kind=bb the target is a BInftyStructure.
    """

    def __init__(self, actor, target, beta, side="left", kind="module", name="",
                 target_pool=None, max_actors=None):
        self.actor = actor
        self.target = target
        self._beta_raw = beta
        self._beta = memoized_op(beta) if beta else None
        self.side = side
        self.kind = kind
        self.name = name
        self.target_pool = list(target_pool) if target_pool is not None else None
        self.max_actors = max_actors

    def beta(self, bs, x):
        """β_{|bs|+1}(bs, x) (left) or β′_{|bs|+1}(x, bs) (right)."""
        bs = tuple(bs)
        if not bs:
            return {x: ONE}
        if self._beta is None:
            return {}
        if self.max_actors is not None and len(bs) > self.max_actors:
            raise TruncationUnsound("action arity beyond the stored range")
        return self._beta(bs, x)

    def beta_on(self, bs, element):
        out = {}
        for x, c in element.items():
            vec_add(out, self.beta(bs, x), c)
        return out

    def tdeg(self, x):
        return self.target.deg(x)

    def adeg(self, b):
        return self.actor.deg(b)

    def __repr__(self):
        return f"ActionData({self.name or '?'}, {self.side}, {self.kind})"


def trivial_action(actor, target, side="left", kind="module", name="trivial"):
    return ActionData(actor, target, None, side, kind, name)


# ---------------------------------------------------------------- operator B∞-algebras


class CoHomSpace(GradedSpace):
    """Elementary co-operators (input, outputs) of Hom(W, ⊕_{1≤m≤N} W^m)."""

    def __init__(self, space, max_arity, name=""):
        self.source = space
        self.max_arity = max_arity
        basis = []
        for x in space.labels:
            for m in range(1, max_arity + 1):
                for outs in product(space.labels, repeat=m):
                    basis.append(((x, outs), sum(space.deg(y) for y in outs) - space.deg(x)))
        super().__init__(basis, name)

    def arity(self, label):
        return len(label[1])


def endo_brace_op(carrier, letter_deg, max_arity):
    def b(m, n, labels):
        if m != 1:
            return {}
        out = {}
        for lab, c in brace_elementary(labels[0], labels[1:], carrier.deg, letter_deg).items():
            if len(lab[0]) > max_arity:
                note_truncation()
                continue
            out[lab] = c
        return out
    return b


def coendo_compose(es, e, letter_deg, max_arity):
    """(e1 ⊗ .. ⊗ en) ∘ e for elementary co-operators; e_i hits distinct outputs of e."""
    x, outs = e
    k, n = len(outs), len(es)
    if n > k:
        return {}
    out = {}
    edeg = [sum(letter_deg(y) for y in ei[1]) - letter_deg(ei[0]) for ei in es]
    prefix = [0]
    for y in outs:
        prefix.append(prefix[-1] + letter_deg(y))

    def rec(j, pos, acc, ex):
        if j == n:
            new = acc + outs[pos:]
            if len(new) > max_arity:
                note_truncation()
                return
            key = (x, new)
            out[key] = out.get(key, 0) + sign(ex)
            if not out[key]:
                del out[key]
            return
        for t in range(pos, k):
            if outs[t] != es[j][0]:
                continue
            rec(j + 1, t + 1, acc + outs[pos:t] + es[j][1], ex + edeg[j] * prefix[t])

    rec(0, 0, (), 0)
    return {key: Fraction(v) for key, v in out.items()}


def coendo_op(carrier, letter_deg, max_arity):
    def b(m, n, labels):
        if n != 1:
            return {}
        return coendo_compose(labels[:-1], labels[-1], letter_deg, max_arity)
    return b


def build_operator_binfty(W, side="endo", e0=None, max_arity=4, min_arity=1, name=None):
    """The endomorphism (side='endo') or co-endomorphism ('coendo') B∞-algebra of W.

    e0, when given, is a vector over the carrier used as the deforming element.
    """
    if side == "endo":
        carrier = HomSpace(W, W, max_arity, min_arity, name=f"E({W.name})")
        B = BInftyStructure(carrier, endo_brace_op(carrier, W.deg, max_arity), None,
                            name or carrier.name, weight=carrier.arity)
    elif side == "coendo":
        carrier = CoHomSpace(W, max_arity, name=f"E'({W.name})")
        B = BInftyStructure(carrier, coendo_op(carrier, W.deg, max_arity), None,
                            name or carrier.name, weight=carrier.arity)
    else:
        raise ValueError(f"side must be 'endo' or 'coendo', not {side!r}")
    B.side = side
    B.W = W
    B.max_arity = max_arity
    if e0:
        B2 = deform_mc(B, e0, name=name or f"{carrier.name}^e0")
        B2.side, B2.W, B2.max_arity, B2.e0 = side, W, max_arity, e0
        return B2
    B.e0 = None
    return B


# ---------------------------------------------------------------- verification


def _sum_deg(deg, labels):
    return sum(deg(x) for x in labels)


def _apply_target_diff(a, element):
    out = {}
    for x, c in element.items():
        vec_add(out, a.target.diff(x), c)
    return out


def ass_action_sides(a, u, v, w):
    B = a.actor
    m, n = len(u), len(v)
    lhs, rhs = {}, {}
    if a.side == "left":
        for q in range(1, m + n + 1):
            for word, c in composite_brace(B, u, v, q).items():
                vec_add(lhs, a.beta(word, w), c)
        rhs = a.beta_on(u, a.beta(v, w))
    else:
        lhs = a.beta_on(v, a.beta(u, w))
        for q in range(1, m + n + 1):
            for word, c in composite_brace(B, u, v, q).items():
                vec_add(rhs, a.beta(word, w), c)
    return lhs, rhs


def leibniz_action_sides(a, v, w):
    B = a.actor
    lhs = _apply_target_diff(a, a.beta(v, w))
    rhs = {}
    k = len(v)
    if a.side == "left":
        for p in range(1, k + 1):
            for word, c in coderivation_lift(B, p, v).items():
                vec_add(rhs, a.beta(word, w), c)
        vec_add(rhs, a.beta_on(v, a.target.diff(w)), sign(_sum_deg(B.deg, v)))
    else:
        vec_add(rhs, a.beta_on(v, a.target.diff(w)))
        s = sign(a.tdeg(w))
        for p in range(1, k + 1):
            for word, c in coderivation_lift(B, p, v).items():
                vec_add(rhs, a.beta(word, w), s * c)
    return lhs, rhs


def _mult_vectors(target, u, v):
    out = {}
    for x, c in u.items():
        for y, d in v.items():
            vec_add(out, target.mult(x, y), c * d)
    return out


def algebra_action_sides(a, v, x1, x2, koszul=True):
    T = a.target
    lhs = a.beta_on(v, T.mult(x1, x2))
    rhs = {}
    k = len(v)
    degs = [a.adeg(b) for b in v]
    for i in range(k + 1):
        if a.side == "left":
            e = a.tdeg(x1) * sum(degs[i:])
        else:
            e = a.tdeg(x2) * sum(degs[:i])
        s = sign(e) if koszul else 1
        vec_add(rhs, _mult_vectors(T, a.beta(v[:i], x1), a.beta(v[i:], x2)), s)
    return lhs, rhs


def coalgebra_action_sides(a, v, c):
    T = a.target
    lhs = {}
    for y, coeff in a.beta(v, c).items():
        vec_add(lhs, T.coproduct(y), coeff)
    rhs = {}
    k = len(v)
    degs = [a.adeg(b) for b in v]
    for (c1, c2), coeff in T.coproduct(c).items():
        for i in range(k + 1):
            if a.side == "left":
                e = a.tdeg(c1) * sum(degs[i:])
            else:
                e = a.tdeg(c2) * sum(degs[:i])
            left_val = a.beta(v[:i], c1)
            if not left_val:
                continue
            right_val = a.beta(v[i:], c2)
            for y1, k1 in left_val.items():
                for y2, k2 in right_val.items():
                    vec_add(rhs, {(y1, y2): coeff * k1 * k2 * sign(e)})
    return lhs, rhs


def bb_extend(a, bs, word):
    """β_{m+1}(b1..bm, (e1..en)) on T^c(B′), extended by the coalgebra rule."""
    out = {}
    n = len(word)
    edeg = [a.tdeg(e) for e in word]
    bdeg = [a.adeg(b) for b in bs]

    def rec(j, start, parts, ex):
        if j == n - 1:
            group = bs[start:]
            val = a.beta(group, word[j])
            if not val:
                return
            e = ex + sum(bdeg[start:]) * sum(edeg[:j])
            vec_add(out, tensor_vectors(parts + [val]), sign(e))
            return
        for end in range(start, len(bs) + 1):
            val = a.beta(bs[start:end], word[j])
            if not val:
                continue
            rec(j + 1, end, parts + [val], ex + sum(bdeg[start:end]) * sum(edeg[:j]))

    rec(0, 0, [], 0)
    return out


def bb_extend_on(a, bs, element):
    out = {}
    for w, c in element.items():
        vec_add(out, bb_extend(a, bs, w), c)
    return out


def _codiff_words(Bp, word):
    out = {}
    for p in range(1, len(word) + 1):
        vec_add(out, coderivation_lift(Bp, p, word))
    return out


def bb_product_sides(a, bs, u, v):
    """β(bs, Σ_n b′_n(u; v)) against Σ_n Σ_i ± b′_n(β(b1..bi, u); β(b_{i+1}.., v))."""
    Bp = a.target
    lhs = {}
    for q in range(1, len(u) + len(v) + 1):
        vec_add(lhs, bb_extend_on(a, bs, composite_brace(Bp, u, v, q)))
    rhs = {}
    du = _sum_deg(Bp.deg, u)
    degs = [a.adeg(b) for b in bs]
    for i in range(len(bs) + 1):
        s = sign(du * sum(degs[i:]))
        left = bb_extend(a, bs[:i], u)
        right = bb_extend(a, bs[i:], v)
        for w1, c1 in left.items():
            for w2, c2 in right.items():
                for q in range(1, len(w1) + len(w2) + 1):
                    vec_add(rhs, composite_brace(Bp, w1, w2, q), s * c1 * c2)
    return lhs, rhs


def bb_ass_sides(a, u, v, word):
    B = a.actor
    lhs = {}
    for q in range(1, len(u) + len(v) + 1):
        for bw, c in composite_brace(B, u, v, q).items():
            vec_add(lhs, bb_extend(a, bw, word), c)
    rhs = bb_extend_on(a, u, bb_extend(a, v, word))
    return lhs, rhs


def bb_leibniz_sides(a, v, word):
    B, Bp = a.actor, a.target
    lhs = {}
    for w, c in bb_extend(a, v, word).items():
        vec_add(lhs, _codiff_words(Bp, w), c)
    rhs = {}
    for p in range(1, len(v) + 1):
        for bw, c in coderivation_lift(B, p, v).items():
            vec_add(rhs, bb_extend(a, bw, word), c)
    vec_add(rhs, bb_extend_on(a, v, _codiff_words(Bp, word)), sign(_sum_deg(B.deg, v)))
    return lhs, rhs


def generate_action_probes(a, samples=40, seed=0, max_actor=3, target_pool=None,
                           exhaustive_limit=300, word_len=2):
    """Seeded probe tuples for verify_action, keyed by equation."""
    rng = random.Random(seed)
    apool = list(a.actor.pool)
    tpool = list(target_pool if target_pool is not None else
                 (a.target_pool if a.target_pool is not None else getattr(a.target, "labels", [])))

    def tuples(pool, k):
        if len(pool) ** k <= exhaustive_limit:
            return [tuple(t) for t in product(pool, repeat=k)]
        seen = []
        got = set()
        for _ in range(samples * 5):
            t = tuple(rng.choice(pool) for _ in range(k))
            if t not in got:
                got.add(t)
                seen.append(t)
            if len(seen) >= samples:
                break
        return seen

    def sample(pool, n):
        if len(pool) <= n:
            return list(pool)
        return rng.sample(pool, n)

    probes = {"ass": [], "leibniz": [], "algebra": [], "coalgebra": [], "bb": []}
    for m in range(1, max_actor):
        for n in range(1, max_actor - m + 1):
            for t in sample(tuples(apool, m + n), samples):
                w = rng.choice(tpool) if a.kind != "bb" else tuple(rng.choice(tpool) for _ in range(rng.randint(1, word_len)))
                probes["ass"].append((t[:m], t[m:], w))
    for k in range(0, max_actor + 1):
        for t in sample(tuples(apool, k), samples) if k else [()]:
            w = rng.choice(tpool) if a.kind != "bb" else tuple(rng.choice(tpool) for _ in range(rng.randint(1, word_len)))
            probes["leibniz"].append((t, w))
    if a.kind in ("algebra", "coalgebra"):
        for k in range(0, max_actor):
            for t in sample(tuples(apool, k), samples) if k else [()] * min(samples, 8):
                x1, x2 = rng.choice(tpool), rng.choice(tpool)
                probes["algebra"].append((t, x1, x2))
                probes["coalgebra"].append((t, x1))
    if a.kind == "bb":
        for k in range(1, max_actor):
            for t in sample(tuples(apool, k), samples):
                u = tuple(rng.choice(tpool) for _ in range(rng.randint(1, word_len)))
                v = tuple(rng.choice(tpool) for _ in range(rng.randint(1, word_len)))
                probes["bb"].append((t, u, v))
    return probes


def verify_action(a, probes, report=None, label=""):
    """AssAction and LeibnitzAction, plus the kind-specific identity, on every probe."""
    name = label or a.name
    report = report or Report(f"verify_action {name}")
    sfx = f" [{name}]"
    if a.kind == "bb":
        c_ass = report.add(Check("action associativity on words" + sfx, "AssAction"))
        c_leib = report.add(Check("action Leibniz on words" + sfx, "LeibnitzAction"))
        c_bb = report.add(Check("action on products" + sfx, "BBAction"))
        for u, v, word in probes.get("ass", []):
            run_probe(c_ass, bb_ass_sides, (a, u, v, word), (u, v, word))
        for v, word in probes.get("leibniz", []):
            run_probe(c_leib, bb_leibniz_sides, (a, v, word), (v, word))
        for bs, u, v in probes.get("bb", []):
            run_probe(c_bb, bb_product_sides, (a, bs, u, v), (bs, u, v))
        return report
    c_ass = report.add(Check("action associativity" + sfx, "AssAction"))
    c_leib = report.add(Check("action Leibniz" + sfx, "LeibnitzAction"))
    for u, v, w in probes.get("ass", []):
        run_probe(c_ass, ass_action_sides, (a, u, v, w), (u, v, w))
    for v, w in probes.get("leibniz", []):
        run_probe(c_leib, leibniz_action_sides, (a, v, w), (v, w))
    if a.kind == "algebra":
        c = report.add(Check("action on products" + sfx, "AlgebraAction"))
        for v, x1, x2 in probes.get("algebra", []):
            run_probe(c, algebra_action_sides, (a, v, x1, x2), (v, x1, x2))
    if a.kind == "coalgebra":
        c = report.add(Check("action on coproducts" + sfx, "CoalgebraAction"))
        for v, x in probes.get("coalgebra", []):
            run_probe(c, coalgebra_action_sides, (a, v, x), (v, x))
    return report


def require_action(a, probes=None, error=ActionAxiomViolation):
    probes = probes if probes is not None else generate_action_probes(a, samples=15)
    rep = verify_action(a, probes)
    if not rep.ok:
        bad = rep.failures()[0]
        raise error(f"{a.name}: {bad.name} fails: {bad.witnesses[:1]}")
    return rep


# ---------------------------------------------------------------- canonical actions


def insert_elementary(es, word, letter_deg, cochain_deg):
    """(e1 ⊗ .. ⊗ ek) applied to word: disjoint consecutive blocks, identities elsewhere."""
    out = {}
    n = len(word)
    prefix = [0]
    for x in word:
        prefix.append(prefix[-1] + letter_deg(x))
    k = len(es)

    def rec(j, pos, acc, ex):
        if j == k:
            key = acc + word[pos:]
            out[key] = out.get(key, 0) + sign(ex)
            if not out[key]:
                del out[key]
            return
        ins, o = es[j]
        p = len(ins)
        for start in range(pos, n - p + 1):
            if word[start:start + p] == ins:
                rec(j + 1, start + p, acc + word[pos:start] + (o,),
                    ex + cochain_deg(es[j]) * prefix[start])

    rec(0, 0, (), 0)
    return {w: Fraction(c) for w, c in out.items()}


def coendo_apply(es, word, letter_deg, cochain_deg, max_weight=None):
    """Product-rule action of co-operators on a word of T(W): each e_i hits one letter."""
    out = {}
    n, k = len(word), len(es)
    prefix = [0]
    for x in word:
        prefix.append(prefix[-1] + letter_deg(x))

    def rec(j, pos, acc, ex):
        if j == k:
            key = acc + word[pos:]
            if max_weight is not None and len(key) > max_weight:
                note_truncation()
                return
            out[key] = out.get(key, 0) + sign(ex)
            if not out[key]:
                del out[key]
            return
        x, outs = es[j]
        for t in range(pos, n):
            if word[t] == x:
                rec(j + 1, t + 1, acc + word[pos:t] + outs, ex + cochain_deg(es[j]) * prefix[t])

    rec(0, 0, (), 0)
    return {w: Fraction(c) for w, c in out.items()}


def canonical_action_eval(side, es, x, letter_deg, cochain_deg, max_weight=None):
    """β_{k+1}(e1..ek, x) of the canonical action (es are elementary operators).

    endo: x is a word of T^c(W); coendo: x is a word of T(W).
    """
    es = tuple(es)
    if side == "endo":
        return insert_elementary(es, tuple(x), letter_deg, cochain_deg)
    return coendo_apply(es, tuple(x), letter_deg, cochain_deg, max_weight)


def _vector_operator_on(E, e0, word, side, max_weight):
    out = {}
    for lab, c in e0.items():
        vec_add(out, canonical_action_eval(side, (lab,), word, E.W.deg, E.deg, max_weight), c)
    return out


def canonical_action(E, max_weight):
    """The canonical action of an operator B∞-algebra on T^c(W) (endo) or T(W) (coendo)."""
    W = E.W
    e0 = getattr(E, "e0", None)
    if E.side == "endo":
        codiff = (lambda w: _vector_operator_on(E, e0, w, "endo", max_weight)) if e0 else None
        target = TensorCoalgebraTarget(W, max_weight, codiff, name=f"Tc({W.name})")

        def beta(bs, word):
            return insert_elementary(bs, word, W.deg, E.deg)
        return ActionData(E, target, beta, "left", "coalgebra", f"canonical on {target.name}")
    gdiff = {}
    if e0:
        for (x, outs), c in e0.items():
            gdiff.setdefault(x, {})
            vec_add(gdiff[x], {outs: c})
    target = FreeAlgebraTarget(W, max_weight, gdiff, name=f"T({W.name})")

    def beta(bs, word):
        return coendo_apply(bs, word, W.deg, E.deg, max_weight)
    return ActionData(E, target, beta, "left", "algebra", f"canonical on {target.name}")


# ---------------------------------------------------------------- morphisms and the dictionary


class LazyOperator:
    """An element of E(W) (or E′(W)) given by its values: word ↦ vector over W
    (endo) or generator ↦ vector over words (coendo)."""

    def __init__(self, fn, degree, max_arity):
        self._fn = memoized_op(fn)
        self.degree = degree
        self.arities = list(range(1, max_arity + 1))

    def __call__(self, x):
        return self._fn(tuple(x) if isinstance(x, tuple) else x)


class BInftyMorphism:
    """Components μ_m(b1..bm), each an operator on W given lazily.

    component(bs) returns a LazyOperator (or None for zero).
    """

    def __init__(self, source, codomain, component, name=""):
        self.source = source
        self.codomain = codomain
        self._component = memoized_op(component)
        self.name = name

    def component(self, bs):
        return self._component(tuple(bs))

    def value(self, bs, x):
        op = self.component(bs)
        return op(x) if op is not None else {}


def action_to_morphism(a, N=None):
    """Action to morphism: μ_m(b) = corestriction of β_{m+1}(b, −)."""
    T = a.target
    if isinstance(T, TensorCoalgebraTarget) and a.side == "left":
        N = N or T.max_weight
        deg = T.cogenerators.deg

        def component(bs):
            def fn(word):
                return {w[0]: c for w, c in a.beta(bs, word).items() if len(w) == 1}
            return LazyOperator(fn, _sum_deg(a.adeg, bs), N)
        mu = BInftyMorphism(a.actor, "endo", component, f"mu[{a.name}]")
        mu.W, mu.N, mu.side, mu.letter_deg = T.cogenerators, N, "endo", deg
        return mu
    if isinstance(T, FreeAlgebraTarget) and a.side == "left":
        N = N or T.max_weight
        deg = T.generators.deg

        def component(bs):
            def fn(x):
                return a.beta(bs, (x,))
            return LazyOperator(fn, _sum_deg(a.adeg, bs), N)
        mu = BInftyMorphism(a.actor, "coendo", component, f"mu[{a.name}]")
        mu.W, mu.N, mu.side, mu.letter_deg = T.generators, N, "coendo", deg
        return mu
    raise NotRepresentable(f"target of {a.name} is not an almost (co)free tensor (co)algebra")


def _ordered_compositions(seq):
    """All splits of seq into nonempty consecutive blocks."""
    n = len(seq)
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _ordered_compositions(seq[first:]):
            yield (seq[:first],) + rest


def induced_beta(mu, bs, x, max_weight=None):
    """β_{m+1}(b1..bm, x) = Σ over block decompositions of the canonical action of μ(blocks)."""
    out = {}
    deg = mu.letter_deg
    for blocks in _ordered_compositions(tuple(bs)):
        ops = [mu.component(blk) for blk in blocks]
        if any(op is None for op in ops):
            continue
        if mu.side == "endo":
            from .graded import multi_insert_apply
            vec_add(out, multi_insert_apply(ops, tuple(x), deg))
        else:
            vec_add(out, _coendo_apply_ops(ops, tuple(x), deg, max_weight))
    return out


def _coendo_apply_ops(ops, word, deg, max_weight):
    out = {}
    n, k = len(word), len(ops)
    prefix = [0]
    for y in word:
        prefix.append(prefix[-1] + deg(y))

    def rec(j, pos, parts, coeff):
        if j == k:
            parts = parts + [{(y,): ONE} for y in word[pos:]]
            for key, c in tensor_vectors(parts).items():
                flat = tuple(z for piece in key for z in piece)
                if max_weight is not None and len(flat) > max_weight:
                    note_truncation()
                    continue
                vec_add(out, {flat: c * coeff})
            return
        for t in range(pos, n):
            val = ops[j](word[t])
            if val:
                rec(j + 1, t + 1, parts + [{(y,): ONE} for y in word[pos:t]] + [val],
                    coeff * sign(ops[j].degree * prefix[t]))

    rec(0, 0, [], ONE)
    return out


def morphism_to_action(mu, target):
    """The action induced by a morphism into an operator B∞-algebra."""
    max_weight = getattr(target, "max_weight", None)

    def beta(bs, x):
        return induced_beta(mu, bs, x, max_weight)
    kind = "coalgebra" if mu.side == "endo" else "algebra"
    return ActionData(mu.source, target, beta, "left", kind, f"induced[{mu.name}]")


def check_representable(a, probes):
    """β must equal the action induced by its own corestrictions."""
    mu = action_to_morphism(a)
    induced = morphism_to_action(mu, a.target)
    c = Check(f"action determined by corestrictions [{a.name}]", "Representation")
    for bs, x in probes:
        def sides():
            return a.beta(bs, x), induced.beta(bs, x)
        run_probe(c, sides, (), (bs, x))
    return c


def action_round_trip(a, probes):
    """morphism_to_action(action_to_morphism(a)) reproduces a on the probes."""
    back = morphism_to_action(action_to_morphism(a), a.target)
    c = Check(f"action -> morphism -> action [{a.name}]", "Representation")
    for bs, x in probes:
        run_probe(c, lambda: (a.beta(bs, x), back.beta(bs, x)), (), (bs, x))
    return c


def morphism_round_trip(mu, target, probes):
    """action_to_morphism(morphism_to_action(mu)) has the same components."""
    back = action_to_morphism(morphism_to_action(mu, target), getattr(mu, "N", None))
    c = Check(f"morphism -> action -> morphism [{mu.name}]", "Representation")
    for bs, x in probes:
        run_probe(c, lambda: (mu.value(bs, x), back.value(bs, x)), (), (bs, x))
    return c


# -------- B∞-morphism identities into an operator algebra, evaluated on words


def _eval_endo_brace(head, args, word, deg):
    """(head{args})(word) = head applied to multi_insert(args, word)."""
    from .graded import multi_insert_apply
    out = {}
    for w, c in multi_insert_apply(list(args), word, deg).items():
        vec_add(out, head(w), c)
    return out


class _VecOperator:
    """A finite vector of elementary operators viewed as a LazyOperator."""

    def __init__(self, vec, E, side):
        self.vec = vec
        self.E = E
        self.side = side
        degs = {E.deg(l) for l in vec}
        self.degree = degs.pop() if degs else 0
        self.arities = sorted({len(l[0]) for l in vec}) if side == "endo" else [1]

    def __call__(self, x):
        out = {}
        if self.side == "endo":
            for (ins, o), c in self.vec.items():
                if ins == tuple(x):
                    vec_add(out, {o: c})
        else:
            for (i, outs), c in self.vec.items():
                if i == x:
                    vec_add(out, {outs: c})
        return out


def morphism_identity_sides(mu, E, u, v, x, kind):
    """Hopf product / differential compatibility of μ̃ evaluated on a word x.

    kind='product': π1 μ̃(u * v) = π1(μ̃u * μ̃v); kind='differential':
    π1 μ̃(D u) = π1 D′(μ̃ u).
    """
    B = mu.source
    deg = mu.letter_deg
    lhs, rhs = {}, {}
    max_weight = getattr(E, "max_arity", None)
    if kind == "product":
        for q in range(1, len(u) + len(v) + 1):
            for word, c in composite_brace(B, u, v, q).items():
                vec_add(lhs, mu.value(word, x), c)
        if mu.side == "endo":
            head = mu.component(u)
            if head is not None:
                for blocks in _ordered_compositions(tuple(v)):
                    ops = [mu.component(b) for b in blocks]
                    if all(op is not None for op in ops):
                        vec_add(rhs, _eval_endo_brace(head, ops, tuple(x), deg))
        else:
            tail = mu.component(v)
            if tail is not None:
                for blocks in _ordered_compositions(tuple(u)):
                    ops = [mu.component(b) for b in blocks]
                    if all(op is not None for op in ops):
                        for w, c in tail(x).items():
                            vec_add(rhs, _coendo_apply_ops(ops, w, deg, max_weight), c)
        return lhs, rhs
    # differential
    for p in range(1, len(u) + 1):
        for word, c in coderivation_lift(B, p, u).items():
            vec_add(lhs, mu.value(word, x), c)
    e0 = getattr(E, "e0", None)
    if not e0:
        return lhs, rhs
    e0op = _VecOperator(e0, E, mu.side)
    for blocks in _ordered_compositions(tuple(u)):
        ops = [mu.component(b) for b in blocks]
        if any(op is None for op in ops):
            continue
        if mu.side == "endo":
            vec_add(rhs, _eval_endo_brace(e0op, ops, tuple(x), deg))
            if len(ops) == 1:
                # − (−1)^{|e|} e{e0}
                s = -sign(ops[0].degree)
                vec_add(rhs, _eval_endo_brace(ops[0], [e0op], tuple(x), deg), s)
        else:
            s_all = sign(sum(op.degree for op in ops) + 1)
            for w, c in e0op(x).items():
                vec_add(rhs, _coendo_apply_ops(ops, w, deg, max_weight), c * s_all)
            if len(ops) == 1:
                for w, c in ops[0](x).items():
                    vec_add(rhs, _coendo_apply_ops([e0op], w, deg, max_weight), c)
    return lhs, rhs


def verify_morphism_into_operator(mu, E, probes, report=None):
    """Product and differential compatibility of μ̃ on probe (u, v, word) tuples."""
    report = report or Report(f"verify morphism {mu.name}")
    cp = report.add(Check(f"morphism respects products [{mu.name}]", "MorphismProduct"))
    cd = report.add(Check(f"morphism respects differentials [{mu.name}]", "MorphismDifferential"))
    for u, v, x in probes:
        if mu.side == "coendo" and isinstance(x, tuple):
            if len(x) != 1:
                continue
            x = x[0]
        run_probe(cp, morphism_identity_sides, (mu, E, u, v, x, "product"), (u, v, x))
        run_probe(cd, morphism_identity_sides, (mu, E, u + v, (), x, "differential"), (u + v, x))
    return report


# ---------------------------------------------------------------- bar / cobar transport


class CobarAlgebra:
    """Ω(C): words of factors s⁻¹c (c a label of C), product = concatenation.

    A label is a tuple of C-labels; degree Σ (deg c + 1).  Weight (number of
    factors) ≤ max_weight; when `filtration` is given, Σ filtration ≤ max_filtration.
    """

    kind = "algebra"

    def __init__(self, C, max_weight, filtration=None, max_filtration=None, name=""):
        self.C = C
        self.max_weight = max_weight
        self.filtration = filtration
        self.max_filtration = max_filtration
        self.name = name or f"Omega({getattr(C, 'name', '')})"
        self._diff = memoized_op(self._diff_raw)

    def deg(self, x):
        return sum(self.C.deg(c) + 1 for c in x)

    def total_filtration(self, x):
        return sum(self.filtration(c) for c in x) if self.filtration else 0

    def admissible(self, x):
        if len(x) > self.max_weight:
            return False
        if self.filtration and self.max_filtration is not None:
            return self.total_filtration(x) <= self.max_filtration
        return True

    def keep(self, vec):
        out = {}
        for x, c in vec.items():
            if self.admissible(x):
                out[x] = c
            else:
                note_truncation()
        return out

    def mult(self, x, y):
        return self.keep({x + y: ONE})

    def delta_generator(self, c):
        """δ(s⁻¹c) = Σ (−1)^{c1+1} s⁻¹c1 ⊗ s⁻¹c2."""
        out = {}
        for (c1, c2), k in self.C.coproduct(c).items():
            vec_add(out, {(c1, c2): k * sign(self.C.deg(c1) + 1)})
        return out

    def diff_generator(self, c):
        out = {(y,): k for y, k in self.C.diff(c).items()}
        vec_add(out, self.delta_generator(c))
        return out

    def _diff_raw(self, x):
        out = {}
        run = 0
        for i, c in enumerate(x):
            for y, k in self.diff_generator(c).items():
                vec_add(out, {x[:i] + y + x[i + 1:]: k * sign(run)})
            run += self.C.deg(c) + 1
        return self.keep(out)

    def diff(self, x):
        return self._diff(x)

    def delta(self, x):
        """Only the deconcatenation part of the differential."""
        out = {}
        run = 0
        for i, c in enumerate(x):
            for y, k in self.delta_generator(c).items():
                vec_add(out, {x[:i] + y + x[i + 1:]: k * sign(run)})
            run += self.C.deg(c) + 1
        return self.keep(out)


def distribute_over_factors(a_beta, bs, factors, bdeg, fdeg, side):
    """Product-rule extension: split bs into consecutive groups, one per factor.

    a_beta(group, factor) returns a vector over factor labels.  Left actions:
    the group acting on factor j passes factors 1..j-1; right actions: factors j+1..k.
    """
    out = {}
    k = len(factors)
    fd = [fdeg(f) for f in factors]
    bd = [bdeg(b) for b in bs]

    def rec(j, start, parts, ex):
        if j == k - 1:
            grp = bs[start:]
            val = a_beta(grp, factors[j])
            if not val:
                return
            passed = sum(fd[:j]) if side == "left" else sum(fd[j + 1:])
            vec_add(out, tensor_vectors(parts + [val]), sign(ex + sum(bd[start:]) * passed))
            return
        for end in range(start, len(bs) + 1):
            grp = bs[start:end]
            val = a_beta(grp, factors[j])
            if not val:
                continue
            passed = sum(fd[:j]) if side == "left" else sum(fd[j + 1:])
            rec(j + 1, end, parts + [val], ex + sum(bd[start:end]) * passed)

    rec(0, 0, [], 0)
    return out


def cobar_transport(a, max_weight=3, filtration=None, max_filtration=None, check=False,
                    probes=None):
    """Coalgebra action on C ↦ algebra action on Ω(C), via Ω(β)(b, s⁻¹c) = s⁻¹β(b, c)."""
    if a.kind != "coalgebra":
        raise ActionAxiomViolation("cobar transport needs a coalgebra action")
    if check:
        require_action(a, probes)
    Om = CobarAlgebra(a.target, max_weight, filtration, max_filtration)

    def on_generator(grp, c):
        if not grp:
            return {c: ONE}
        return a.beta(grp, c)

    def beta(bs, x):
        val = distribute_over_factors(on_generator, bs, x, a.adeg,
                                      lambda c: a.target.deg(c) + 1, a.side)
        return Om.keep(val)

    out = ActionData(a.actor, Om, beta, a.side, "algebra", f"Omega[{a.name}]")
    out.source_action = a
    return out


def cobar_compatibility_sides(t, bs, x):
    """δ(Ωβ(b, x)) against (−1)^{Σb} Ωβ(b, δx) (left) or Ωβ′(δx, b) (right)."""
    Om = t.target
    lhs = {}
    for y, c in t.beta(bs, x).items():
        vec_add(lhs, Om.delta(y), c)
    s = sign(_sum_deg(t.adeg, bs)) if t.side == "left" else 1
    rhs = {}
    for y, c in Om.delta(x).items():
        vec_add(rhs, t.beta(bs, y), s * c)
    return lhs, rhs


def check_cobar_compatibility(t, probes, report=None):
    report = report or Report(f"cobar compatibility {t.name}")
    c = report.add(Check(f"deconcatenation commutes with the action [{t.name}]", "CobarCompatibility"))
    for bs, x in probes:
        run_probe(c, cobar_compatibility_sides, (t, bs, x), (bs, x))
    return report


def bar_transport(a, max_weight=3, check=False, probes=None):
    """Algebra action on A ↦ coalgebra action on B(A) = T^c(sA) with the bar codifferential."""
    if a.kind != "algebra":
        raise ActionAxiomViolation("bar transport needs an algebra action")
    if check:
        require_action(a, probes)
    from .hochschild import s_label, s_structure_element, suspended_space
    A = a.target
    W = suspended_space(A)
    unsuspend = {s_label(x): x for x in A.labels}
    e0 = s_structure_element(A)

    def codiff(word):
        out = {}
        for lab, c in e0.items():
            vec_add(out, insert_elementary((lab,), word, W.deg,
                                           lambda l: W.deg(l[1]) - _sum_deg(W.deg, l[0])), c)
        return out

    target = TensorCoalgebraTarget(W, max_weight, codiff, name=f"Bar({A.name})")

    def on_generator(grp, sx):
        if not grp:
            return {sx: ONE}
        return {s_label(y): c for y, c in a.beta(grp, unsuspend[sx]).items()}

    def beta(bs, word):
        if a.side == "left":
            return distribute_over_factors(on_generator, bs, word, a.adeg, W.deg, "left")
        return distribute_over_factors(on_generator, bs, word, a.adeg, W.deg, "right")

    out = ActionData(a.actor, target, beta, a.side, "coalgebra", f"Bar[{a.name}]")
    out.source_action = a
    return out
