"""The deformation complex of a morphism of dg algebras.

g and h are the brace algebras of cochains on sA and sB, Ψ = Hom(⊕(sA)^m, sB).
h acts on T^c(Ψ) from the left by composition, g from the right by
precomposition; the cobar algebra Γ of T^c(Ψ) inherits both actions and the
two-sided extension gives a B∞-structure on Γ ⊕ g ⊕ h.

Γ labels are tuples of Ψ-words (one word per cobar factor).  The filtration of
a label is its total number of Ψ-letters; the completion is realized by
comparing components modulo filtration > F.
"""

import random
from fractions import Fraction

from .actions import (ActionData, CobarAlgebra, TensorCoalgebraTarget, cobar_transport)
from .errors import (NotAInftyStructure, NotAMorphismSolution, NotHomogeneous,
                     NotMaurerCartan)
from .extensions import TaggedSum, extend_two_sided
from .graded import (HomSpace, MultiMap, brace_elementary, homogeneous_degree,
                     lift_coalgebra_morphism, multi_insert_apply, note_truncation, sign,
                     tensor_vectors, vec_add)
from .hochschild import s_label, s_structure_element, suspended_space
from .kernel import BInftyStructure, deform_mc, run_probe
from .report import Check, Report

ONE = Fraction(1)


class HomComplexes:
    """g, h and Ψ for a pair of dg algebras, truncated at arity N."""

    def __init__(self, A, B, N=4):
        from .actions import build_operator_binfty
        self.A, self.B, self.N = A, B, N
        self.WA = suspended_space(A)
        self.WB = suspended_space(B)
        self.g = build_operator_binfty(self.WA, "endo", None, N, name="g")
        self.h = build_operator_binfty(self.WB, "endo", None, N, name="h")
        self.psi = HomSpace(self.WA, self.WB, N, name="Psi")

    def psi_deg(self, label):
        return self.psi.deg(label)

    def word_deg(self, word):
        return sum(self.psi.deg(x) for x in word)


def filtration(label):
    """Number of Ψ-letters in a Γ label."""
    return sum(len(w) for w in label)


# ---------------------------------------------------------------- actions on T^c(Ψ)


def _left_compose(hc, hs, word):
    """Σ over disjoint ordered blocks: each h_j composed after its block of ψ's."""
    out = {}
    n = len(word)
    prefix = [0]
    for x in word:
        prefix.append(prefix[-1] + hc.psi_deg(x))

    def rec(j, pos, acc, coeff):
        if j == len(hs):
            vec_add(out, {acc + word[pos:]: coeff})
            return
        hd = hc.h.deg(hs[j])
        p = len(hs[j][0])
        for start in range(pos, n - p + 1):
            val = brace_elementary(hs[j], word[start:start + p], hc.psi_deg, hc.WA.deg, fill=True)
            for lab, c in val.items():
                if len(lab[0]) > hc.N:
                    note_truncation()
                    continue
                rec(j + 1, start + p, acc + word[pos:start] + (lab,),
                    coeff * c * sign(hd * prefix[start]))

    rec(0, 0, (), ONE)
    return out


def _right_compose(hc, alphas, word):
    """Distribute the α's over the letters; each letter ψ becomes ψ{its group}."""
    out = {}
    n = len(word)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + hc.psi_deg(word[i])

    def rec(i, start, parts, coeff):
        if i == n:
            if start != len(alphas):
                return
            for w, c in tensor_vectors(parts).items():
                vec_add(out, {w: c * coeff})
            return
        for end in range(start, len(alphas) + 1):
            if i == n - 1 and end != len(alphas):
                continue
            grp = alphas[start:end]
            val = brace_elementary(word[i], grp, hc.g.deg, hc.WA.deg)
            kept = {}
            for lab, c in val.items():
                if len(lab[0]) > hc.N:
                    note_truncation()
                    continue
                kept[lab] = c
            if not kept:
                continue
            gdeg = sum(hc.g.deg(a) for a in grp)
            rec(i + 1, end, parts + [kept], coeff * sign(gdeg * suffix[i + 1]))

    rec(0, 0, [], ONE)
    return out


def build_psi_actions(hc, F=3):
    """(left action of h, right action of g) on T^c(Ψ), both coalgebra actions."""
    T = TensorCoalgebraTarget(hc.psi, F, None, name="Tc(Psi)")
    left = ActionData(hc.h, T, lambda hs, w: _left_compose(hc, hs, w), "left", "coalgebra",
                      "h on Tc(Psi)")
    right = ActionData(hc.g, T, lambda gs, w: _right_compose(hc, gs, w), "right", "coalgebra",
                       "g on Tc(Psi)")
    return left, right


# ---------------------------------------------------------------- Γ and the assembled structure


def cobar_gamma(hc, P=3, F=3):
    """The cobar algebra Γ of T^c(Ψ) (weight ≤ P) and its differential δ."""
    T = TensorCoalgebraTarget(hc.psi, F, None, name="Tc(Psi)")
    G = CobarAlgebra(T, P, filtration=len, name="Gamma")
    G.filtration_cap = F
    return G, G.delta


def delta_squared_report(G, labels, report=None):
    report = report or Report("delta squares to zero")
    c = report.add(Check("delta squared is zero", "CobarDifferential"))
    for x in labels:
        def sides(x=x):
            out = {}
            for y, k in G.delta(x).items():
                vec_add(out, G.delta(y), k)
            return out, {}
        run_probe(c, sides, (), (x,))
    return report


def sign_modified(right):
    """β′_m(x, α1..α_{m-1}) ↦ (−1)^{α1+..+α_{m-1}} β′_m(x, α1..α_{m-1})."""

    def beta(gs, x):
        s = sign(sum(right.actor.deg(a) for a in gs))
        return {y: s * c for y, c in right.beta(gs, x).items()}

    out = ActionData(right.actor, right.target, beta, "right", right.kind,
                     f"{right.name} (sign modified)")
    return out


def gamma_words(hc, F, rng=None, per_length=None):
    """Ψ-words of length ≤ F (all, or a seeded sample per length)."""
    letters = list(hc.psi.labels)
    out = []
    for n in range(1, F + 1):
        total = len(letters) ** n
        if per_length is None or total <= per_length:
            from itertools import product
            out.extend(tuple(w) for w in product(letters, repeat=n))
        else:
            seen = set()
            while len(seen) < per_length:
                seen.add(tuple(rng.choice(letters) for _ in range(n)))
            out.extend(sorted(seen, key=repr))
    return out


def gamma_pool(hc, P, F, seed=0, size=40):
    """A seeded pool of Γ labels with weight ≤ P and filtration ≤ F."""
    rng = random.Random(seed)
    words = gamma_words(hc, F, rng, per_length=size)
    by_len = {}
    for w in words:
        by_len.setdefault(len(w), []).append(w)
    pool = []
    seen = set()
    for _ in range(size * 4):
        k = rng.randint(1, min(P, F))
        lens = []
        budget = F
        for j in range(k):
            if budget - (k - j - 1) < 1:
                break
            L = rng.randint(1, budget - (k - j - 1))
            lens.append(L)
            budget -= L
        if len(lens) != k:
            continue
        lab = tuple(rng.choice(by_len[L]) for L in lens)
        if lab not in seen:
            seen.add(lab)
            pool.append(lab)
        if len(pool) >= size:
            break
    for w in by_len.get(1, [])[:size]:
        if (w,) not in seen:
            seen.add((w,))
            pool.append((w,))
    return sorted(pool, key=repr)


def assemble_LAB(hc, P=3, F=3, seed=0, pool_size=40, cap_pools=None):
    """B∞-structure on Γ ⊕ g ⊕ h via cobar transport and the two-sided extension."""
    left_T, right_T = build_psi_actions(hc, F)
    G, _ = cobar_gamma(hc, P, F)
    left = cobar_transport(left_T, P, filtration=len)
    right = sign_modified(cobar_transport(right_T, P, filtration=len))
    left.target = right.target = G
    pool = gamma_pool(hc, P, F, seed, pool_size)
    L = extend_two_sided(left, right, G, check=False, pool_A=pool,
                         name=f"L({hc.A.name},{hc.B.name})").total
    if cap_pools:
        L.pool = [x for x in L.pool if x[0] == "A"] + \
            _capped([x for x in L.pool if x[0] == "B'"], cap_pools, seed) + \
            _capped([x for x in L.pool if x[0] == "B"], cap_pools, seed + 1)
    L.hc, L.gamma, L.left, L.right, L.P, L.F = hc, G, left, right, P, F
    L.weight = None
    return L


def _capped(items, n, seed):
    if len(items) <= n:
        return items
    rng = random.Random(seed)
    return sorted(rng.sample(items, n), key=repr)


# ---------------------------------------------------------------- the same structure, written out directly


def _flat_right(hc, x, alphas):
    """Right action on a Γ label: α's distributed over all letters, each passing
    every symbol to its right (letters and the desuspension closing each factor)."""
    flat = [(i, j) for i, w in enumerate(x) for j in range(len(w))]
    letters = [x[i][j] for i, j in flat]
    right_deg = []
    for i, j in flat:
        later = sum(hc.psi_deg(y) for y in x[i][j + 1:]) + 1
        later += sum(hc.word_deg(w) + 1 for w in x[i + 1:])
        right_deg.append(later)
    out = {}
    n = len(letters)

    def rec(t, start, parts, coeff):
        if t == n:
            if start != len(alphas):
                return
            for flat_word, c in tensor_vectors(parts).items():
                lab, pos = [], 0
                for w in x:
                    lab.append(tuple(flat_word[pos:pos + len(w)]))
                    pos += len(w)
                vec_add(out, {tuple(lab): c * coeff})
            return
        for end in range(start, len(alphas) + 1):
            grp = alphas[start:end]
            val = {}
            for lab, c in brace_elementary(letters[t], grp, hc.g.deg, hc.WA.deg).items():
                if len(lab[0]) > hc.N:
                    note_truncation()
                    continue
                val[lab] = c
            if not val:
                continue
            e = sum(hc.g.deg(a) for a in grp) * right_deg[t]
            rec(t + 1, end, parts + [val], coeff * sign(e))

    rec(0, 0, [], ONE)
    return out


def _flat_left(hc, hs, x):
    """Left action on a Γ label: h's composed after disjoint blocks inside single
    factors, each passing every symbol to its left."""
    out = {}
    k = len(x)
    before = [0]
    for w in x:
        before.append(before[-1] + hc.word_deg(w) + 1)

    def rec(i, j, acc, coeff):
        # i: factor index, j: next h to place
        if i == k:
            if j == len(hs):
                vec_add(out, {tuple(acc): coeff})
            return
        w = x[i]
        # choose how many h's act on factor i
        for r in range(j, len(hs) + 1):
            grp = hs[j:r]
            for wv, c in _left_compose(hc, grp, w).items():
                s = sign(sum(hc.h.deg(y) for y in grp) * before[i])
                rec(i + 1, r, acc + [wv], coeff * c * s)

    rec(0, 0, [], ONE)
    return out


def direct_structure(hc, P, pool, name="L direct"):
    """The assembled structure written out family by family, without transport."""
    g, h = hc.g, hc.h
    carrier = TaggedSum({"A": lambda x: sum(hc.word_deg(w) + 1 for w in x),
                         "B'": g.deg, "B": h.deg}, name)

    def tagA(vec):
        out = {}
        for y, c in vec.items():
            if len(y) > P:
                note_truncation()
                continue
            out[("A", y)] = c
        return out

    def b(m, n, labels):
        tags = [t for t, _ in labels]
        raw = [y for _, y in labels]
        if all(t == "A" for t in tags):
            return tagA({raw[0] + raw[1]: ONE}) if (m, n) == (1, 1) else {}
        if all(t == "B'" for t in tags):
            return {("B'", y): c for y, c in g.bop(m, n, tuple(raw)).items()}
        if all(t == "B" for t in tags):
            return {("B", y): c for y, c in h.bop(m, n, tuple(raw)).items()}
        if n == 1 and tags == ["B"] * m + ["A"]:
            return tagA(_flat_left(hc, tuple(raw[:m]), raw[-1]))
        if m == 1 and tags == ["A"] + ["B'"] * n:
            return tagA(_flat_right(hc, raw[0], tuple(raw[1:])))
        if tags[0] == "A" and tags[-1] == "A" and tags[1:m] == ["B"] * (m - 1) \
                and tags[m:-1] == ["B'"] * (n - 1):
            hs, gs = tuple(raw[1:m]), tuple(raw[m:-1])
            s = sign(sum(g.deg(a) for a in gs) * sum(h.deg(y) for y in hs))
            out = {}
            for y1, c1 in _flat_right(hc, raw[0], gs).items():
                for y2, c2 in _flat_left(hc, hs, raw[-1]).items():
                    vec_add(out, tagA({y1 + y2: ONE}), s * c1 * c2)
            return out
        return {}

    def d(m, labels):
        if m != 1 or labels[0][0] != "A":
            return {}
        x = labels[0][1]
        out = {}
        run = 0
        for i, w in enumerate(x):
            for j in range(1, len(w)):
                e = run + hc.word_deg(w[:j]) + 1
                vec_add(out, tagA({x[:i] + (w[:j], w[j:]) + x[i + 1:]: ONE}), sign(e))
            run += hc.word_deg(w) + 1
        return out

    return BInftyStructure(carrier, b, d, name, pool=pool, tag_of=lambda x: x[0])


# ---------------------------------------------------------------- elements, bracket, Maurer–Cartan


def _tag(tag, vec):
    return {(tag, x): c for x, c in vec.items()}


def project_modulo(vec, F):
    """Drop Γ components of filtration > F."""
    return {x: c for x, c in vec.items() if x[0] != "A" or filtration(x[1]) <= F}


class LElement:
    """α + β + γ in Γ̄ ⊕ g ⊕ h.

    gamma is a finite vector over Γ labels, or (when psi is given) the series
    Σ_n s⁻¹(ψ^{⊗n}) generated on demand up to any filtration.
    """

    def __init__(self, alpha=None, beta=None, gamma=None, psi=None, F=3, extra=1, N=4):
        self.alpha = dict(alpha or {})
        self.beta = dict(beta or {})
        self.psi = dict(psi) if psi else None
        self._gamma = dict(gamma or {})
        self.F = F
        self.extra = extra
        self.N = N
        self._powers = {}

    def gamma_up_to(self, cap):
        if self.psi is None:
            return {x: c for x, c in self._gamma.items() if filtration(x) <= cap}
        out = {}
        for n in range(1, cap + 1):
            for w, c in self.psi_power(n).items():
                out[(w,)] = c
        return out

    def psi_power(self, n):
        if n not in self._powers:
            if n == 1:
                self._powers[1] = {(x,): c for x, c in self.psi.items()}
            else:
                prev = self.psi_power(n - 1)
                self._powers[n] = tensor_vectors([prev, {(x,): c for x, c in self.psi.items()}])
                self._powers[n] = {a + b: c for (a, b), c in self._powers[n].items()}
        return self._powers[n]

    @property
    def gamma(self):
        return self.gamma_up_to(self.F)

    def cap(self):
        return self.F + (self.N - 1) * self.extra

    def tagged(self, cap=None, tags=("A", "B'", "B")):
        cap = self.F if cap is None else cap
        key = (cap, tuple(tags))
        cache = self.__dict__.setdefault("_tagged", {})
        if key not in cache:
            out = {}
            if "B'" in tags:
                vec_add(out, _tag("B'", self.alpha))
            if "B" in tags:
                vec_add(out, _tag("B", self.beta))
            if "A" in tags:
                vec_add(out, _tag("A", self.gamma_up_to(cap)))
            cache[key] = out
        return cache[key]

    def components_for(self, labels=()):
        if not labels:
            return self.tagged(self.cap())
        return self.tagged(self.cap(), contributing_tags(labels))


def contributing_tags(labels):
    """Summands of l whose b_{1,m}(l; labels) or b_{m,1}(labels; l) can be nonzero."""
    T = [t for t, _ in labels]
    kinds = set(T)
    rel = set()
    if kinds == {"B'"}:
        rel |= {"A", "B'"}
    if kinds == {"B"}:
        rel |= {"A", "B"}
    if T == ["A"]:
        rel |= {"A", "B", "B'"}
    if len(T) > 1 and T[-1] == "A" and set(T[:-1]) <= {"B'"}:
        rel.add("A")
    if len(T) > 1 and T[0] == "A" and set(T[1:]) <= {"B"}:
        rel.add("A")
    return tuple(sorted(rel))


def lie_bracket(L, x, y):
    """[x, y] = b_{1,1}(x, y) + (−1)^{xy+1} b_{1,1}(y, x) for homogeneous vectors."""
    dx = homogeneous_degree(x, L.deg)
    dy = homogeneous_degree(y, L.deg)
    if dx is None or dy is None:
        return {}
    out = {}
    for a, c in x.items():
        for b_, k in y.items():
            vec_add(out, L.bop(1, 1, (a, b_)), c * k)
            vec_add(out, L.bop(1, 1, (b_, a)), c * k * sign(dx * dy + 1))
    return out


def mc_residual_modulo(L, l, F=None):
    """δ(l) + b_{1,1}(l, l), Γ-components of filtration ≤ F only."""
    F = l.F if F is None else F
    comps = l.tagged(F + (l.N - 1))
    out = {}
    for x, c in comps.items():
        vec_add(out, L.dop(1, (x,)), c)
    items = list(comps.items())
    for x, c in items:
        for y, k in items:
            if x[0] == "A" and y[0] == "A" and filtration(x[1]) + filtration(y[1]) > F:
                continue
            if x[0] == "A" and y[0] == "B'" and filtration(x[1]) > F:
                continue
            if x[0] == "B'" and y[0] == "A" or x[0] == "A" and y[0] == "B" \
                    or {x[0], y[0]} == {"B", "B'"}:
                continue
            vec_add(out, L.bop(1, 1, (x, y)), c * k)
    return project_modulo(out, F)


def mc_report(L, l, F=None, report=None, name="l"):
    F = l.F if F is None else F
    report = report or Report("maurer-cartan")
    c = report.add(Check(f"Maurer-Cartan equation [{name}]", "MaurerCartan",
                         modulus=f"filtration > {F}"))
    comps = l.tagged(F)
    degs = {L.deg(x) for x in comps}
    if comps and degs != {1}:
        c.fail_with(f"degrees {sorted(degs)} (need 1)")
        return report
    res = mc_residual_modulo(L, l, F)
    c.record(not res, (name,), res, {})
    return report


class AInftyTriple:
    """α on sA, β on sB (degree 1) and ψ: T^c(sA) → sB (degree 0), as cochain vectors."""

    def __init__(self, hc, alpha, beta, psi):
        self.hc = hc
        self.alpha = dict(alpha)
        self.beta = dict(beta)
        self.psi = dict(psi)

    def maps(self):
        hc = self.hc
        a = MultiMap.from_cochain(self.alpha, 1)
        b = MultiMap.from_cochain(self.beta, 1)
        p = MultiMap.from_cochain(self.psi, 0)
        for m in (a, b, p):
            m.arities = sorted({len(k) for k in m.table})
        return a, b, p

    def __eq__(self, other):
        return (self.alpha, self.beta, self.psi) == (other.alpha, other.beta, other.psi)


def morphism_conditions(t, report=None):
    """α∘α̂ = 0, β∘β̂ = 0 and ψ∘α̂ = β∘ψ̃ on all words of length ≤ N."""
    from itertools import product
    hc = t.hc
    a, b, p = t.maps()
    report = report or Report("A-infinity morphism conditions")
    ca = report.add(Check("alpha squares to zero", "MorphismConditions"))
    cb = report.add(Check("beta squares to zero", "MorphismConditions"))
    cp = report.add(Check("psi intertwines the codifferentials", "MorphismConditions"))
    for c_, W, m in ((ca, hc.WA, a), (cb, hc.WB, b)):
        for n in range(1, hc.N + 1):
            for w in product(W.labels, repeat=n):
                val = {}
                for y, k in multi_insert_apply([m], w, W.deg).items():
                    vec_add(val, m(y), k)
                c_.record(not val, w, val, {})
    for n in range(1, hc.N + 1):
        for w in product(hc.WA.labels, repeat=n):
            lhs = {}
            for y, k in multi_insert_apply([a], w, hc.WA.deg).items():
                vec_add(lhs, p(y), k)
            rhs = {}
            for y, k in lift_coalgebra_morphism(p, w).items():
                vec_add(rhs, b(y), k)
            cp.record(lhs == rhs, w, lhs, rhs)
    return report


def algebra_morphism_triple(hc, f_table):
    """The strict A∞ triple (μ̃_A + d̃_A, μ̃_B + d̃_B, s f s⁻¹) of an algebra morphism."""
    psi = {}
    for x, val in f_table.items():
        for y, c in val.items():
            vec_add(psi, {((s_label(x),), s_label(y)): Fraction(c)})
    return AInftyTriple(hc, s_structure_element(hc.A), s_structure_element(hc.B), psi)


def ainfty_to_mc(t, F=3, check=True, extra=1):
    """l = α + β + Σ_{n ≤ F} s⁻¹(ψ^{⊗n}), the series kept lazily beyond F."""
    if check:
        rep = morphism_conditions(t)
        if not rep.ok:
            bad = rep.failures()[0]
            raise NotAInftyStructure(f"{bad.name}: {bad.witnesses[:1]}")
    return LElement(t.alpha, t.beta, psi=t.psi, F=F, extra=extra, N=t.hc.N)


def mc_to_ainfty(hc, l, check=True):
    """Read off (α, β, ψ); Γ must be exactly the geometric series of its weight-1 part."""
    gamma = l.gamma
    heavy = {x: c for x, c in gamma.items() if len(x) >= 2}
    if heavy:
        raise NotAMorphismSolution(f"component of weight {len(next(iter(heavy)))} in Γ")
    psi = {x[0][0]: c for x, c in gamma.items() if len(x[0]) == 1}
    series = LElement(psi=psi, F=l.F, N=hc.N).gamma if psi else {}
    if series != gamma:
        raise NotAMorphismSolution("Γ part is not the geometric series of its filtration-1 part")
    t = AInftyTriple(hc, l.alpha, l.beta, psi)
    if check:
        rep = morphism_conditions(t)
        if not rep.ok:
            raise NotAMorphismSolution(f"{rep.failures()[0].name} fails")
    return t


def deform_to_Bf(L, l0, extra=None):
    """B(f) = deformation of L by l0, compared modulo filtration > F; plus its Lie view."""
    rep = mc_report(L, l0)
    if not rep.ok:
        raise NotMaurerCartan(f"l0 is not Maurer-Cartan: {rep.checks[0].witnesses[:1]}")
    if extra is not None:
        l0.extra = extra
    Bf = deform_mc(L, l0, check=False, name=f"B(f) over {L.name}")
    F = l0.F
    Bf.compare_projection = lambda v: project_modulo(v, F)
    Bf.modulus = f"filtration > {F}"
    for attr in ("hc", "gamma", "left", "right", "P", "F"):
        setattr(Bf, attr, getattr(L, attr))
    Bf.l0 = l0
    return Bf, LieView(Bf)


class LieView:
    """The dg Lie algebra underlying a B∞-algebra: bracket from b_{1,1}, differential d_1."""

    def __init__(self, B):
        self.B = B

    def bracket(self, x, y):
        for v in (x, y):
            if v and homogeneous_degree(v, self.B.deg) is None:
                raise NotHomogeneous("bracket of a non-homogeneous element")
        return lie_bracket(self.B, x, y)

    def differential(self, x):
        out = {}
        for a, c in x.items():
            vec_add(out, self.B.dop(1, (a,)), c)
        return out
