"""Seeded property suites over the shipped catalog; each returns a Report."""

import random
from fractions import Fraction
from math import factorial

from ..actions import (ActionData, FreeAlgebraTarget, TensorCoalgebraTarget, action_round_trip,
                       action_to_morphism, bar_transport, build_operator_binfty, canonical_action,
                       check_cobar_compatibility, check_representable, cobar_transport,
                       generate_action_probes, morphism_round_trip, verify_action,
                       verify_morphism_into_operator)
from ..errors import NotAMorphismSolution, NotMaurerCartan
from ..extensions import (algebra_as_binfty, check_commutation, commutation_probes, compare_tables,
                          extend_by_algebra, extend_two_sided, two_step, verify_strict_morphism)
from ..graded import GradedSpace, vec_add
from ..hochschild import (cohomology_compare, cohomology_dims, derivations, gerstenhaber_report,
                          hochschild_binfty, HochschildComplex, s_label, s_structure_element,
                          suspended_space, verify_tau_morphism)
from ..kernel import deform_mc, generate_probes, mc_check, verify_binfty, zero_structure
from ..linalg import ONE, rref
from ..report import Check, Report
from .fileformat import CATALOG_ALGEBRAS, CATALOG_MORPHISMS, catalog_algebra, catalog_morphism


def _merge(report, part, prefix=""):
    """Fold a Check or a Report into report, prefixing check names."""
    checks = [part] if isinstance(part, Check) else part.checks
    for c in checks:
        if prefix:
            c.name = f"{prefix}: {c.name}"
        report.add(c)
    if isinstance(part, Report):
        for k, v in part.data.items():
            report.data[f"{prefix}: {k}" if prefix else k] = v
    return report


def _flat(probes):
    return [u + v + w for u, v, w in probes["associativity"]] + [v for (v,) in probes["ainfty"]]


# ---------------------------------------------------------------- B∞ axioms and deformation


def operator_spaces():
    return [GradedSpace([("a", 0), ("b", -1)], "W")]


def binfty_algebra(p, N, samples, seed, report):
    B = hochschild_binfty(p, N)
    pr = generate_probes(B, N, samples=samples, seed=seed, budget_slack=4)
    return _merge(report, verify_binfty(B, pr), f"C*({p.name})")


def suite_binfty(cfg, report=None):
    report = report or Report("binfty", cfg.cutoffs("N"), cfg.seed)
    for name in CATALOG_ALGEBRAS:
        binfty_algebra(catalog_algebra(name), cfg.N, cfg.samples, cfg.seed, report)
    for W in operator_spaces():
        for side in ("endo", "coendo"):
            E = build_operator_binfty(W, side, max_arity=cfg.N)
            pr = generate_probes(E, cfg.N, samples=cfg.samples, seed=cfg.seed, budget_slack=4)
            _merge(report, verify_binfty(E, pr), f"{side}({W.name})")
    return report


def broken_structure_element(B, p):
    """μ̃ + d̃ plus one elementary degree-1 term that breaks the MC equation, or None."""
    base = s_structure_element(p)
    for e in sorted(B.carrier.in_degree(1), key=repr):
        b0 = dict(base)
        vec_add(b0, {e: ONE})
        if not mc_check(B, b0):
            return b0
    return None


def deformation_algebra(p, N, samples, seed, report):
    W = suspended_space(p)
    B = build_operator_binfty(W, "endo", None, max_arity=N, name=f"braces({W.name})")
    b0 = s_structure_element(p)
    c = report.add(Check(f"{p.name}: structure element is Maurer-Cartan", "BDeformation"))
    c.record(mc_check(B, b0), (p.name,))
    D = deform_mc(B, b0, check=True)
    pr = generate_probes(D, N, samples=samples, seed=seed, budget_slack=4)
    _merge(report, verify_binfty(D, pr), f"{p.name} deformed")
    bad = broken_structure_element(B, p)
    if bad is None:
        report.data[f"{p.name}: negative control"] = "every degree-1 element is Maurer-Cartan"
        return report
    c = report.add(Check(f"{p.name}: non-MC element is rejected", "BDeformation"))
    try:
        deform_mc(B, bad, check=True)
        c.fail_with("deform_mc accepted an element violating the MC equation")
    except NotMaurerCartan:
        c.record(True)
    return report


def suite_deformation(cfg, report=None):
    report = report or Report("deformation", cfg.cutoffs("N"), cfg.seed)
    for name in CATALOG_ALGEBRAS:
        deformation_algebra(catalog_algebra(name), cfg.N, cfg.samples, cfg.seed, report)
    return report


# ---------------------------------------------------------------- extensions


def exp_action(p, D, side, letter="E"):
    """The zero B∞-algebra on one degree-0 letter acting by D^m/m!."""
    actor = zero_structure(GradedSpace([(letter, 0)], f"<{letter}>"))
    actor.pool = [letter]

    def power(m, x):
        vec = {x: ONE}
        for _ in range(m):
            out = {}
            for y, c in vec.items():
                vec_add(out, D.get(y, {}), c)
            vec = out
        return vec

    def beta(bs, x):
        m = len(bs)
        return {y: c / factorial(m) for y, c in power(m, x).items()}

    return ActionData(actor, p, beta, side, "algebra", f"exp({letter}) on {p.name}",
                      target_pool=p.labels)


def chosen_derivation(p):
    ds = derivations(p)
    return ds[0] if ds else {}


def extension_algebra(p, N, samples, seed, report):
    D = chosen_derivation(p)
    report.data[f"{p.name}: derivation"] = {x: {y: str(c) for y, c in v.items()}
                                           for x, v in sorted(D.items())}
    left = exp_action(p, D, "left", "E")
    right = exp_action(p, D, "right", "G")
    res = extend_by_algebra(left.actor, p, left, check=False)
    pr = generate_probes(res.total, N, samples=samples, seed=seed)
    _merge(report, verify_binfty(res.total, pr), f"{p.name} one-sided")
    _merge(report, res.check_exactness(), f"{p.name} one-sided")
    _merge(report, verify_strict_morphism(res.project, res.total, res.quotient, pr, "project"),
           f"{p.name} one-sided")
    spr = generate_probes(res.sub, N, samples=samples, seed=seed)
    _merge(report, verify_strict_morphism(res.include, res.sub, res.total, spr, "include"),
           f"{p.name} one-sided")
    cp = commutation_probes(left, right, p.labels, samples=samples, seed=seed)
    c = report.add(Check(f"{p.name}: left and right actions commute", "Commutation"))
    c.record(check_commutation(left, right, cp), (p.name,))
    T = extend_two_sided(left, right, p, check=False)
    pr = generate_probes(T.total, N, samples=samples, seed=seed)
    _merge(report, verify_binfty(T.total, pr), f"{p.name} two-sided")
    _merge(report, T.check_exactness(), f"{p.name} two-sided")
    S = two_step(left, right, p)
    _merge(report, compare_tables(T.total, S.total, _flat(pr), name="two-sided vs two-step"),
           p.name)
    return report


def suite_extensions(cfg, report=None):
    report = report or Report("extensions", cfg.cutoffs("N"), cfg.seed)
    for name in ("dual", "trunc3", "upper2"):
        extension_algebra(catalog_algebra(name), cfg.N, cfg.samples, cfg.seed, report)
    return report


# ---------------------------------------------------------------- cobar and bar transport


def _cobar_pool(a, seed, size=12):
    rng = random.Random(seed)
    words = [w for w in a.target.labels if 1 <= len(w) <= 2]
    pool = [(w,) for w in words[:size]]
    pool += [(rng.choice(words), rng.choice(words)) for _ in range(size)]
    return pool


def cobar_algebra_check(p, P, samples, seed, report):
    B = hochschild_binfty(p, P)
    a = canonical_action(B, P)
    t = cobar_transport(a, P)
    pr = generate_action_probes(t, samples=samples, seed=seed, max_actor=2,
                                target_pool=_cobar_pool(a, seed))
    _merge(report, verify_action(t, pr), f"cobar of C*({p.name}) on Tc")
    _merge(report, check_cobar_compatibility(t, pr["leibniz"]), f"cobar of C*({p.name})")
    return report


def suite_cobar(cfg, report=None):
    from ..morphism import HomComplexes, build_psi_actions, gamma_pool
    report = report or Report("cobar", cfg.cutoffs("P", "F"), cfg.seed)
    for name in ("dual", "dg"):
        cobar_algebra_check(catalog_algebra(name), cfg.P, cfg.samples, cfg.seed, report)
    # exp of the Euler derivation on k[e]: bar, then cobar of the bar
    p = catalog_algebra("dual")
    for side in ("left", "right"):
        a = exp_action(p, chosen_derivation(p), side)
        b = bar_transport(a, cfg.P)
        prb = generate_action_probes(b, samples=cfg.samples, seed=cfg.seed, max_actor=3)
        _merge(report, verify_action(b, prb), f"bar of {a.name} ({side})")
        t = cobar_transport(b, cfg.P)
        prc = generate_action_probes(t, samples=cfg.samples, seed=cfg.seed, max_actor=3,
                                     target_pool=_cobar_pool(b, cfg.seed, 8))
        _merge(report, verify_action(t, prc), f"cobar of bar ({side})")
        _merge(report, check_cobar_compatibility(t, prc["leibniz"]), f"cobar of bar ({side})")
    # the actions of g and h on Γ for k -> k[e]
    hc = HomComplexes(catalog_algebra("k"), catalog_algebra("dual"), 3)
    left_T, right_T = build_psi_actions(hc, cfg.F)
    pool = [(x,) if isinstance(x[0], str) else x
            for x in gamma_pool(hc, cfg.P, cfg.F, cfg.seed, 16)]
    for a in (left_T, right_T):
        t = cobar_transport(a, cfg.P, filtration=len)
        pr = generate_action_probes(t, samples=cfg.samples, seed=cfg.seed, max_actor=2,
                                    target_pool=pool)
        _merge(report, verify_action(t, pr), f"Gamma ({a.side})")
        _merge(report, check_cobar_compatibility(t, pr["leibniz"]), f"Gamma ({a.side})")
    return report


# ---------------------------------------------------------------- representation round trips


def random_invertible(W, rng):
    """Degree-preserving invertible φ on W and its inverse, as {x: {y: c}}."""
    phi, inv = {}, {}
    by_deg = {}
    for x in W.labels:
        by_deg.setdefault(W.deg(x), []).append(x)
    for block in by_deg.values():
        n = len(block)
        m = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = Fraction(rng.choice([1, -1, 2, -2, 3])) / rng.choice([1, 1, 2, 3])
            for j in range(i + 1, n):
                m[i][j] = Fraction(rng.randint(-2, 2))
        if n > 1 and rng.random() < 0.5:
            m = m[::-1]  # row permutation keeps it invertible
        rows = [{**{j: v for j, v in enumerate(m[i]) if v}, n + i: ONE} for i in range(n)]
        piv = rref(rows)
        # column j of φ is the image of block[j]
        for j, x in enumerate(block):
            phi[x] = {block[i]: m[i][j] for i in range(n) if m[i][j]}
        # rref([M | I]) = [I | M^-1]
        for i, row in piv.items():
            for j in range(n):
                c = row.get(n + j)
                if c:
                    inv.setdefault(block[j], {})[block[i]] = c
    return phi, inv


def _tensor_map(phi, word):
    out = {(): ONE}
    for x in word:
        new = {}
        for w, c in out.items():
            for y, k in phi.get(x, {}).items():
                key = w + (y,)
                new[key] = new.get(key, 0) + c * k
        out = {w: c for w, c in new.items() if c}
    return out


def _on_words(phi, vec):
    out = {}
    for w, c in vec.items():
        vec_add(out, _tensor_map(phi, w), c)
    return out


def conjugated_action(a, phi, inv, name):
    """φ^{⊗} ∘ β(bs, −) ∘ (φ^{-1})^{⊗} on the same kind of target (a coalgebra or algebra iso)."""
    T = a.target
    if isinstance(T, TensorCoalgebraTarget):
        def codiff(word):
            return _on_words(phi, _sum_diff(T, _on_words(inv, {tuple(word): ONE})))
        target = TensorCoalgebraTarget(T.cogenerators, T.max_weight, codiff, name=f"{T.name}^phi")
    else:
        gdiff = {}
        for x in T.generators.labels:
            val = _on_words(phi, _sum_diff(T, _on_words(inv, {(x,): ONE})))
            if val:
                gdiff[x] = val
        target = FreeAlgebraTarget(T.generators, T.max_weight, gdiff, name=f"{T.name}^phi")

    def beta(bs, word):
        out = {}
        for w, c in _on_words(inv, {tuple(word): ONE}).items():
            vec_add(out, _on_words(phi, a.beta(bs, w)), c)
        return out

    return ActionData(a.actor, target, beta, "left", a.kind, name)


def _sum_diff(T, vec):
    out = {}
    for w, c in vec.items():
        vec_add(out, T.diff(w), c)
    return out


def random_actions(count, N, seed):
    """Seeded random actions: canonical actions of catalog Hochschild and operator algebras,
    conjugated by random invertible maps of the cogenerators."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        if i % 4 == 3:
            W = suspended_space(catalog_algebra(CATALOG_ALGEBRAS[i % len(CATALOG_ALGEBRAS)]))
            E = build_operator_binfty(W, "coendo", None, max_arity=N, name=f"coendo({W.name})")
        else:
            p = catalog_algebra(CATALOG_ALGEBRAS[i % len(CATALOG_ALGEBRAS)])
            E = hochschild_binfty(p, N)
            W = E.W
        a = canonical_action(E, N)
        phi, inv = random_invertible(W, rng)
        out.append(conjugated_action(a, phi, inv, f"action#{i} {E.side} {W.name}"))
    return out


def _round_trip_probes(a, samples, seed):
    labels = a.target.labels
    if isinstance(a.target, FreeAlgebraTarget):
        pool = [w for w in labels if 1 <= len(w) <= 2]
    else:
        pool = [w for w in labels if 1 <= len(w) <= 3]
    pr = generate_action_probes(a, samples=samples, seed=seed, max_actor=2, target_pool=pool)
    return pr


def suite_representation(cfg, report=None, count=None):
    N = min(cfg.N, 3)
    count = count or max(25, cfg.samples)
    report = report or Report("representation", {"N": N, "actions": count}, cfg.seed)
    trip = report.add(Check("action -> morphism -> action is the identity", "Representation"))
    back = report.add(Check("morphism -> action -> morphism is the identity", "Representation"))
    rep = report.add(Check("actions are determined by their corestrictions", "Representation"))
    report.data["actions"] = count
    report.data["arity"] = N
    for i, a in enumerate(random_actions(count, N, cfg.seed)):
        pr = _round_trip_probes(a, max(4, cfg.samples // 3), cfg.seed + i)
        probes = pr["leibniz"]
        if isinstance(a.target, FreeAlgebraTarget):
            # coendo components are evaluated on generators
            gen_probes = [(bs, w[0]) for bs, w in probes if len(w) == 1]
        else:
            gen_probes = probes
        for src, dst in ((action_round_trip(a, probes), trip),
                         (morphism_round_trip(action_to_morphism(a), a.target, gen_probes), back),
                         (check_representable(a, probes), rep)):
            dst.passed += src.passed
            dst.failed += src.failed
            dst.skipped += src.skipped
            dst.witnesses.extend(src.witnesses[:max(0, 3 - len(dst.witnesses))])
        if i < 4:
            _merge(report, verify_action(a, pr), a.name)
            mprobes = _morphism_probes(a, cfg.samples, cfg.seed + i)
            _merge(report, verify_morphism_into_operator(action_to_morphism(a), _codomain(a),
                                                         mprobes), a.name)
    return report


def _morphism_probes(a, samples, seed):
    """(u, v, x) with arity-1 actors and short x, so e0{μ(v)} stays inside the cutoff."""
    rng = random.Random(seed)
    T = a.target
    if isinstance(T, TensorCoalgebraTarget):
        low = [b for b in a.actor.pool if len(b[0]) == 1]
        xs = [w for w in T.labels if 1 <= len(w) <= 2]
    else:
        low = [b for b in a.actor.pool if len(b[1]) == 1]
        xs = list(T.generators.labels)
    low = sorted(set(low), key=repr)
    out = []
    for _ in range(samples):
        u = (rng.choice(low),)
        v = tuple(rng.choice(low) for _ in range(rng.randint(1, 2)))
        out.append((u, v, rng.choice(xs)))
    return out


def _codomain(a):
    """The operator B∞-algebra the dictionary maps into, rebuilt for the conjugated target."""
    T = a.target
    W = T.cogenerators if isinstance(T, TensorCoalgebraTarget) else T.generators
    if isinstance(T, TensorCoalgebraTarget):
        e0 = {}
        for word in T.labels:
            for y, c in T.diff(word).items():
                if len(y) == 1:
                    vec_add(e0, {(tuple(word), y[0]): c})
        return build_operator_binfty(W, "endo", e0, max_arity=T.max_weight)
    e0 = {}
    for x in W.labels:
        for w, c in T.diff((x,)).items():
            vec_add(e0, {(x, w): c})
    return build_operator_binfty(W, "coendo", e0, max_arity=T.max_weight)


# ---------------------------------------------------------------- morphisms as MC elements


def morphism_mc(f, N, P, F, samples, seed, report, deformed=False):
    from ..morphism import (HomComplexes, LElement, algebra_morphism_triple, ainfty_to_mc,
                            assemble_LAB, deform_to_Bf, filtration, mc_report, mc_to_ainfty,
                            morphism_conditions)
    hc = HomComplexes(f.dom, f.cod, N)
    L = assemble_LAB(hc, P, F, seed=seed, pool_size=30)
    t = algebra_morphism_triple(hc, f.table)
    _merge(report, morphism_conditions(t), f.name)
    l = ainfty_to_mc(t, F)
    _merge(report, mc_report(L, l, F), f.name)
    c = report.add(Check(f"{f.name}: MC element gives back the triple", "MorPoint"))
    c.record(mc_to_ainfty(hc, l) == t, (f.name,))
    g = dict(l.gamma)
    # plant on the shortest word so the weight-2 label stays within filtration F
    w = min(g, key=lambda x: (filtration(x), repr(x)))
    g[(w[0], w[0])] = ONE
    planted = LElement(t.alpha, t.beta, gamma=g, F=F, N=N)
    c = report.add(Check(f"{f.name}: planted weight-2 component is rejected", "MorPoint"))
    try:
        mc_to_ainfty(hc, planted)
        c.fail_with("mc_to_ainfty accepted a weight-2 component")
    except NotAMorphismSolution:
        c.record(True)
    if deformed:
        Bf, _ = deform_to_Bf(L, l, extra=1)
        pr = generate_probes(Bf, 3, samples=samples, seed=seed)
        _merge(report, verify_binfty(Bf, pr), f"B({f.name})")
    return report


def suite_morphism(cfg, report=None):
    report = report or Report("morphism", cfg.cutoffs("N", "P", "F"), cfg.seed)
    N = min(cfg.N, 3)
    for i, name in enumerate(("unit_dual", "id_dual", "id_dg")):
        morphism_mc(catalog_morphism(name), N, cfg.P, cfg.F, cfg.samples, cfg.seed, report,
                    deformed=(i == 0))
    return report


# ---------------------------------------------------------------- τ, cohomology, Gerstenhaber


def injective_morphisms():
    return [f for f in map(catalog_morphism, CATALOG_MORPHISMS) if f.is_injective()]


def suite_tau(cfg, report=None, names=None):
    report = report or Report("tau", cfg.cutoffs("N"), cfg.seed)
    fs = [catalog_morphism(n) for n in names] if names else injective_morphisms()
    for f in fs:
        _merge(report, verify_tau_morphism(f, cfg.N, cfg.degrees, max(3, cfg.samples // 3),
                                           cfg.seed), f.name)
    return report


def suite_cohomology(cfg, report=None):
    report = report or Report("cohomology", cfg.cutoffs("N"), cfg.seed)
    _merge(report, cohomology_compare(catalog_morphism("unit_dual"), cfg.degrees, cfg.N))
    for name in CATALOG_ALGEBRAS:
        p = catalog_algebra(name)
        dims = cohomology_dims(HochschildComplex(p, cfg.N), cfg.degrees)
        report.data[f"HH {p.name}"] = {str(n): d for n, d in dims.items()}
    return report


def suite_gerstenhaber(cfg, report=None):
    report = report or Report("gerstenhaber", cfg.cutoffs("N"), cfg.seed)
    for name in CATALOG_ALGEBRAS:
        p = catalog_algebra(name)
        _merge(report, gerstenhaber_report(p, cfg.degrees, cfg.N, max_reps=2), p.name)
    return report


SUITES = {
    "binfty": suite_binfty,
    "deformation": suite_deformation,
    "extensions": suite_extensions,
    "cobar": suite_cobar,
    "representation": suite_representation,
    "morphism": suite_morphism,
    "tau": suite_tau,
    "cohomology": suite_cohomology,
    "gerstenhaber": suite_gerstenhaber,
}


class Config:
    def __init__(self, N=4, P=3, F=3, degrees=(0, 1, 2), samples=25, seed=1):
        self.N, self.P, self.F = N, P, F
        self.degrees = list(degrees)
        self.samples = samples
        self.seed = seed

    def cutoffs(self, *keys):
        return {k: getattr(self, k) for k in keys}


def run_suite(name, cfg):
    if name == "all":
        reports = [SUITES[n](cfg) for n in SUITES]
        total = Report("all", cfg.cutoffs("N", "P", "F"), cfg.seed)
        for r in reports:
            _merge(total, r, r.suite)
        return total
    return SUITES[name](cfg)
