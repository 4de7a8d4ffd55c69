"""Extensions of B∞-algebras: by an associative algebra, by a B∞-algebra, and two-sided.

Carrier labels are tagged pairs: ("A", a) for the algebra, ("B'", g) for the
algebra acting from the right and ("B", h) for the one acting from the left.
"""

from fractions import Fraction

from .actions import ActionData, bb_extend, require_action
from .errors import ActionsDoNotCommute, ActionAxiomViolation
from .graded import sign, vec_add
from .kernel import BInftyStructure, composite_brace, run_probe
from .report import Check, Report

ONE = Fraction(1)


class TaggedSum:
    """A direct sum given by its summands' degree functions."""

    def __init__(self, parts, name=""):
        self.parts = dict(parts)
        self.name = name

    def deg(self, label):
        tag, x = label
        return self.parts[tag](x)


def algebra_as_binfty(p, name=None, pool=None):
    """A dg algebra as a B∞-algebra: b_{1,1} = product, d_1 = differential."""

    def b(m, n, labels):
        if (m, n) != (1, 1):
            return {}
        return dict(p.mult(*labels))

    def d(m, labels):
        return dict(p.diff(labels[0])) if m == 1 else {}

    return BInftyStructure(p, b, d, name or f"{getattr(p, 'name', 'A')} as B-infinity",
                           pool=pool if pool is not None else getattr(p, "labels", []))


def _tag(tag, vec):
    return {(tag, x): c for x, c in vec.items()}


def _untag(labels):
    return tuple(x for _, x in labels)


def _runs(tags):
    out = []
    for t in tags:
        if out and out[-1][0] == t:
            out[-1] = (t, out[-1][1] + 1)
        else:
            out.append((t, 1))
    return tuple(out)


class ExtensionResult:
    """Total structure plus the strict inclusion of the sub term and projection onto the quotient."""

    def __init__(self, total, sub, quotient, include, project, sub_tags, quotient_tags):
        self.total = total
        self.sub = sub
        self.quotient = quotient
        self.include = include
        self.project = project
        self.sub_tags = sub_tags
        self.quotient_tags = quotient_tags

    def dimension_counts(self):
        """Per degree: (dim total, dim sub, dim quotient), counted on the probe pools."""
        counts = {}
        for x in self.total.pool:
            d = self.total.deg(x)
            row = counts.setdefault(d, [0, 0, 0])
            row[0] += 1
        for x in self.sub.pool:
            counts.setdefault(self.sub.deg(x), [0, 0, 0])[1] += 1
        for x in self.quotient.pool:
            counts.setdefault(self.quotient.deg(x), [0, 0, 0])[2] += 1
        return {d: tuple(v) for d, v in sorted(counts.items())}

    def check_exactness(self, report=None):
        report = report or Report("extension exactness")
        c = report.add(Check("dim total = dim sub + dim quotient per degree", "ShortExact"))
        for d, (t, s, q) in self.dimension_counts().items():
            c.record(t == s + q, (str(d),), {"total": t}, {"sum": s + q})
        c2 = report.add(Check("projection after inclusion is zero", "ShortExact"))
        for x in self.sub.pool:
            val = {}
            for y, k in self.include(x).items():
                vec_add(val, self.project(y), k)
            c2.record(not val, (x,), val, {})
        return report


def _strict_image(fn, vec):
    out = {}
    for x, c in vec.items():
        vec_add(out, fn(x), c)
    return out


def _apply_tensor(fn, labels):
    """fn applied letterwise to a tuple of labels, as a vector over tuples."""
    out = {(): ONE}
    for x in labels:
        img = fn(x)
        new = {}
        for w, c in out.items():
            for y, k in img.items():
                vec_add(new, {w + (y,): c * k})
        out = new
    return out


def strict_morphism_sides(fn, S, T, kind, args):
    """f ∘ b^S_{m,n} against b^T_{m,n} ∘ f^{⊗}, or the same for d_m."""
    if kind == "b":
        m, n, labels = args
        lhs = _strict_image(fn, S.bop(m, n, labels))
        rhs = {}
        for w, c in _apply_tensor(fn, labels).items():
            vec_add(rhs, T.bop(m, n, w), c)
        return lhs, rhs
    m, labels = args
    lhs = _strict_image(fn, S.dop(m, labels))
    rhs = {}
    for w, c in _apply_tensor(fn, labels).items():
        vec_add(rhs, T.dop(m, w), c)
    return lhs, rhs


def verify_strict_morphism(fn, S, T, probes, name, report=None):
    """A strict map (only μ_1) is a B∞-morphism iff it intertwines every b_{m,n} and d_m."""
    report = report or Report(f"morphism {name}")
    cb = report.add(Check(f"morphism respects products [{name}]", "MorphismProduct"))
    cd = report.add(Check(f"morphism respects differentials [{name}]", "MorphismDifferential"))
    for u, v, w in probes.get("associativity", []):
        t = u + v + w
        for m in range(1, len(t)):
            run_probe(cb, strict_morphism_sides, (fn, S, T, "b", (m, len(t) - m, t)), (t[:m], t[m:]))
    for (v,) in probes.get("ainfty", []):
        run_probe(cd, strict_morphism_sides, (fn, S, T, "d", (len(v), v)), v)
    return report


# ---------------------------------------------------------------- two-sided core


def _check_algebra_action(act, side, kind="algebra"):
    if act is None:
        return
    if act.side != side:
        raise ActionAxiomViolation(f"{act.name}: expected a {side} action")
    if act.kind != kind:
        raise ActionAxiomViolation(f"{act.name}: expected kind {kind}")


def _two_sided(A, left, right, name, pool_A=None):
    """b″ on A ⊕ B′ ⊕ B by summand pattern; every other pattern is zero."""
    parts = {"A": A.deg}
    pools = [("A", a) for a in (pool_A if pool_A is not None else A.labels)]
    B = left.actor if left is not None else None
    Bp = right.actor if right is not None else None
    if Bp is not None:
        parts["B'"] = Bp.deg
        pools += [("B'", g) for g in Bp.pool]
    if B is not None:
        parts["B"] = B.deg
        pools += [("B", h) for h in B.pool]
    carrier = TaggedSum(parts, name)

    def beta_left(bs, a):
        return left.beta(bs, a) if left is not None else ({a: ONE} if not bs else {})

    def beta_right(a, gs):
        return right.beta(gs, a) if right is not None else ({a: ONE} if not gs else {})

    def b(m, n, labels):
        tags = [t for t, _ in labels]
        raw = _untag(labels)
        runs = _runs(tags)
        if len(runs) == 1:
            t = tags[0]
            if t == "A":
                return _tag("A", A.mult(*raw)) if (m, n) == (1, 1) else {}
            S = B if t == "B" else Bp
            return _tag(t, S.bop(m, n, raw))
        if n == 1 and tags[-1] == "A" and runs == (("B", m), ("A", 1)):
            return _tag("A", beta_left(raw[:m], raw[-1]))
        if m == 1 and tags[0] == "A" and runs == (("A", 1), ("B'", n)):
            return _tag("A", beta_right(raw[0], raw[1:]))
        if tags[0] == "A" and tags[-1] == "A":
            lefts, rights = labels[1:m], labels[m:-1]
            if all(t == "B" for t, _ in lefts) and all(t == "B'" for t, _ in rights):
                hs, gs = _untag(lefts), _untag(rights)
                s = sign(sum(B.deg(h) for h in hs) * sum(Bp.deg(g) for g in gs)) if hs and gs else 1
                out = {}
                for x, c in beta_right(raw[0], gs).items():
                    for y, k in beta_left(hs, raw[-1]).items():
                        vec_add(out, A.mult(x, y), s * c * k)
                return _tag("A", out)
        return {}

    def d(m, labels):
        tags = {t for t, _ in labels}
        if len(tags) != 1:
            return {}
        t = tags.pop()
        raw = _untag(labels)
        if t == "A":
            return _tag("A", A.diff(raw[0])) if m == 1 else {}
        S = B if t == "B" else Bp
        return _tag(t, S.dop(m, raw))

    return BInftyStructure(carrier, b, d, name, pool=pools, tag_of=lambda x: x[0])


def _sub_structure(total, tags, name):
    sub = BInftyStructure(total.carrier, total._b_raw, total._d_raw, name,
                          pool=[x for x in total.pool if x[0] in tags], tag_of=lambda x: x[0])
    return sub


def _restricted(S, tag, name):
    """S with labels tagged, as a stand-alone structure."""
    carrier = TaggedSum({tag: S.deg}, name)
    return BInftyStructure(carrier, lambda m, n, l: _tag(tag, S.bop(m, n, _untag(l))),
                           lambda m, l: _tag(tag, S.dop(m, _untag(l))), name,
                           pool=[(tag, x) for x in S.pool], tag_of=lambda x: x[0])


def _result(total, sub_tags, quotient_tag, quotient):
    sub = _sub_structure(total, sub_tags, f"{total.name} sub")
    q = _restricted(quotient, quotient_tag, quotient.name)
    include = lambda x: {x: ONE}
    project = lambda x: {x: ONE} if x[0] == quotient_tag else {}
    return ExtensionResult(total, sub, q, include, project, sub_tags, (quotient_tag,))


def extend_by_algebra(B, A, act, check=True, probes=None, pool_A=None):
    """B∞-structure on A ⊕ B from an algebra action of B on A (left or right)."""
    if act.kind != "algebra":
        raise ActionAxiomViolation(f"{act.name}: extend_by_algebra needs an algebra action")
    if act.actor is not B:
        raise ActionAxiomViolation("the action's actor is not the given B")
    if check:
        require_action(act, probes)
    if act.side == "left":
        total = _two_sided(A, act, None, f"{A.name} + {B.name}", pool_A)
        return _result(total, ("A",), "B", B)
    total = _two_sided(A, None, act, f"{A.name} + {B.name}", pool_A)
    return _result(total, ("A",), "B'", B)


def extend_by_binfty(B, Bp, act, check=True, probes=None, tag="B"):
    """B∞-structure on B′ ⊕ B from an action of B on the B∞-algebra B′.

    Pure words use their own structures; b″_{l+m,n}(b′.., b.., b′..) =
    Σ_p b′_{l,p}(b′.., β_{m+1}(b.., (b′..))) with m ≥ 1; everything else is zero.
    Labels of B′ are kept as they are; those of B become (tag, b).
    """
    if act.kind != "bb":
        raise ActionAxiomViolation(f"{act.name}: extend_by_binfty needs a bb action")
    if check:
        require_action(act, probes)

    def is_b(x):
        return isinstance(x, tuple) and len(x) == 2 and x[0] == tag

    class Carrier:
        name = f"{Bp.name} + {B.name}"

        @staticmethod
        def deg(x):
            return B.deg(x[1]) if is_b(x) else Bp.deg(x)

    def b(m, n, labels):
        flags = [is_b(x) for x in labels]
        if not any(flags):
            return Bp.bop(m, n, labels)
        if all(flags):
            return _tag(tag, B.bop(m, n, _untag(labels)))
        lefts, rights = labels[:m], labels[m:]
        if any(is_b(x) for x in rights):
            return {}
        l = 0
        while l < m and not flags[l]:
            l += 1
        if not all(flags[l:m]):
            return {}
        bs = _untag(lefts[l:])
        out = {}
        for word, c in bb_extend(act, bs, tuple(rights)).items():
            vec_add(out, Bp.bop(l, len(word), tuple(lefts[:l]) + word), c)
        return out

    def d(m, labels):
        flags = [is_b(x) for x in labels]
        if not any(flags):
            return Bp.dop(m, labels)
        if all(flags):
            return _tag(tag, B.dop(m, _untag(labels)))
        return {}

    sub_tag_of = Bp.tag_of or (lambda x: "B'")
    tag_of = lambda x: tag if is_b(x) else sub_tag_of(x)
    total = BInftyStructure(Carrier, b, d, Carrier.name,
                            pool=list(Bp.pool) + [(tag, h) for h in B.pool], tag_of=tag_of)
    sub = BInftyStructure(Carrier, b, d, Bp.name, pool=list(Bp.pool), tag_of=tag_of)
    q = _restricted(B, tag, B.name)
    include = lambda x: {x: ONE}
    project = lambda x: {x: ONE} if is_b(x) else {}
    return ExtensionResult(total, sub, q, include, project, ("sub",), (tag,))


# ---------------------------------------------------------------- commutation and two-sided


def commutation_sides(left, right, hs, a, gs):
    lhs = {}
    for x, c in right.beta(gs, a).items():
        vec_add(lhs, left.beta(hs, x), c)
    rhs = {}
    for x, c in left.beta(hs, a).items():
        vec_add(rhs, right.beta(gs, x), c)
    return lhs, rhs


def commutation_report(left, right, probes, report=None):
    report = report or Report("commutation")
    c = report.add(Check(f"left and right actions commute [{left.name}, {right.name}]",
                         "Commutation"))
    for hs, a, gs in probes:
        run_probe(c, commutation_sides, (left, right, hs, a, gs), (hs, (a,), gs))
    return report


def commutation_probes(left, right, targets, samples=30, seed=0, max_len=2):
    import random
    rng = random.Random(seed)
    hp, gp = list(left.actor.pool), list(right.actor.pool)
    out = []
    for _ in range(samples):
        hs = tuple(rng.choice(hp) for _ in range(rng.randint(1, max_len))) if hp else ()
        gs = tuple(rng.choice(gp) for _ in range(rng.randint(1, max_len))) if gp else ()
        out.append((hs, rng.choice(targets), gs))
    return out


def check_commutation(left, right, probes):
    """True iff β_m(b.., β′_n(a, b′..)) = β′_n(β_m(b.., a), b′..) on every safe probe."""
    if left.side != "left" or right.side != "right":
        return False
    rep = commutation_report(left, right, probes)
    c = rep.checks[0]
    return c.failed == 0


def extend_two_sided(left, right, A, check=True, probes=None, pool_A=None, name=None):
    """B∞-structure on A ⊕ B′ ⊕ B from commuting left (of B) and right (of B′) actions."""
    _check_algebra_action(left, "left")
    _check_algebra_action(right, "right")
    if check:
        if probes is None:
            targets = list(pool_A if pool_A is not None else A.labels)
            probes = commutation_probes(left, right, targets)
        if not check_commutation(left, right, probes):
            rep = commutation_report(left, right, probes)
            raise ActionsDoNotCommute(f"{left.name} and {right.name}: "
                                      f"{rep.checks[0].witnesses[:1]}")
    total = _two_sided(A, left, right, name or f"{A.name} + {right.actor.name} + {left.actor.name}",
                       pool_A)
    return _result(total, ("A", "B'"), "B", left.actor)


def induced_bb_action(left, E1):
    """The action of B on the right extension E1 = A ⊕ B′: β on A-letters, zero on B′."""

    def beta(bs, x):
        tag, y = x
        if tag != "A":
            return {}
        return _tag("A", left.beta(bs, y))

    return ActionData(left.actor, E1, beta, "left", "bb", f"{left.name} on {E1.name}",
                      target_pool=E1.pool)


def two_step(left, right, A, pool_A=None, check=False):
    """extend_by_algebra with the right action, then extend_by_binfty with the induced action."""
    E1 = extend_by_algebra(right.actor, A, right, check=check, pool_A=pool_A).total
    act = induced_bb_action(left, E1)
    return extend_by_binfty(left.actor, E1, act, check=check, tag="B")


def compare_tables(S, T, probes, report=None, name="two constructions"):
    """Component-by-component equality of two structures on the same labels."""
    report = report or Report(f"compare {name}")
    c = report.add(Check(f"b and d tables agree [{name}]", "TableEquality"))
    for t in probes:
        for m in range(1, len(t)):
            run_probe(c, lambda: (S.bop(m, len(t) - m, t), T.bop(m, len(t) - m, t)), (), (t[:m], t[m:]))
        run_probe(c, lambda: (S.dop(len(t), t), T.dop(len(t), t)), (), (t,))
    return report
