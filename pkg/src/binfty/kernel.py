"""B∞-structures, composite braces, the identity checkers and Maurer–Cartan deformation.

A structure on s⁻¹B is given by two callables on basis tuples:
``b(m, n, labels)`` for m, n ≥ 1 and ``d(m, labels)``, each returning a vector.
The conventions b_{0,1} = b_{1,0} = Id and b_{0,k} = b_{k,0} = 0 (k ≠ 1) are
built in and never stored.
"""

import random
from fractions import Fraction
from itertools import product

from .errors import NotMaurerCartan, TruncationUnsound
from .graded import (TRUNCATION, homogeneous_degree, memoized_op, sign, tensor_vectors,
                     vec_add)
from .report import Check, Report

ONE = Fraction(1)


class BInftyStructure:
    """Families {b_{m,n}} (degree 0) and {d_m} (degree 1) on a carrier.

    carrier: anything with ``deg(label)``.  pool: labels used to build probes.
    weight: optional size function on labels (arity, filtration, ...) used only
    to steer random probe generation towards safe tuples.
    """

    def __init__(self, carrier, b=None, d=None, name="", pool=None, weight=None,
                 tag_of=None, max_inputs=None):
        self.carrier = carrier
        self.name = name
        self._b_raw = b
        self._d_raw = d
        self._b = memoized_op(b) if b else None
        self._d = memoized_op(d) if d else None
        self.pool = list(pool) if pool is not None else list(getattr(carrier, "labels", []))
        self.weight = weight
        self.tag_of = tag_of
        self.max_inputs = max_inputs

    def deg(self, label):
        return self.carrier.deg(label)

    def bop(self, m, n, labels):
        if m == 0 or n == 0:
            if m + n == 1:
                return {labels[0]: ONE}
            return {}
        if self._b is None:
            return {}
        if self.max_inputs is not None and m + n > self.max_inputs:
            raise TruncationUnsound(f"b_{{{m},{n}}} beyond the stored range")
        return self._b(m, n, tuple(labels))

    def dop(self, m, labels):
        if self._d is None or m == 0:
            return {}
        if self.max_inputs is not None and m > self.max_inputs:
            raise TruncationUnsound(f"d_{m} beyond the stored range")
        return self._d(m, tuple(labels))

    def b_on(self, m, n, element):
        """b_{m,n} extended linearly to {word: coeff} with words of length m+n."""
        out = {}
        for w, c in element.items():
            vec_add(out, self.bop(m, n, w), c)
        return out

    def d_on(self, m, element):
        out = {}
        for w, c in element.items():
            vec_add(out, self.dop(m, w), c)
        return out

    def with_d(self, d, name=None):
        out = BInftyStructure(self.carrier, self._b_raw, d, name or self.name, self.pool,
                              self.weight, self.tag_of, self.max_inputs)
        for attr in ("compare_projection", "modulus"):
            if hasattr(self, attr):
                setattr(out, attr, getattr(self, attr))
        return out

    def __repr__(self):
        return f"BInftyStructure({self.name or '?'})"


def zero_structure(carrier, name="zero"):
    return BInftyStructure(carrier, None, None, name)


# ---------------------------------------------------------------- composite brace


def _block_shapes(m, n, p):
    """All sequences of p pairs (i, j) ≠ (0, 0) with Σi = m, Σj = n."""
    if p == 0:
        if m == 0 and n == 0:
            yield ()
        return
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            if (m - i) + (n - j) < p - 1:
                continue
            for rest in _block_shapes(m - i, n - j, p - 1):
                yield ((i, j),) + rest


def composite_brace(B, us, vs, p):
    """b_p(u1..um; v1..vn) as {word of weight p: coeff}.

    The sign of each term is the Koszul sign of the shuffle that interleaves
    the u-blocks and v-blocks.
    """
    us, vs = tuple(us), tuple(vs)
    m, n = len(us), len(vs)
    if p < 1 or m + n < p:
        return {}
    du = [B.deg(x) for x in us]
    dv = [B.deg(x) for x in vs]
    out = {}
    for shape in _block_shapes(m, n, p):
        e = 0
        iu = jv = 0
        values = []
        for q, (i, j) in enumerate(shape):
            ublock, vblock = us[iu:iu + i], vs[jv:jv + j]
            # v-block passes the u-letters of all later blocks
            e += sum(dv[jv:jv + j]) * sum(du[iu + i:])
            iu += i
            jv += j
            val = B.bop(i, j, ublock + vblock)
            if not val:
                values = None
                break
            values.append(val)
        if values is None:
            continue
        vec_add(out, tensor_vectors(values), sign(e))
    return out


def coderivation_lift(B, p, word):
    """d̂_p(word) = Σ_i (−1)^{v1+..+vi} (v1..vi, d_p(v_{i+1}..v_{i+p}), ..)."""
    out = {}
    run = 0
    n = len(word)
    for i in range(n - p + 1):
        val = B.dop(p, word[i:i + p])
        if val:
            s = sign(run)
            for x, c in val.items():
                key = word[:i] + (x,) + word[i + p:]
                vec_add(out, {key: s * c})
        run += B.deg(word[i])
    return out


# ---------------------------------------------------------------- identity sides


def associativity_sides(B, u, v, w):
    l, m, n = len(u), len(v), len(w)
    lhs, rhs = {}, {}
    for p in range(1, l + m + 1):
        for word, c in composite_brace(B, u, v, p).items():
            vec_add(lhs, B.bop(p, n, word + w), c)
    for p in range(1, m + n + 1):
        for word, c in composite_brace(B, v, w, p).items():
            vec_add(rhs, B.bop(l, p, u + word), c)
    return lhs, rhs


def leibniz_sides(B, u, v):
    m, n = len(u), len(v)
    lhs, rhs = {}, {}
    for p in range(1, m + n + 1):
        for word, c in composite_brace(B, u, v, p).items():
            vec_add(lhs, B.dop(p, word), c)
    for p in range(1, m + 1):
        for word, c in coderivation_lift(B, p, u).items():
            vec_add(rhs, B.bop(m - p + 1, n, word + v), c)
    su = sign(sum(B.deg(x) for x in u))
    for p in range(1, n + 1):
        for word, c in coderivation_lift(B, p, v).items():
            vec_add(rhs, B.bop(m, n - p + 1, u + word), su * c)
    return lhs, rhs


def ainfty_sides(B, v):
    n = len(v)
    lhs = {}
    for mm in range(1, n + 1):
        l = n + 1 - mm
        for word, c in coderivation_lift(B, mm, v).items():
            vec_add(lhs, B.dop(l, word), c)
    return lhs, {}


def evaluate_safely(fn, *args):
    """Run fn; return (result, safe) where safe means no cutoff was touched."""
    before = TRUNCATION.count
    try:
        result = fn(*args)
    except TruncationUnsound:
        return None, False
    return result, TRUNCATION.count == before


def run_probe(check, fn, args, probe, project=None):
    """Evaluate both sides; project (e.g. modulo a filtration) before comparing."""
    sides, safe = evaluate_safely(fn, *args)
    if not safe:
        check.skip(probe)
        return
    lhs, rhs = sides
    if project is not None:
        lhs, rhs = project(lhs), project(rhs)
    check.record(lhs == rhs, probe, lhs, rhs)


# ---------------------------------------------------------------- probes


def _tuples_from(pool, k, rng, samples, exhaustive_limit, budget, weight):
    if not pool:
        return []
    total = len(pool) ** k
    if total <= exhaustive_limit:
        out = [t for t in product(pool, repeat=k)]
        if budget is not None and weight is not None:
            out = [t for t in out if sum(weight(x) for x in t) <= budget]
        return out
    out, seen = [], set()
    tries = 0
    while len(out) < samples and tries < samples * 60:
        tries += 1
        t = tuple(rng.choice(pool) for _ in range(k))
        if budget is not None and weight is not None and sum(weight(x) for x in t) > budget:
            continue
        if t in seen:
            continue
        seen.add(t)
        out.append(t)
    return out


def stratified_tuples(B, k, rng, samples, exhaustive_limit, budget=None):
    """Probe tuples of length k; stratified by summand tag when the carrier is a sum."""
    if B.tag_of is None:
        return _tuples_from(B.pool, k, rng, samples, exhaustive_limit, budget, B.weight)
    pools = {}
    for x in B.pool:
        pools.setdefault(B.tag_of(x), []).append(x)
    tags = sorted(pools)
    out = []
    patterns = list(product(tags, repeat=k))
    per = max(2, samples // len(patterns))
    for pat in patterns:
        sub_total = 1
        for t in pat:
            sub_total *= len(pools[t])
        if sub_total <= max(per, 4):
            cands = [tp for tp in product(*[pools[t] for t in pat])]
            if budget is not None and B.weight is not None:
                cands = [tp for tp in cands if sum(B.weight(x) for x in tp) <= budget]
            out.extend(cands)
            continue
        seen = set()
        tries = 0
        while len(seen) < per and tries < per * 40:
            tries += 1
            tp = tuple(rng.choice(pools[t]) for t in pat)
            if budget is not None and B.weight is not None and sum(B.weight(x) for x in tp) > budget:
                continue
            if tp not in seen:
                seen.add(tp)
                out.append(tp)
    return out


def default_shapes(max_total):
    assoc = [(l, m, n) for l in range(1, max_total) for m in range(1, max_total)
             for n in range(1, max_total) if l + m + n <= max_total]
    leib = [(m, n) for m in range(1, max_total) for n in range(1, max_total) if m + n <= max_total]
    ainf = list(range(1, max_total + 1))
    return assoc, leib, ainf


def generate_probes(B, max_total=4, samples=60, seed=0, exhaustive_limit=400, budget_slack=None):
    """Probe tuples for verify_binfty: dict kind → list of split tuples."""
    rng = random.Random(seed)
    assoc, leib, ainf = default_shapes(max_total)
    probes = {"associativity": [], "leibniz": [], "ainfty": []}
    for shape in assoc:
        k = sum(shape)
        budget = None if budget_slack is None else budget_slack + k - 1
        for t in stratified_tuples(B, k, rng, samples, exhaustive_limit, budget):
            l, m, _ = shape
            probes["associativity"].append((t[:l], t[l:l + m], t[l + m:]))
    for shape in leib:
        k = sum(shape)
        budget = None if budget_slack is None else budget_slack + k - 2
        for t in stratified_tuples(B, k, rng, samples, exhaustive_limit, budget):
            probes["leibniz"].append((t[:shape[0]], t[shape[0]:]))
    for k in ainf:
        budget = None if budget_slack is None else budget_slack + k - 3
        for t in stratified_tuples(B, k, rng, samples, exhaustive_limit, budget):
            probes["ainfty"].append((t,))
    return probes


def verify_binfty(B, probes, report=None, label=""):
    """Evaluate associativity, Leibniz and the A∞ identity on every probe.

    probes: {"associativity": [(u, v, w)], "leibniz": [(u, v)], "ainfty": [(v,)]}.
    Tuples touching a cutoff are skipped and counted, never checked.
    """
    report = report or Report(f"verify_binfty {label or B.name}")
    suffix = f" [{label or B.name}]"
    project = getattr(B, "compare_projection", None)
    modulus = getattr(B, "modulus", None)
    c_assoc = report.add(Check("associativity" + suffix, "Associativity", modulus))
    c_leib = report.add(Check("leibniz" + suffix, "Leibniz", modulus))
    c_ainf = report.add(Check("a-infinity square zero" + suffix, "AInfty", modulus))
    for u, v, w in probes.get("associativity", []):
        run_probe(c_assoc, associativity_sides, (B, u, v, w), (u, v, w), project)
    for u, v in probes.get("leibniz", []):
        run_probe(c_leib, leibniz_sides, (B, u, v), (u, v), project)
    for (v,) in probes.get("ainfty", []):
        run_probe(c_ainf, ainfty_sides, (B, v), v, project)
    return report


# ---------------------------------------------------------------- Maurer–Cartan


def element_components(b0, labels=()):
    """The finite part of b0 relevant for inputs `labels` (b0 may be lazy)."""
    if hasattr(b0, "components_for"):
        return b0.components_for(labels)
    return b0


def mc_residual(B, b0):
    """d_1(b0) + b_{1,1}(b0, b0)."""
    comps = element_components(b0)
    out = {}
    for x, c in comps.items():
        vec_add(out, B.dop(1, (x,)), c)
    for x, c in comps.items():
        for y, c2 in comps.items():
            vec_add(out, B.bop(1, 1, (x, y)), c * c2)
    return out


def mc_check(B, b0):
    """True iff d_1(b0) + b_{1,1}(b0, b0) = 0 (within the structure's cutoffs)."""
    comps = element_components(b0)
    if comps and homogeneous_degree(comps, B.deg) != 1:
        return False
    return not mc_residual(B, b0)


def deform_mc(B, b0, check=True, name=None):
    """The deformation d^{b0}_m = d_m + b_{1,m}(b0, ..) + (−1)^{Σ+1} b_{m,1}(.., b0)."""
    if check and not mc_check(B, b0):
        raise NotMaurerCartan("d1(b0) + b11(b0, b0) is not zero")
    if not element_components(b0):
        return B

    def d(m, labels):
        out = dict(B.dop(m, labels))
        comps = element_components(b0, labels)
        s = sign(sum(B.deg(x) for x in labels) + 1)
        for y, c in comps.items():
            vec_add(out, B.bop(1, m, (y,) + labels), c)
            vec_add(out, B.bop(m, 1, labels + (y,)), s * c)
        return out

    return B.with_d(d, name or f"{B.name}^b0")
