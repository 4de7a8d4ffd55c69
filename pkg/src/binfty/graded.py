"""Graded spaces, Koszul signs, sparse multilinear maps and tensor (co)algebra lifts.

Vectors are plain dicts {basis label: Fraction} with no stored zeros.  Words of a
tensor (co)algebra are tuples of basis labels, so an element of a tensor
(co)algebra is a dict {tuple: Fraction}.  Degrees are always supplied by a
space-level degree function.
"""

from fractions import Fraction
from itertools import combinations, product

from .errors import InvalidPermutation, NotAMorphismDatum, NotHomogeneous
from .linalg import rational

# ---------------------------------------------------------------- vectors


def vec_add(acc, vec, coeff=1):
    """acc += coeff * vec, in place; returns acc."""
    if not coeff:
        return acc
    for k, v in vec.items():
        x = acc.get(k, 0) + coeff * v
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def vec_sum(*vecs):
    out = {}
    for v in vecs:
        vec_add(out, v)
    return out


def vec_scale(vec, coeff):
    coeff = rational(coeff)
    return {k: coeff * v for k, v in vec.items()} if coeff else {}


def vec_sub(a, b):
    return vec_add(dict(a), b, -1)


def basis_vector(label):
    return {label: Fraction(1)}


def tensor_vectors(vecs):
    """Expand v1 ⊗ ... ⊗ vk (each a vector over letters) into {word: coeff}."""
    out = {(): Fraction(1)}
    for v in vecs:
        if not v:
            return {}
        nxt = {}
        for w, c in out.items():
            for k, x in v.items():
                key = w + (k,)
                nxt[key] = nxt.get(key, 0) + c * x
        out = {k: c for k, c in nxt.items() if c}
    return out


def homogeneous_degree(vec, deg):
    """The common degree of the components of vec (None for the zero vector)."""
    degrees = {deg(k) for k in vec}
    if len(degrees) > 1:
        raise NotHomogeneous(f"components in degrees {sorted(degrees)}")
    return degrees.pop() if degrees else None


def word_degree(word, deg):
    return sum(deg(x) for x in word)


def sign(exponent):
    return -1 if exponent % 2 else 1


# ---------------------------------------------------------------- spaces


class GradedSpace:
    """A finite graded space with an ordered basis of (label, degree) pairs."""

    def __init__(self, basis, name=""):
        self.name = name
        self.labels = []
        self._deg = {}
        for label, d in basis:
            if label in self._deg:
                raise ValueError(f"duplicate basis label {label!r}")
            self.labels.append(label)
            self._deg[label] = int(d)
        self.index = {label: i for i, label in enumerate(self.labels)}

    def deg(self, label):
        return self._deg[label]

    def degrees(self):
        return sorted(set(self._deg.values()))

    def in_degree(self, d):
        return [x for x in self.labels if self._deg[x] == d]

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return len(self.labels)

    def __contains__(self, label):
        return label in self._deg

    def basis(self):
        return [(x, self._deg[x]) for x in self.labels]

    def __repr__(self):
        return f"GradedSpace({self.name or '?'}, dim={len(self)})"


def suspend(space, shift=1, prefix="s", name=None):
    """s·V (shift=+1, degrees drop by one) or s⁻¹·V (shift=-1)."""
    basis = [(prefix + str(x), d - shift) for x, d in space.basis()]
    return GradedSpace(basis, name or f"{prefix}{space.name}")


def direct_sum(parts, name=""):
    """Tagged direct sum: labels become (tag, label)."""
    basis = [((tag, x), sp.deg(x)) for tag, sp in parts for x in sp]
    return GradedSpace(basis, name)


class HomSpace(GradedSpace):
    """Elementary cochains (inputs, output) of Hom(⊕ S^m, T) for lo ≤ m ≤ max_arity.

    The degree of (inputs, output) is deg(output) - Σ deg(inputs).
    """

    def __init__(self, source, target, max_arity, min_arity=1, name=""):
        self.source = source
        self.target = target
        self.max_arity = max_arity
        self.min_arity = min_arity
        basis = []
        for m in range(min_arity, max_arity + 1):
            for ins in product(source.labels, repeat=m):
                din = sum(source.deg(x) for x in ins)
                for out in target.labels:
                    basis.append(((ins, out), target.deg(out) - din))
        super().__init__(basis, name)

    def arity(self, label):
        return len(label[0])

    def of_arity(self, m):
        return [x for x in self.labels if len(x[0]) == m]


def cochain_degree(label, src_deg, tgt_deg):
    ins, out = label
    return tgt_deg(out) - sum(src_deg(x) for x in ins)


# ---------------------------------------------------------------- truncation bookkeeping


class _TruncationCounter:
    """Counts every term dropped by a cutoff; checkers compare before/after."""

    def __init__(self):
        self.count = 0


TRUNCATION = _TruncationCounter()


def note_truncation():
    TRUNCATION.count += 1


def memoized_op(fn):
    """Memoize fn(*key); a cached value replays the truncation it caused."""
    cache = {}

    def wrapper(*key):
        hit = cache.get(key)
        if hit is None:
            before = TRUNCATION.count
            value = fn(*key)
            hit = (value, TRUNCATION.count != before)
            cache[key] = hit
        elif hit[1]:
            TRUNCATION.count += 1
        return hit[0]

    wrapper.cache = cache
    return wrapper


# ---------------------------------------------------------------- Koszul signs


def koszul_sign(degrees, permutation):
    """Sign of moving elements of the given degrees into the order `permutation`.

    permutation[k] is the (0-based) original position of the element placed k-th.
    """
    n = len(degrees)
    perm = list(permutation)
    if sorted(perm) != list(range(n)):
        raise InvalidPermutation(f"{permutation!r} is not a permutation of 0..{n - 1}")
    e = 0
    for a in range(n):
        for b in range(a + 1, n):
            i, j = perm[a], perm[b]
            if i > j:
                e += degrees[i] * degrees[j]
    return sign(e)


# ---------------------------------------------------------------- multilinear maps


class MultiMap:
    """A homogeneous multilinear map stored as {inputs tuple: output vector}.

    Several arities may coexist (a cochain with components in many arities).
    """

    def __init__(self, table, degree, name=""):
        self.degree = degree
        self.name = name
        self.table = {}
        for ins, out in table.items():
            out = {k: rational(v) for k, v in out.items() if v}
            if out:
                self.table[tuple(ins)] = out
        self.arities = sorted({len(k) for k in self.table})

    def __call__(self, inputs):
        return self.table.get(tuple(inputs), {})

    @classmethod
    def from_cochain(cls, vec, degree=None, src_deg=None, tgt_deg=None, name=""):
        """Turn a vector over elementary cochain labels into a map."""
        if degree is None:
            degree = homogeneous_degree(vec, lambda l: cochain_degree(l, src_deg, tgt_deg))
            degree = 0 if degree is None else degree
        table = {}
        for (ins, out), c in vec.items():
            table.setdefault(ins, {})
            vec_add(table[ins], {out: c})
        return cls(table, degree, name)

    def to_cochain(self):
        return {(ins, k): c for ins, out in self.table.items() for k, c in out.items()}

    def scaled(self, c):
        return MultiMap({k: vec_scale(v, c) for k, v in self.table.items()}, self.degree, self.name)

    def __eq__(self, other):
        return isinstance(other, MultiMap) and self.table == other.table and (
            self.degree == other.degree or not self.table)

    def __repr__(self):
        return f"MultiMap({self.name or '?'}, deg={self.degree}, entries={len(self.table)})"


def check_map_degrees(m, src_deg, tgt_deg):
    """Every stored image is homogeneous of degree Σ deg(inputs) + deg(map)."""
    for ins, out in m.table.items():
        want = sum(src_deg(x) for x in ins) + m.degree
        for k in out:
            if tgt_deg(k) != want:
                return False
    return True


def multi_insert_apply(maps, word, deg):
    """Σ over order-preserving disjoint consecutive placements of the maps on word.

    Untouched letters are kept; each map picks up the Koszul sign of passing the
    letters that precede its block.  Returns {word: coeff}.
    """
    out = {}
    n = len(word)
    prefix_deg = [0]
    for x in word:
        prefix_deg.append(prefix_deg[-1] + deg(x))
    one = Fraction(1)

    def rec(j, pos, parts, coeff):
        if j == len(maps):
            parts = parts + [{x: one} for x in word[pos:]]
            vec_add(out, tensor_vectors(parts), coeff)
            return
        f = maps[j]
        for start in range(pos, n):
            for p in f.arities:
                if start + p > n:
                    continue
                val = f(word[start:start + p])
                if val:
                    rec(j + 1, start + p,
                        parts + [{x: one} for x in word[pos:start]] + [val],
                        coeff * sign(f.degree * prefix_deg[start]))

    rec(0, 0, [], one)
    return out


def lift_coderivation(alpha, word, deg):
    """α̂(v1..vn) = Σ_i (−1)^{|α|(v1+..+vi)} v1..vi α(v_{i+1}..v_{i+p}) .. vn."""
    return multi_insert_apply([alpha], word, deg)


def lift_coderivation_tensor(alpha, element, deg):
    out = {}
    for w, c in element.items():
        vec_add(out, lift_coderivation(alpha, w, deg), c)
    return out


def compositions(n, parts=None):
    """Ordered compositions of n into positive parts (optionally exactly `parts` of them)."""
    if n == 0:
        if parts in (None, 0):
            yield ()
        return
    if parts == 0:
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first, None if parts is None else parts - 1):
            yield (first,) + rest


def lift_coalgebra_morphism(psi, word, max_weight=None):
    """ψ̃(word) = Σ over decompositions into consecutive blocks of ψ(b1) ⊗ .. ⊗ ψ(bk).

    psi is a MultiMap (components of several arities allowed) of degree 0.
    """
    if psi.table and psi.degree != 0:
        raise NotAMorphismDatum(f"component of degree {psi.degree} in a coalgebra morphism datum")
    out = {}
    n = len(word)
    for comp in compositions(n):
        if max_weight is not None and len(comp) > max_weight:
            note_truncation()
            continue
        vals = []
        pos = 0
        for p in comp:
            v = psi(word[pos:pos + p])
            if not v:
                break
            vals.append(v)
            pos += p
        else:
            vec_add(out, tensor_vectors(vals))
    return out


def lift_derivation(e, element, deg):
    """Leibniz extension of e (generator → element of T(W)) to element ∈ T(W).

    e is a MultiMap of arity 1 whose values are vectors over words.
    """
    out = {}
    for w, c in element.items():
        run = 0
        for i, x in enumerate(w):
            val = e((x,))
            if val:
                s = c * sign(e.degree * run)
                for ww, cc in val.items():
                    key = w[:i] + tuple(ww) + w[i + 1:]
                    vec_add(out, {key: s * cc})
            run += deg(x)
    return out


# ---------------------------------------------------------------- braces


def brace_elementary(head, args, arg_degree, letter_degree, fill=False):
    """head{args} for elementary cochains (inputs, output).

    Each arg is inserted into a slot of head whose letter equals the arg's
    output; slots are chosen order-preservingly.  Unused slots stay as
    identities unless fill=True, in which case every slot must be used.
    The sign is Π_j (−1)^{|arg_j| · (degrees of the new inputs before arg_j)}.
    """
    hin, hout = head
    k, n = len(hin), len(args)
    if n > k or (fill and n != k):
        return {}
    if n == 0:
        return {head: Fraction(1)}
    out = {}
    adeg = [arg_degree(a) for a in args]
    slot_choices = combinations(range(k), n) if not fill else [tuple(range(k))]
    for slots in slot_choices:
        if any(hin[s] != args[j][1] for j, s in enumerate(slots)):
            continue
        new_in = []
        e = 0
        run = 0
        j = 0
        for i, x in enumerate(hin):
            if j < n and slots[j] == i:
                e += adeg[j] * run
                for y in args[j][0]:
                    new_in.append(y)
                    run += letter_degree(y)
                j += 1
            else:
                new_in.append(x)
                run += letter_degree(x)
        label = (tuple(new_in), hout)
        out[label] = out.get(label, 0) + sign(e)
        if not out[label]:
            del out[label]
    return {k2: Fraction(v) for k2, v in out.items()}


def brace_compose(head, args, letter_degree, max_arity=None, fill=False):
    """The brace head{args} of MultiMaps; components of arity > max_arity are dropped."""
    degree = head.degree + sum(a.degree for a in args)
    table = {}
    head_cochain = head.to_cochain()
    arg_cochains = [a.to_cochain() for a in args]
    arg_deg = {}
    for a, ch in zip(args, arg_cochains):
        for lab in ch:
            arg_deg[lab] = a.degree
    for hl, hc in head_cochain.items():
        for combo in product(*[list(ch.items()) for ch in arg_cochains]):
            labels = [lab for lab, _ in combo]
            coeff = hc
            for _, c in combo:
                coeff *= c
            for (ins, out), s in brace_elementary(
                    hl, labels, arg_deg.__getitem__, letter_degree, fill).items():
                if max_arity is not None and len(ins) > max_arity:
                    note_truncation()
                    continue
                table.setdefault(ins, {})
                vec_add(table[ins], {out: coeff * s})
    return MultiMap(table, degree)


# ---------------------------------------------------------------- tensor coalgebra


class TruncatedTensorCoalgebra:
    """T^c(V) = ⊕_{0<n≤F} V^⊗n with deconcatenation coproduct."""

    def __init__(self, cogenerators, max_weight):
        self.cogenerators = cogenerators
        self.max_weight = max_weight

    def deg(self, word):
        return sum(self.cogenerators.deg(x) for x in word)

    def words(self, weight):
        return [tuple(w) for w in product(self.cogenerators.labels, repeat=weight)]

    def all_words(self):
        return [w for n in range(1, self.max_weight + 1) for w in self.words(n)]

    @staticmethod
    def coproduct(word):
        """Δ(w) as a list of ((w1, w2), 1) over splits into two nonempty words."""
        if not word:
            raise ValueError("empty words do not exist")
        return {(word[:i], word[i:]): Fraction(1) for i in range(1, len(word))}

    def coproduct_of(self, element):
        out = {}
        for w, c in element.items():
            vec_add(out, self.coproduct(w), c)
        return out


def tensor_map_pair(f, g, pair_element, deg_left, degree_g):
    """(f ⊗ g) applied to Σ c (w1, w2) with the Koszul sign (−1)^{|g|·|w1|}.

    f and g map a word to a {word: coeff} vector.
    """
    out = {}
    for (w1, w2), c in pair_element.items():
        a = f(w1)
        if not a:
            continue
        b = g(w2)
        if not b:
            continue
        s = c * sign(degree_g * deg_left(w1))
        for x, cx in a.items():
            for y, cy in b.items():
                vec_add(out, {(x, y): s * cx * cy})
    return out
