"""Exact rational scalars, sparse matrices and rank/kernel computations."""

from fractions import Fraction

from .errors import DivisionByZero

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(x):
    """Coerce an int, Fraction or "p/q" string into a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            if int(q) == 0:
                raise DivisionByZero(f"zero denominator in {x!r}")
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    raise TypeError(f"cannot read {x!r} as an exact rational")


def format_rational(q):
    q = rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_arith(a, b, op):
    """Exact arithmetic on rationals; `b` is ignored for unary ops."""
    a = rational(a)
    if op == "add":
        return a + rational(b)
    if op == "sub":
        return a - rational(b)
    if op == "mul":
        return a * rational(b)
    if op == "neg":
        return -a
    if op == "inv":
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / a
    if op == "div":
        b = rational(b)
        if b == 0:
            raise DivisionByZero("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


class SparseMatrix:
    """rows x cols matrix stored as {(row, col): Fraction} without zeros."""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = rational(v)
            if v:
                self.entries[(r, c)] = self.entries.get((r, c), ZERO) + v
                if not self.entries[(r, c)]:
                    del self.entries[(r, c)]

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        entries = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(len(rows), ncols, entries)

    @classmethod
    def from_columns(cls, columns, nrows):
        """Build from a list of sparse column vectors {row: value}."""
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                entries[(i, j)] = v
        return cls(nrows, len(columns), entries)

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def apply(self, vec):
        """Matrix times a column vector given as a sequence or {col: value}."""
        if not isinstance(vec, dict):
            vec = {j: rational(v) for j, v in enumerate(vec) if v}
        out = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x:
                out[r] = out.get(r, ZERO) + v * x
        return {r: v for r, v in out.items() if v}

    def to_dense(self):
        m = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            m[r][c] = v
        return m

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def _reduce_against(row, pivots):
    # pivots: {col: normalized reduced row}; eliminate every pivot column from row
    for c in sorted(set(row) & set(pivots)):
        v = row.get(c)
        if not v:
            continue
        for k, w in pivots[c].items():
            x = row.get(k, ZERO) - v * w
            if x:
                row[k] = x
            else:
                row.pop(k, None)
    return row


def rref(rows):
    """Reduced row echelon form of sparse rows; returns {pivot_col: row}."""
    pivots = {}
    for row in rows:
        row = {c: rational(v) for c, v in row.items() if v}
        while True:
            hit = set(row) & set(pivots)
            if not hit:
                break
            _reduce_against(row, pivots)
        if not row:
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {c: v * inv for c, v in row.items()}
        for c, prow in pivots.items():
            v = prow.get(lead)
            if v:
                for k, w in row.items():
                    x = prow.get(k, ZERO) - v * w
                    if x:
                        prow[k] = x
                    else:
                        prow.pop(k, None)
        pivots[lead] = row
    return dict(sorted(pivots.items()))


def rank(m):
    return len(rref(m.row_dicts()))


def rank_kernel(m):
    """Rank and a kernel basis (list of {col: value}) in reduced echelon form."""
    pivots = rref(m.row_dicts())
    free = [j for j in range(m.cols) if j not in pivots]
    kernel = []
    for j in free:
        v = {j: ONE}
        for p, row in pivots.items():
            x = row.get(j)
            if x:
                v[p] = -x
        kernel.append(v)
    basis = list(rref(kernel).values())
    return len(pivots), basis


def dense_vector(v, n):
    return tuple(v.get(j, ZERO) for j in range(n))


class Span:
    """Incrementally maintained row space for membership tests."""

    def __init__(self, vectors=()):
        self.pivots = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v):
        row = {c: rational(x) for c, x in v.items() if x}
        while set(row) & set(self.pivots):
            _reduce_against(row, self.pivots)
        return row

    def add(self, v):
        row = self.reduce(v)
        if not row:
            return False
        lead = min(row)
        inv = 1 / row[lead]
        row = {c: x * inv for c, x in row.items()}
        for prow in self.pivots.values():
            x = prow.get(lead)
            if x:
                for k, w in row.items():
                    y = prow.get(k, ZERO) - x * w
                    if y:
                        prow[k] = y
                    else:
                        prow.pop(k, None)
        self.pivots[lead] = row
        return True

    def __contains__(self, v):
        return not self.reduce(v)

    def __len__(self):
        return len(self.pivots)
