"""Exact scalar arithmetic and sparse linear algebra over Q and F_p.

Every cohomology dimension in the package reduces to rank / kernel
computations done here.  Scalars are plain ``Fraction`` (rationals) or
``int`` residues in {0, ..., p-1}; which one is meant is decided by the
``Field`` object carried alongside.  There is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class Field:
    """Common interface for the two supported scalar fields."""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def elements(self):
        """Iterate over all field elements (finite fields only)."""
        raise TypeError(f"{self} is not finite")


class RationalField(Field):
    """Exact rationals.  Integral values are carried as plain ``int`` and
    only division introduces ``Fraction``; the two interoperate exactly
    (``int`` and ``Fraction`` compare and hash consistently), and keeping
    the common integer case on native ints is substantially faster."""

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        q = 1 / Fraction(a)
        return q.numerator if q.denominator == 1 else q

    def is_zero(self, a) -> bool:
        return a == 0

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def describe(self):
        return {"rational": True}


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or p >= 2**31:
            raise ValueError(f"prime must satisfy 2 <= p < 2^31, got {p}")
        for d in range(2, p):
            if d * d > p:
                break
            if p % d == 0:
                raise ValueError(f"{p} is not prime")
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def describe(self):
        return {"prime": self.p}


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


@dataclass
class Vector:
    """Sparse vector: index -> nonzero scalar."""

    length: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for i in self.entries:
            if not 0 <= i < self.length:
                raise IndexError(f"index {i} out of range for length {self.length}")

    def get(self, i, zero):
        return self.entries.get(i, zero)

    def is_zero(self):
        return not self.entries


@dataclass
class SparseMatrix:
    """Sparse matrix: (row, col) -> nonzero scalar, over a fixed field."""

    rows: int
    cols: int
    field: Field
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in list(self.entries.items()):
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i},{j}) out of range")
            if self.field.is_zero(v):
                del self.entries[(i, j)]

    def set(self, i, j, v):
        if self.field.is_zero(v):
            self.entries.pop((i, j), None)
        else:
            self.entries[(i, j)] = v

    def add_to(self, i, j, v):
        cur = self.entries.get((i, j))
        if cur is None:
            self.set(i, j, v)
        else:
            self.set(i, j, self.field.add(cur, v))

    def row_lists(self):
        """entries grouped by row: row -> {col: value}."""
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def mul_vector(self, v: Vector) -> Vector:
        if v.length != self.cols:
            raise ValueError("dimension mismatch")
        K = self.field
        out: dict = {}
        for (i, j), a in self.entries.items():
            x = v.entries.get(j)
            if x is None:
                continue
            out[i] = K.add(out.get(i, K.zero()), K.mul(a, x))
        return Vector(self.rows, {i: x for i, x in out.items() if not K.is_zero(x)})

    def mul_matrix(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows or self.field != other.field:
            raise ValueError("dimension or field mismatch")
        K = self.field
        mul, add = K.mul, K.add
        other_rows = other.row_lists()
        acc: dict = {}
        get = acc.get
        for (i, j), a in self.entries.items():
            row = other_rows[j]
            for k, b in row.items():
                key = (i, k)
                cur = get(key)
                ab = mul(a, b)
                acc[key] = ab if cur is None else add(cur, ab)
        entries = {k: v for k, v in acc.items() if not K.is_zero(v)}
        return SparseMatrix(self.rows, other.cols, K, entries)

    def is_zero(self):
        return not self.entries

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, self.field,
            {(j, i): v for (i, j), v in self.entries.items()},
        )


def _eliminate(M: SparseMatrix, rhs: Vector | None = None):
    """Gaussian elimination on a dense copy of M (augmented with rhs if given).

    Returns (pivot columns, reduced rows, reduced rhs).  Deterministic:
    rows are processed in order, pivots are the first nonzero column.
    """
    K = M.field
    zero = K.zero()
    rows = [dict(r) for r in M.row_lists()]
    b = [rhs.entries.get(i, zero) for i in range(M.rows)] if rhs is not None else None

    pivots: dict = {}  # col -> row index in `rows`
    for r in range(len(rows)):
        row = rows[r]
        # reduce against existing pivots
        while True:
            cols = [c for c in row if not K.is_zero(row[c])]
            if not cols:
                row.clear()
                break
            c = min(cols)
            pr = pivots.get(c)
            if pr is None:
                # normalize so the pivot entry is 1
                scale = K.inv(row[c])
                for cc in list(row):
                    v = K.mul(row[cc], scale)
                    if K.is_zero(v):
                        del row[cc]
                    else:
                        row[cc] = v
                if b is not None:
                    b[r] = K.mul(b[r], scale)
                pivots[c] = r
                break
            factor = row[c]
            prow = rows[pr]
            for cc, v in prow.items():
                w = K.sub(row.get(cc, zero), K.mul(factor, v))
                if K.is_zero(w):
                    row.pop(cc, None)
                else:
                    row[cc] = w
            if b is not None:
                b[r] = K.sub(b[r], K.mul(factor, b[pr]))
    return pivots, rows, b


def rank(M: SparseMatrix) -> int:
    """Exact rank over M's field."""
    pivots, _, _ = _eliminate(M)
    return len(pivots)


def kernel_basis(M: SparseMatrix) -> list[Vector]:
    """Basis of the null space; always cols - rank vectors, M v = 0 exactly."""
    K = M.field
    zero = K.zero()
    pivots, rows, _ = _eliminate(M)
    free_cols = [c for c in range(M.cols) if c not in pivots]
    # back-substitute each pivot row so rows are fully reduced (RREF);
    # descending order so every row used for reduction is already clean
    order = sorted(pivots)  # ascending pivot column
    for c in reversed(order):
        row = rows[pivots[c]]
        for c2 in [cc for cc in row if cc != c and cc in pivots]:
            factor = row.get(c2)
            if factor is None or K.is_zero(factor):
                continue
            prow = rows[pivots[c2]]
            for cc, v in prow.items():
                w = K.sub(row.get(cc, zero), K.mul(factor, v))
                if K.is_zero(w):
                    row.pop(cc, None)
                else:
                    row[cc] = w
    basis = []
    for fc in free_cols:
        entries = {fc: K.one()}
        for c in order:
            v = rows[pivots[c]].get(fc)
            if v is not None and not K.is_zero(v):
                entries[c] = K.neg(v)
        basis.append(Vector(M.cols, entries))
    return basis


def vstack(A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
    """Stack A on top of B (same column count and field)."""
    if A.cols != B.cols or A.field != B.field:
        raise ValueError("dimension or field mismatch")
    out = SparseMatrix(A.rows + B.rows, A.cols, A.field, dict(A.entries))
    for (i, j), v in B.entries.items():
        out.set(A.rows + i, j, v)
    return out


def from_columns(columns: list[Vector], rows: int, field_: Field) -> SparseMatrix:
    out = SparseMatrix(rows, len(columns), field_)
    for j, col in enumerate(columns):
        if col.length != rows:
            raise ValueError("column length mismatch")
        for i, v in col.entries.items():
            out.set(i, j, v)
    return out


def normalize_leading(field_: Field, v: Vector) -> Vector:
    """Scale so the first nonzero coefficient is 1 (stable representatives)."""
    if not v.entries:
        return v
    lead = v.entries[min(v.entries)]
    inv = field_.inv(lead)
    return Vector(v.length, {i: field_.mul(inv, x) for i, x in v.entries.items()})


def solve_in_image(M: SparseMatrix, b: Vector) -> Vector | None:
    """Some x with M x = b exactly, or None if b is not in the image."""
    if b.length != M.rows:
        raise ValueError("dimension mismatch")
    K = M.field
    zero = K.zero()
    pivots, rows, rb = _eliminate(M, b)
    # rows that reduced to zero must have zero rhs
    pivot_rows = set(pivots.values())
    for r in range(M.rows):
        if r not in pivot_rows and not K.is_zero(rb[r]):
            return None
    # back-substitution over the triangular pivot system
    order = sorted(pivots, reverse=True)
    x = {c: zero for c in pivots}
    for c in order:
        r = pivots[c]
        acc = rb[r]
        for cc, v in rows[r].items():
            if cc == c:
                continue
            xc = x.get(cc)
            if xc is not None and not K.is_zero(xc):
                acc = K.sub(acc, K.mul(v, xc))
        x[c] = acc
    entries = {c: v for c, v in x.items() if not K.is_zero(v)}
    sol = Vector(M.cols, entries)
    # exactness guard: the contract is M x = b exactly
    Mx = M.mul_vector(sol)
    diff_keys = set(Mx.entries) | set(b.entries)
    for i in diff_keys:
        if not K.is_zero(K.sub(Mx.entries.get(i, zero), b.entries.get(i, zero))):
            return None
    return sol
