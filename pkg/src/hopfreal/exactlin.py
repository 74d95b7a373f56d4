"""Exact linear algebra over the rationals.

The computational substrate for everything else in the package: sparse
matrices with ``fractions.Fraction`` entries, reduced row echelon form,
canonical nullspace bases, exact linear solves, and incrementally maintained
subspace bases keyed by arbitrary orderable labels.

All arithmetic is exact, so "is this vector in that span?" is a decidable
yes/no question; that is what turns the algebraic identities downstream into
testable equalities.

Sparse vectors are plain dicts ``key -> Fraction`` with no stored zeros.
"""

from __future__ import annotations

from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def vec_add_scaled(dst: dict, src: dict, coeff: Fraction) -> dict:
    """In place dst += coeff * src, dropping entries that cancel to zero."""
    if coeff:
        for k, v in src.items():
            w = dst.get(k, ZERO) + coeff * v
            if w:
                dst[k] = w
            else:
                dst.pop(k, None)
    return dst


def vec_scale(v: dict, coeff: Fraction) -> dict:
    if not coeff:
        return {}
    return {k: coeff * c for k, c in v.items()}


def vec_clean(v: dict) -> dict:
    """Copy of v without zero entries, coefficients coerced to Fraction."""
    return {k: Fraction(c) for k, c in v.items() if c}


class Matrix:
    """Sparse exact-rational matrix; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, data) -> "Matrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(r, c): v for r, row in enumerate(data)
                                for c, v in enumerate(row) if v})

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    def get(self, r: int, c: int) -> Fraction:
        return self.entries.get((r, c), ZERO)

    def to_rows(self) -> list:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_maps(self) -> list:
        """Row-major view: list of dicts col -> value."""
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def col_maps(self) -> list:
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {len(self.entries)} nonzero)"


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("shape mismatch")
    entries = dict(a.entries)
    vec_add_scaled(entries, b.entries, ONE)
    return Matrix(a.rows, a.cols, entries)


def mat_scale(a: Matrix, coeff: Fraction) -> Matrix:
    return Matrix(a.rows, a.cols, vec_scale(a.entries, coeff))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ValueError("shape mismatch")
    b_rows = b.row_maps()
    out = {}
    for (r, k), v in a.entries.items():
        for c, w in b_rows[k].items():
            key = (r, c)
            s = out.get(key, ZERO) + v * w
            if s:
                out[key] = s
            else:
                del out[key]
    return Matrix(a.rows, b.cols, out)


def mat_vec(a: Matrix, v: dict) -> dict:
    """Apply a to a sparse coordinate vector (col -> value)."""
    out = {}
    for (r, c), w in a.entries.items():
        x = v.get(c)
        if x:
            s = out.get(r, ZERO) + w * x
            if s:
                out[r] = s
            else:
                del out[r]
    return out


def _rref_rows(rows: list, cols: int):
    """Full Gauss-Jordan on a list of sparse row dicts (mutated); returns pivots."""
    pivots = []
    pr = 0
    nrows = len(rows)
    for c in range(cols):
        pivot = None
        for r in range(pr, nrows):
            if c in rows[r]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pr], rows[pivot] = rows[pivot], rows[pr]
        inv = ONE / rows[pr][c]
        rows[pr] = {k: v * inv for k, v in rows[pr].items()}
        lead = rows[pr]
        for r in range(nrows):
            if r != pr and c in rows[r]:
                vec_add_scaled(rows[r], lead, -rows[r][c])
        pivots.append(c)
        pr += 1
        if pr == nrows:
            break
    return pivots


def rref(m: Matrix):
    """Reduced row echelon form and pivot column indices; exact."""
    rows = m.row_maps()
    pivots = _rref_rows(rows, m.cols)
    entries = {(r, c): v for r, row in enumerate(rows) for c, v in row.items()}
    return Matrix(m.rows, m.cols, entries), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> list:
    """Canonical basis of the null space, as sparse dicts col -> Fraction.

    One basis vector per free column, in increasing free-column order, with
    coefficient 1 at the free column (the vector's leading coefficient).
    """
    red, pivots = rref(m)
    rows = red.row_maps()
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = {f: ONE}
        for k, p in enumerate(pivots):
            val = rows[k].get(f)
            if val:
                v[p] = -val
        basis.append(v)
    return basis


def solve(m: Matrix, rhs: dict):
    """One exact solution x of m x = rhs (free variables set to 0), or None.

    rhs is a sparse dict row -> Fraction.  The solution is the canonical
    particular solution read off the reduced echelon form, so it is
    deterministic for a given matrix.
    """
    rows = m.row_maps()
    aug = m.cols
    for r, v in rhs.items():
        if v:
            if not (0 <= r < m.rows):
                raise IndexError("rhs index out of range")
            rows[r][aug] = Fraction(v)
    pivots = _rref_rows(rows, aug + 1)
    if pivots and pivots[-1] == aug:
        return None
    sol = {}
    for k, p in enumerate(pivots):
        val = rows[k].get(aug)
        if val:
            sol[p] = val
    return sol


def membership(v: dict, span: list) -> bool:
    """True iff sparse vector v lies in the linear span of the given vectors."""
    basis = SpanBasis()
    for s in span:
        basis.add(s)
    return basis.contains(v)


class SpanBasis:
    """Incrementally maintained canonical basis of a subspace of sparse vectors.

    Vectors are dicts ``key -> Fraction`` over arbitrary hashable keys; the
    pivot of a row is its largest key under ``keyfunc``.  Rows are normalized
    (pivot coefficient 1) and fully inter-reduced, so the stored rows form
    the canonical reduced basis of the span, independent of insertion order.
    """

    def __init__(self, keyfunc=None):
        self._key = keyfunc if keyfunc is not None else (lambda k: k)
        self._rows = {}    # pivot key -> row dict
        self._where = {}   # key -> set of pivots of rows whose tail contains key

    @property
    def dim(self) -> int:
        return len(self._rows)

    def pivots(self) -> list:
        return sorted(self._rows, key=self._key)

    def basis(self) -> list:
        """Rows in increasing pivot order (canonical)."""
        return [dict(self._rows[p]) for p in self.pivots()]

    def reduce(self, vec: dict) -> dict:
        """Canonical representative of vec modulo the current span."""
        v = vec_clean(vec)
        while True:
            reducible = [k for k in v if k in self._rows]
            if not reducible:
                return v
            k = max(reducible, key=self._key)
            coeff = v.pop(k)
            for k2, c2 in self._rows[k].items():
                if k2 == k:
                    continue
                w = v.get(k2, ZERO) - coeff * c2
                if w:
                    v[k2] = w
                else:
                    v.pop(k2, None)

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict) -> bool:
        """Add a vector to the span; True iff it added a new direction."""
        v = self.reduce(vec)
        if not v:
            return False
        p = max(v, key=self._key)
        inv = ONE / v[p]
        row = {k: c * inv for k, c in v.items()}
        # Inter-reduce: eliminate the new pivot from every existing row tail.
        for q in list(self._where.get(p, ())):
            other = self._rows[q]
            coeff = other[p]
            for k in other:
                if k != q:
                    self._where[k].discard(q)
            vec_add_scaled(other, row, -coeff)
            for k in other:
                if k != q:
                    self._where.setdefault(k, set()).add(q)
        self._where.pop(p, None)
        self._rows[p] = row
        for k in row:
            if k != p:
                self._where.setdefault(k, set()).add(p)
        return True

    def __repr__(self):
        return f"SpanBasis(dim={self.dim})"
