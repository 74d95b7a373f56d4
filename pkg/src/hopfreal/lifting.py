"""Lifting a coalgebra map into right-invariant operators on T(F).

Given a coalgebra L, a truncated tensor context over F, and a linear map x
sending basis elements of L to regular right-invariant operators on F, each
l in L lifts to a unique grade-preserving operator X(l) on T(F):

  * X(l)(1) = eps_L(l) . 1,
  * X(l) = x(l) on F,
  * on a degree-n word, X(l) acts through the (n-1)-fold iterated coproduct
    of l, letter by letter:  sum  x(l_(1))(f_1) (x) ... (x) x(l_(n))(f_n).

The same operator is characterized by the product-splitting rule
X(l)(w1 . w2) = sum X(l') (w1) . X(l'') (w2) over delta(l); the package keeps
both constructions (:func:`lift_operator` and :func:`lift_operator_recursive`)
and uses their bit-exact agreement as a build-time oracle.

Lifted blocks are memoized per spec and basis element; the caches are pure
(same key, same value) so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coalgebra import BasisId, Coalgebra, grouplikes
from .errors import InternalInconsistencyError, ValidationError
from .exactlin import Matrix, ONE, ZERO, mat_add, mat_mul, mat_scale
from .free_tensor import TensorContext
from .invariant import (
    LinOp,
    op_apply,
    op_from_form,
    verify_right_invariance,
)
from .reportkit import CheckReport


@dataclass
class RealizationSpec:
    """The full datum of a realization: L, the truncated context over F, the
    map x on the basis of L, and (optionally) the diagonal inverse pairs
    (l, l') with x(l) o x(l') = id used by the triangular antipode."""

    l_coalg: Coalgebra
    f_ctx: TensorContext
    x_map: dict  # BasisId -> RIOp (a raw degree-1 Matrix is accepted for tests)
    diag_pairs: tuple = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def max_degree(self) -> int:
        return self.f_ctx.max_degree

    def x_matrix(self, b: BasisId) -> Matrix:
        key = ("xmat", b)
        if key not in self._cache:
            x = self.x_map[b]
            if isinstance(x, Matrix):
                self._cache[key] = x
            else:
                self._cache[key] = op_from_form(self.f_ctx.f, x)
        return self._cache[key]

    def validate(self) -> list:
        failures = []
        missing = [b for b in self.l_coalg.basis if b not in self.x_map]
        for b in missing:
            failures.append(f"x is not defined on basis element {b}")
        if missing:
            return failures
        if self.diag_pairs is not None:
            glikes = set(grouplikes(self.l_coalg))
            n = self.f_ctx.f.dim
            for (l, lp) in self.diag_pairs:
                if l not in glikes:
                    failures.append(f"diag pair element {l} is not grouplike")
                elif lp not in glikes:
                    failures.append(f"diag pair element {lp} is not grouplike")
                elif mat_mul(self.x_matrix(l), self.x_matrix(lp)) != Matrix.identity(n):
                    failures.append(f"x({l}) o x({lp}) is not the identity on F")
        return failures


def make_spec(l_coalg, f_ctx, x_map, diag_pairs=None) -> RealizationSpec:
    spec = RealizationSpec(l_coalg, f_ctx, dict(x_map),
                           tuple(diag_pairs) if diag_pairs is not None else None)
    failures = spec.validate()
    if failures:
        raise ValidationError(failures)
    return spec


def with_truncation(spec: RealizationSpec, max_degree: int) -> RealizationSpec:
    """Same realization data at another truncation degree (fresh caches)."""
    ctx = TensorContext(spec.f_ctx.f, max_degree, algebra=spec.f_ctx.algebra)
    return RealizationSpec(spec.l_coalg, ctx, spec.x_map, spec.diag_pairs)


def _iterate_last(c: Coalgebra, terms: dict, steps: int) -> dict:
    for _ in range(steps):
        nxt = {}
        for tup, coeff in terms.items():
            head, last = tup[:-1], tup[-1]
            for (p, q, cc) in c.delta_terms(last):
                key = head + (p, q)
                s = nxt.get(key, ZERO) + coeff * cc
                if s:
                    nxt[key] = s
                else:
                    del nxt[key]
        terms = nxt
    return terms


def _iterate_first(c: Coalgebra, terms: dict, steps: int) -> dict:
    for _ in range(steps):
        nxt = {}
        for tup, coeff in terms.items():
            first, tail = tup[0], tup[1:]
            for (p, q, cc) in c.delta_terms(first):
                key = (p, q) + tail
                s = nxt.get(key, ZERO) + coeff * cc
                if s:
                    nxt[key] = s
                else:
                    del nxt[key]
        terms = nxt
    return terms


def iterated_coproduct(l_coalg: Coalgebra, v: dict, n: int) -> dict:
    """n-fold iterated coproduct of a sparse vector, as (n+1)-tuples -> Fraction.

    Computed by expanding the last tensor factor at each step and checked
    against the first-factor recursion; coassociativity makes the two agree,
    and a disagreement means the coalgebra data is corrupt.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    start = {(b,): Fraction(c) for b, c in v.items() if c}
    left = _iterate_last(l_coalg, start, n)
    right = _iterate_first(l_coalg, start, n)
    if left != right:
        raise InternalInconsistencyError(
            "iterated coproduct recursions disagree (coalgebra is not coassociative)")
    return left


def _kron_entries(dim: int, mats, coeff: Fraction, acc: dict):
    """Accumulate coeff * (m_1 (x) ... (x) m_n) into acc, word-indexed."""
    items = [list(m.entries.items()) for m in mats]
    if any(not it for it in items):
        return

    def rec(k, row, col, value):
        if k == len(items):
            s = acc.get((row, col), ZERO) + value
            if s:
                acc[(row, col)] = s
            else:
                del acc[(row, col)]
            return
        for (r, c), v in items[k]:
            rec(k + 1, row * dim + r, col * dim + c, value * v)

    rec(0, 0, 0, coeff)


def lift_basis_block(spec: RealizationSpec, b: BasisId, n: int) -> Matrix:
    """Degree-n block of X(b) via the iterated-coproduct construction."""
    key = ("lift", b, n)
    if key in spec._cache:
        return spec._cache[key]
    dim = spec.f_ctx.f.dim
    size = dim ** n
    if n == 0:
        block = Matrix(1, 1, {(0, 0): spec.l_coalg.eps(b)})
    else:
        acc = {}
        for tup, coeff in iterated_coproduct(spec.l_coalg, {b: ONE}, n - 1).items():
            _kron_entries(dim, [spec.x_matrix(p) for p in tup], coeff, acc)
        block = Matrix(size, size, acc)
    spec._cache[key] = block
    return block


def lift_operator(spec: RealizationSpec, l) -> LinOp:
    """X(l) on T(F) up to the truncation degree; linear in l.

    l may be a BasisId or a sparse vector over the basis of L.
    """
    if isinstance(l, BasisId):
        l = {l: ONE}
    blocks = {}
    for n in range(spec.max_degree + 1):
        size = spec.f_ctx.f.dim ** n
        total = Matrix(size, size)
        for b, coeff in l.items():
            total = mat_add(total, mat_scale(lift_basis_block(spec, b, n), coeff))
        blocks[n] = total
    return LinOp(blocks)


def _recursive_block(spec: RealizationSpec, b: BasisId, n: int) -> Matrix:
    key = ("rec", b, n)
    if key in spec._cache:
        return spec._cache[key]
    dim = spec.f_ctx.f.dim
    if n == 0:
        block = Matrix(1, 1, {(0, 0): spec.l_coalg.eps(b)})
    elif n == 1:
        block = spec.x_matrix(b)
    else:
        sub = dim ** (n - 1)
        acc = {}
        for (p, q, coeff) in spec.l_coalg.delta_terms(b):
            first = spec.x_matrix(p)
            rest = _recursive_block(spec, q, n - 1)
            for (r1, c1), v1 in first.entries.items():
                for (r2, c2), v2 in rest.entries.items():
                    key2 = (r1 * sub + r2, c1 * sub + c2)
                    s = acc.get(key2, ZERO) + coeff * v1 * v2
                    if s:
                        acc[key2] = s
                    else:
                        del acc[key2]
        block = Matrix(dim ** n, dim ** n, acc)
    spec._cache[key] = block
    return block


def lift_operator_recursive(spec: RealizationSpec, l) -> LinOp:
    """Independent construction of X(l) from the product-splitting rule,
    peeling one letter at a time.  Must agree bit-exactly with
    :func:`lift_operator`; used as the uniqueness oracle."""
    if isinstance(l, BasisId):
        l = {l: ONE}
    blocks = {}
    for n in range(spec.max_degree + 1):
        size = spec.f_ctx.f.dim ** n
        total = Matrix(size, size)
        for b, coeff in l.items():
            total = mat_add(total, mat_scale(_recursive_block(spec, b, n), coeff))
        blocks[n] = total
    return LinOp(blocks)


def verify_lift(spec: RealizationSpec, l, max_pair_degree: int = None) -> CheckReport:
    """Exhaustive exact check of the five lifted-operator properties up to
    the truncation: the unit action, agreement with x on F, the splitting
    rule on all word pairs, grade preservation, and right-invariance on T(F).
    """
    if isinstance(l, BasisId):
        l = {l: ONE}
    ctx = spec.f_ctx
    bound = min(max_pair_degree or ctx.max_degree, ctx.max_degree)
    report = CheckReport("lifted operator properties")
    x = lift_operator(spec, l)

    eps = spec.l_coalg.eps_vect(l)
    report.record("unit action X(l)(1) = eps(l) 1",
                  x.blocks[0] == Matrix(1, 1, {(0, 0): eps}))

    degree_one = x.blocks[1]
    expected = Matrix(ctx.f.dim, ctx.f.dim)
    for b, coeff in l.items():
        expected = mat_add(expected, mat_scale(spec.x_matrix(b), coeff))
    report.record("degree-1 action agrees with x", degree_one == expected)

    pairs = spec.l_coalg.delta_vect(l)
    split_ops = [(lift_operator(spec, {p: ONE}), lift_operator(spec, {q: ONE}), coeff)
                 for (p, q), coeff in sorted(pairs.items())]
    ok_split = True
    witness = None
    for n1 in range(bound + 1):
        for n2 in range(bound + 1 - n1):
            for w1 in ctx.word_basis(n1):
                for w2 in ctx.word_basis(n2):
                    lhs = op_apply(ctx, x, {w1 + w2: ONE})
                    rhs = {}
                    for (xp, xq, coeff) in split_ops:
                        left = op_apply(ctx, xp, {w1: ONE})
                        right = op_apply(ctx, xq, {w2: ONE})
                        for u1, c1 in left.items():
                            for u2, c2 in right.items():
                                key = u1 + u2
                                s = rhs.get(key, ZERO) + coeff * c1 * c2
                                if s:
                                    rhs[key] = s
                                else:
                                    del rhs[key]
                    if lhs != rhs:
                        ok_split = False
                        witness = (w1, w2)
    report.record(
        "splitting rule on word pairs" + ("" if ok_split else f" (witness {witness})"),
        ok_split)

    graded = all(m.rows == m.cols == ctx.f.dim ** n for n, m in x.blocks.items())
    report.record("grade preservation (square block per degree)", graded)

    ok_inv, w = verify_right_invariance(ctx, x)
    report.record(
        "right-invariance on T(F)" + ("" if ok_inv else f" (witness {w})"), ok_inv)
    return report
