"""The operator bialgebra generated by a realization and its ideal of relations.

The representation pi sends a monomial l_1 (x) ... (x) l_n over L to the
ordered composition X(l_1) o ... o X(l_n) of lifted operators on the
truncated T(F); the empty monomial goes to the identity.  Its kernel is the
ideal of relations of the generated bialgebra, computed degree by degree as
the nullspace of an exact sparse matrix whose columns are monomials (in the
global lexicographic order over the sorted basis of L) and whose rows are the
entries of the image operator blocks.

A kernel element is certified *relative to the truncation N*: it kills
T(F) up to degree N.  :func:`kernel_persistence` recomputes the kernel at
N + 1 and flags candidates that fail to persist, which is the honest finite
criterion available here (true relations kill every degree).

Coideal verification works in T(L) (x) T(L) modulo the degree-bounded ideal
span; membership is decided by reducing both tensor legs modulo the ideal
span, since (V (x) V)/(I (x) V + V (x) I) is (V/I) (x) (V/I).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .coalgebra import Coalgebra
from .exactlin import Matrix, ONE, SpanBasis, ZERO, kernel_basis
from .free_tensor import TensorContext, graded_key, word_coproduct
from .invariant import LinOp, op_apply, op_compose, op_identity, op_vector
from .lifting import RealizationSpec, lift_operator
from .reportkit import CheckReport

# Monomials over L and sparse combinations of them reuse the word machinery
# of free_tensor: an LWord is a tuple of BasisId over the basis of L.


@dataclass
class RelationSpace:
    """Canonical basis of the kernel of pi on monomials over L.

    ``degree`` is the homogeneous degree, or the degree cap if ``upto`` is
    set (kernel on all monomials of degree <= cap, empty word included).
    ``truncation`` records the T(F) window the relations are certified on.
    """

    degree: int
    basis: list
    truncation: int
    upto: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis)


def l_context(spec: RealizationSpec) -> TensorContext:
    """T(L) context used for coproducts of monomials over L."""
    key = ("lctx",)
    if key not in spec._cache:
        spec._cache[key] = TensorContext(spec.l_coalg, max(spec.max_degree, 1))
    return spec._cache[key]


def monomials(l_coalg: Coalgebra, degree: int) -> tuple:
    return tuple(itertools.product(l_coalg.basis, repeat=degree))


def monomials_upto(l_coalg: Coalgebra, degree: int) -> tuple:
    out = []
    for n in range(degree + 1):
        out.extend(monomials(l_coalg, n))
    return tuple(out)


def represent_word(spec: RealizationSpec, w: tuple) -> LinOp:
    """pi on a single monomial: composition of the lifted generators."""
    key = ("pi", w)
    if key in spec._cache:
        return spec._cache[key]
    if not w:
        op = op_identity(spec.f_ctx)
    else:
        op = op_compose(represent_word(spec, w[:-1]), lift_operator(spec, w[-1]))
    spec._cache[key] = op
    return op


def represent(spec: RealizationSpec, w) -> LinOp:
    """pi extended linearly to sparse combinations of monomials."""
    if isinstance(w, tuple):
        w = {w: ONE}
    blocks = None
    for mono, coeff in sorted(w.items(), key=lambda kv: graded_key(kv[0])):
        op = represent_word(spec, mono)
        if blocks is None:
            blocks = {n: {} for n in op.blocks}
        for n, m in op.blocks.items():
            acc = blocks[n]
            for key, v in m.entries.items():
                s = acc.get(key, ZERO) + coeff * v
                if s:
                    acc[key] = s
                else:
                    del acc[key]
    if blocks is None:
        from .invariant import op_zero

        return op_zero(spec.f_ctx)
    dim = spec.f_ctx.f.dim
    return LinOp({n: Matrix(dim ** n, dim ** n, acc) for n, acc in blocks.items()})


def verify_splitting(spec: RealizationSpec, w: tuple, bound: int) -> bool:
    """Check the monomial splitting identity of the bialgebra coproduct:

        pi(w)(w1 . w2) = sum pi(w') (w1) . pi(w'') (w2)

    over the letterwise coproduct of w, for all word pairs with
    deg w1 + deg w2 <= min(bound, N).  Exact.
    """
    ctx = spec.f_ctx
    bound = min(bound, ctx.max_degree)
    op = represent_word(spec, w)
    splits = [(represent_word(spec, w1), represent_word(spec, w2), coeff)
              for (w1, w2), coeff in sorted(word_coproduct(l_context(spec), w).items())]
    for n1 in range(bound + 1):
        for n2 in range(bound + 1 - n1):
            for u1 in ctx.word_basis(n1):
                for u2 in ctx.word_basis(n2):
                    lhs = op_apply(ctx, op, {u1 + u2: ONE})
                    rhs = {}
                    for (p1, p2, coeff) in splits:
                        left = op_apply(ctx, p1, {u1: ONE})
                        right = op_apply(ctx, p2, {u2: ONE})
                        for a, ca in left.items():
                            for b, cb in right.items():
                                key = a + b
                                s = rhs.get(key, ZERO) + coeff * ca * cb
                                if s:
                                    rhs[key] = s
                                else:
                                    del rhs[key]
                    if lhs != rhs:
                        return False
    return True


def _kernel_of_columns(columns) -> list:
    """Kernel of the linear map (coefficients on columns) -> operators."""
    row_keys = {}
    for _, vec in columns:
        for key in vec:
            if key not in row_keys:
                row_keys[key] = len(row_keys)
    entries = {}
    for col, (_, vec) in enumerate(columns):
        for key, v in vec.items():
            entries[(row_keys[key], col)] = v
    m = Matrix(len(row_keys), len(columns), entries)
    return kernel_basis(m)


def relation_kernel(spec: RealizationSpec, degree: int) -> RelationSpace:
    """Canonical basis of ker pi restricted to homogeneous degree-d monomials."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    mons = monomials(spec.l_coalg, degree)
    columns = [(w, op_vector(represent_word(spec, w))) for w in mons]
    vectors = _kernel_of_columns(columns)
    basis = [{mons[i]: c for i, c in vec.items()} for vec in vectors]
    return RelationSpace(degree, basis, spec.max_degree)


def relation_kernel_upto(spec: RealizationSpec, degree: int) -> RelationSpace:
    """Canonical basis of ker pi on all monomials of degree <= d (empty word
    included), so degree-mixing relations such as unit relations appear."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    mons = monomials_upto(spec.l_coalg, degree)
    columns = [(w, op_vector(represent_word(spec, w))) for w in mons]
    vectors = _kernel_of_columns(columns)
    basis = [{mons[i]: c for i, c in vec.items()} for vec in vectors]
    return RelationSpace(degree, basis, spec.max_degree, upto=True)


def kernel_persistence(spec: RealizationSpec, degree: int, upto: bool = False):
    """Kernels at truncation N and N + 1 and the truncation-sensitive residue.

    Returns (kernel_at_N, kernel_at_N_plus_1, flagged) where flagged counts
    basis elements of the N-kernel that are not relations on the larger
    window.  The N+1 kernel is always contained in the N kernel.
    """
    from .lifting import with_truncation

    kern = (relation_kernel_upto if upto else relation_kernel)(spec, degree)
    wider_spec = with_truncation(spec, spec.max_degree + 1)
    wider = (relation_kernel_upto if upto else relation_kernel)(wider_spec, degree)
    span = SpanBasis(graded_key)
    for r in wider.basis:
        span.add(r)
    flagged = sum(1 for r in kern.basis if not span.contains(r))
    return kern, wider, flagged


def ideal_span(l_coalg: Coalgebra, gens, bound: int) -> SpanBasis:
    """Span of a . g . b over monomial cofactors, inside degree <= bound.

    Cofactor degrees are limited by the top degree of each generator, so
    every spanned element honestly lies in the two-sided ideal.
    """
    span = SpanBasis(graded_key)
    for g in gens:
        if not g:
            continue
        top = max(len(w) for w in g)
        room = bound - top
        if room < 0:
            continue
        for da in range(room + 1):
            for a in monomials(l_coalg, da):
                for db in range(room - da + 1):
                    for b in monomials(l_coalg, db):
                        span.add({a + w + b: c for w, c in g.items()})
    return span


def pair_reduce(span: SpanBasis, pairs: dict) -> dict:
    """Reduce both legs of an element of T(L) (x) T(L) modulo a subspace span;
    the result is zero iff the element lies in I (x) T + T (x) I."""
    out = {}
    for (w1, w2), coeff in pairs.items():
        left = span.reduce({w1: ONE})
        if not left:
            continue
        right = span.reduce({w2: ONE})
        if not right:
            continue
        for u1, c1 in left.items():
            for u2, c2 in right.items():
                key = (u1, u2)
                s = out.get(key, ZERO) + coeff * c1 * c2
                if s:
                    out[key] = s
                else:
                    del out[key]
    return out


def delta_on_l_element(spec: RealizationSpec, elem: dict) -> dict:
    """Letterwise coproduct of a sparse combination of monomials over L."""
    ctx = l_context(spec)
    out = {}
    for w, coeff in elem.items():
        for key, c in word_coproduct(ctx, w).items():
            s = out.get(key, ZERO) + coeff * c
            if s:
                out[key] = s
            else:
                del out[key]
    return out


def computed_relation_ideal(spec: RealizationSpec, degree_bound: int) -> SpanBasis:
    """Bounded span of the ideal generated by the computed homogeneous
    relation kernels of degree 1..d (cached per bound)."""
    key = ("relideal", degree_bound)
    if key not in spec._cache:
        gens = []
        for d in range(1, degree_bound + 1):
            gens.extend(relation_kernel(spec, d).basis)
        spec._cache[key] = ideal_span(spec.l_coalg, gens, degree_bound)
    return spec._cache[key]


def verify_coideal(spec: RealizationSpec, r: RelationSpace, degree_bound: int) -> CheckReport:
    """Check delta(r_i) in I (x) T(L) + T(L) (x) I for each basis relation,
    where I is the bounded ideal span of the *computed* relation kernels up
    to the degree bound (never of the candidate space itself)."""
    from .fmt import format_element

    report = CheckReport(f"coideal property at degree bound {degree_bound}")
    ideal = computed_relation_ideal(spec, degree_bound)
    for rel in r.basis:
        residue = pair_reduce(ideal, delta_on_l_element(spec, rel))
        report.record(
            f"delta({format_element(rel)}) decomposes"
            + ("" if not residue else " (residue nonzero)"),
            not residue)
    return report


def counit_check(spec: RealizationSpec, w) -> Fraction:
    """Value of pi(w) on the unit word; the counit of the operator bialgebra."""
    op = represent(spec, w)
    return op.blocks[0].get(0, 0)


def eps_extension(l_coalg: Coalgebra, w) -> Fraction:
    """Multiplicative extension of eps_L to combinations of monomials."""
    if isinstance(w, tuple):
        w = {w: ONE}
    total = ZERO
    for mono, coeff in w.items():
        value = coeff
        for letter in mono:
            value *= l_coalg.eps(letter)
            if not value:
                break
        total += value
    return total
