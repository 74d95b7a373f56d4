"""Finite-support forms on a coalgebra and the operators they induce.

A linear form omega on F induces the operator X_omega = (omega (x) id) o delta,
which is right-invariant: delta o X = (X (x) id) o delta.  Composition with the
counit recovers the form, eps o X_omega = omega, and under this bijection
composition of operators corresponds to the *opposite* convolution product

    (a * b)(v) = sum a(v') b(v''),      X_a o X_b = X_{b*a},

pinned here by tests rather than convention.  Regular operators are spans of
such X_omega together with the identity; :class:`RIOp` keeps the identity
coefficient split off explicitly.

Grade-preserving operators on the truncated tensor algebra are stored
block-per-degree (:class:`LinOp`), one exact sparse matrix on the word basis
of each degree up to the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coalgebra import AlgebraPresentation, BasisId, Coalgebra, dual_coalgebra
from .errors import InternalInconsistencyError, InvarianceError
from .exactlin import (
    Matrix,
    ONE,
    ZERO,
    mat_add,
    mat_mul,
    mat_scale,
    mat_vec,
    solve,
    vec_clean,
)
from .free_tensor import TensorContext, word_coproduct

# A form is a sparse dict BasisId -> Fraction (finite support by nature).
Form = dict


@dataclass(frozen=True)
class RIOp:
    """A regular right-invariant operator: id_coeff * id + X_{form}."""

    id_coeff: Fraction = ZERO
    form: Form = None

    def __post_init__(self):
        object.__setattr__(self, "id_coeff", Fraction(self.id_coeff))
        object.__setattr__(self, "form", vec_clean(self.form or {}))

    @staticmethod
    def identity() -> "RIOp":
        return RIOp(ONE, {})

    @staticmethod
    def from_form(form: Form) -> "RIOp":
        return RIOp(ZERO, form)

    @staticmethod
    def from_eval(b: BasisId) -> "RIOp":
        """The operator of the evaluation form at a basis element."""
        return RIOp(ZERO, {b: ONE})

    @staticmethod
    def zero() -> "RIOp":
        return RIOp(ZERO, {})


@dataclass(frozen=True)
class LinOp:
    """Grade-preserving operator on T(F) truncated at degree N: one square
    matrix per degree, on the lexicographic word basis of that degree."""

    blocks: dict  # degree -> Matrix

    def block(self, n: int) -> Matrix:
        return self.blocks[n]

    def __eq__(self, other):
        return isinstance(other, LinOp) and self.blocks == other.blocks

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())


def op_identity(ctx: TensorContext) -> LinOp:
    return LinOp({n: Matrix.identity(len(ctx.word_basis(n)))
                  for n in range(ctx.max_degree + 1)})


def op_zero(ctx: TensorContext) -> LinOp:
    return LinOp({n: Matrix(len(ctx.word_basis(n)), len(ctx.word_basis(n)))
                  for n in range(ctx.max_degree + 1)})


def op_add(a: LinOp, b: LinOp) -> LinOp:
    return LinOp({n: mat_add(m, b.blocks[n]) for n, m in a.blocks.items()})


def op_scale(a: LinOp, coeff: Fraction) -> LinOp:
    return LinOp({n: mat_scale(m, coeff) for n, m in a.blocks.items()})


def op_compose(a: LinOp, b: LinOp) -> LinOp:
    """a o b (apply b first)."""
    return LinOp({n: mat_mul(m, b.blocks[n]) for n, m in a.blocks.items()})


def op_apply(ctx: TensorContext, op: LinOp, t: dict) -> dict:
    """Apply a block operator to a tensor element (degree by degree)."""
    out = {}
    for w, coeff in t.items():
        n = len(w)
        idx = ctx.word_index(n)
        words = ctx.word_basis(n)
        col = idx[w]
        for (r, c), v in op.blocks[n].entries.items():
            if c == col:
                key = words[r]
                s = out.get(key, ZERO) + coeff * v
                if s:
                    out[key] = s
                else:
                    del out[key]
    return out


def op_vector(op: LinOp) -> dict:
    """Flatten to a sparse vector keyed (degree, row, col), for span work."""
    out = {}
    for n, m in sorted(op.blocks.items()):
        for (r, c), v in m.entries.items():
            out[(n, r, c)] = v
    return out


def op_from_form(f: Coalgebra, x: RIOp) -> Matrix:
    """Degree-1 matrix of id_coeff * id + (omega (x) id) o delta on F."""
    basis = list(f.basis)
    index = {b: k for k, b in enumerate(basis)}
    entries = {}
    for col, b in enumerate(basis):
        out = {}
        for (p, q, c) in f.delta_terms(b):
            w = x.form.get(p)
            if w:
                out[q] = out.get(q, ZERO) + w * c
        if x.id_coeff:
            out[b] = out.get(b, ZERO) + x.id_coeff
        for q, v in out.items():
            if v:
                entries[(index[q], col)] = v
    return Matrix(len(basis), len(basis), entries)


def right_invariance_witness(f: Coalgebra, m: Matrix):
    """None if delta o X = (X (x) id) o delta on every basis element, else a witness."""
    basis = list(f.basis)
    index = {b: k for k, b in enumerate(basis)}
    for b in basis:
        lhs = {}
        image = mat_vec(m, {index[b]: ONE})
        for r, coeff in image.items():
            for (p, q, c) in f.delta_terms(basis[r]):
                key = (p, q)
                lhs[key] = lhs.get(key, ZERO) + coeff * c
        rhs = {}
        for (p, q, c) in f.delta_terms(b):
            for r, v in mat_vec(m, {index[p]: ONE}).items():
                key = (basis[r], q)
                rhs[key] = rhs.get(key, ZERO) + c * v
        if vec_clean(lhs) != vec_clean(rhs):
            return b
    return None


def verify_right_invariance(cx, x):
    """Exact right-invariance check; returns (ok, witness or None).

    Accepts a Coalgebra with a degree-1 Matrix, or a TensorContext with a
    LinOp (checked on every word basis element up to the truncation).
    """
    if isinstance(cx, Coalgebra):
        witness = right_invariance_witness(cx, x)
        return witness is None, witness
    ctx = cx
    for n in range(ctx.max_degree + 1):
        for w in ctx.word_basis(n):
            image = op_apply(ctx, x, {w: ONE})
            lhs = {}
            for w2, coeff in image.items():
                for key, c in word_coproduct(ctx, w2).items():
                    lhs[key] = lhs.get(key, ZERO) + coeff * c
            rhs = {}
            for (w1, w2), coeff in word_coproduct(ctx, w).items():
                for u, v in op_apply(ctx, x, {w1: ONE}).items():
                    key = (u, w2)
                    rhs[key] = rhs.get(key, ZERO) + coeff * v
            if vec_clean(lhs) != vec_clean(rhs):
                return False, w
    return True, None


def form_of_op(f: Coalgebra, m: Matrix) -> Form:
    """eps o X for a right-invariant degree-1 operator X; the inverse of
    op_from_form on such operators.  Raises on a non-invariant input."""
    witness = right_invariance_witness(f, m)
    if witness is not None:
        raise InvarianceError(witness)
    basis = list(f.basis)
    form = {}
    for (r, c), v in m.entries.items():
        e = f.eps(basis[r])
        if e:
            b = basis[c]
            w = form.get(b, ZERO) + e * v
            if w:
                form[b] = w
            else:
                del form[b]
    return form


def convolution(f: Coalgebra, a: Form, b: Form) -> Form:
    """(a * b)(v) = sum a(v') b(v'') over delta(v)."""
    out = {}
    for v in f.basis:
        total = ZERO
        for (p, q, c) in f.delta_terms(v):
            ca = a.get(p)
            if ca:
                cb = b.get(q)
                if cb:
                    total += c * ca * cb
        if total:
            out[v] = total
    return out


def counit_form(f: Coalgebra) -> Form:
    return vec_clean(dict(f.epsilon))


def convolution_inverse(f: Coalgebra, a: Form):
    """Two-sided convolution inverse of a, or None.

    Solves a * b = eps exactly in the finite-dimensional convolution algebra
    and verifies b * a = eps as well.
    """
    basis = list(f.basis)
    index = {b: k for k, b in enumerate(basis)}
    entries = {}
    for row, v in enumerate(basis):
        for (p, q, c) in f.delta_terms(v):
            ca = a.get(p)
            if ca:
                key = (row, index[q])
                s = entries.get(key, ZERO) + c * ca
                if s:
                    entries[key] = s
                else:
                    del entries[key]
    m = Matrix(len(basis), len(basis), entries)
    eps = counit_form(f)
    rhs = {index[b]: c for b, c in eps.items()}
    sol = solve(m, rhs)
    if sol is None:
        return None
    b = {basis[k]: v for k, v in sol.items()}
    if convolution(f, a, b) != eps or convolution(f, b, a) != eps:
        return None
    return b


def transpose_left_mult(e: AlgebraPresentation, elem: dict) -> Matrix:
    """Transpose of left multiplication by elem, as an operator on dual(e).

    Internally cross-checked against op_from_form with the evaluation form
    at elem (they agree by construction; a mismatch is a bug).
    """
    # (elem.)^t f_c = sum_i f_c(elem . e^i) f_i, so column c of the matrix
    # collects, over i, the coefficient of e^c in elem . e^i at row i.
    entries = {}
    for i in range(e.dim):
        for c, v in e.product(elem, {i: ONE}).items():
            entries[(i, c)] = v
    m = Matrix(e.dim, e.dim, entries)
    eval_form = {BasisId.plain(i): Fraction(c) for i, c in elem.items() if c}
    expected = op_from_form(dual_coalgebra(e), RIOp.from_form(eval_form))
    if m != expected:
        raise InternalInconsistencyError(
            "transposed left multiplication disagrees with its form operator")
    return m
