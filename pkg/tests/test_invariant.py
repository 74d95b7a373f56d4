import itertools
from fractions import Fraction as F

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from hopfreal.coalgebra import (
    BasisId,
    Coalgebra,
    dual_coalgebra,
    dual_numbers,
    direct_sum,
    triangular_coalgebra,
    upper_triangular_algebra,
)
from hopfreal.errors import InvarianceError
from hopfreal.exactlin import Matrix, mat_mul
from hopfreal.invariant import (
    RIOp,
    convolution,
    convolution_inverse,
    counit_form,
    form_of_op,
    op_from_form,
    transpose_left_mult,
    verify_right_invariance,
)

ONE = F(1)


def tri(i, j):
    return BasisId.tri(i, j)


def eval_form(b):
    return {b: ONE}


def test_counit_form_gives_identity():
    f = triangular_coalgebra(2)
    m = op_from_form(f, RIOp.from_form(counit_form(f)))
    assert m == Matrix.identity(3)


def test_identity_riop():
    f = dual_coalgebra(dual_numbers())
    assert op_from_form(f, RIOp.identity()) == Matrix.identity(2)


def test_op_from_form_dual_numbers():
    # t-evaluation: f_t -> f_1, f_1 -> 0
    f = dual_coalgebra(dual_numbers())
    m = op_from_form(f, RIOp.from_eval(BasisId.plain(1)))
    assert m.entries == {(0, 1): ONE}


def test_op_from_form_l2():
    # evaluation at l[2,1]: l[2,1] -> l[2,2], others -> 0
    f = triangular_coalgebra(2)
    m = op_from_form(f, RIOp.from_eval(tri(2, 1)))
    basis = list(f.basis)  # sorted: l[1,1], l[2,1], l[2,2]
    assert basis == [tri(1, 1), tri(2, 1), tri(2, 2)]
    assert m.entries == {(2, 1): ONE}


def test_form_of_op_round_trip():
    f = triangular_coalgebra(2)
    for b in f.basis:
        m = op_from_form(f, RIOp.from_eval(b))
        assert form_of_op(f, m) == eval_form(b)
    assert form_of_op(f, Matrix.identity(3)) == counit_form(f)


def test_form_of_op_rejects_non_invariant():
    f = triangular_coalgebra(2)
    # l[1,1] -> l[2,1] is not right-invariant
    bad = Matrix(3, 3, {(1, 0): ONE})
    with pytest.raises(InvarianceError) as err:
        form_of_op(f, bad)
    assert err.value.witness in f.basis


def test_op_from_form_outputs_are_invariant():
    f = triangular_coalgebra(3)
    for b in f.basis:
        ok, witness = verify_right_invariance(f, op_from_form(f, RIOp.from_eval(b)))
        assert ok and witness is None


def test_convolution_unit():
    f = triangular_coalgebra(2)
    eps = counit_form(f)
    a = {tri(2, 1): F(3), tri(1, 1): F(-1, 2)}
    assert convolution(f, eps, a) == a
    assert convolution(f, a, eps) == a


def test_convolution_nilpotent_dual_numbers():
    f = dual_coalgebra(dual_numbers())
    n = eval_form(BasisId.plain(1))
    assert convolution(f, n, n) == {}


def test_convolution_l2_examples():
    f = triangular_coalgebra(2)
    z = eval_form(tri(2, 1))
    a = eval_form(tri(1, 1))
    assert convolution(f, z, z) == {}
    assert convolution(f, a, z) == z


def test_anti_isomorphism_on_m3_dual():
    # op_from_form(a) o op_from_form(b) == op_from_form(b * a), all 36 pairs
    f = dual_coalgebra(upper_triangular_algebra(3))
    ops = {b: op_from_form(f, RIOp.from_eval(b)) for b in f.basis}
    for a, b in itertools.product(f.basis, repeat=2):
        composed = mat_mul(ops[a], ops[b])
        conv = convolution(f, eval_form(b), eval_form(a))
        assert composed == op_from_form(f, RIOp.from_form(conv))


small_fracs = st.fractions(min_value=-3, max_value=3, max_denominator=2)


def forms_on(c: Coalgebra):
    return st.lists(small_fracs, min_size=c.dim, max_size=c.dim).map(
        lambda cs: {b: v for b, v in zip(c.basis, cs) if v}
    )


L3 = triangular_coalgebra(3)


@given(forms_on(L3), forms_on(L3))
@settings(max_examples=40, deadline=None)
def test_anti_isomorphism_random_forms(a, b):
    composed = mat_mul(op_from_form(L3, RIOp.from_form(a)), op_from_form(L3, RIOp.from_form(b)))
    assert composed == op_from_form(L3, RIOp.from_form(convolution(L3, b, a)))


@given(forms_on(L3), forms_on(L3), forms_on(L3))
@settings(max_examples=40, deadline=None)
def test_convolution_associative(a, b, c):
    left = convolution(L3, convolution(L3, a, b), c)
    right = convolution(L3, a, convolution(L3, b, c))
    assert left == right


def test_convolution_inverse_of_unit():
    f = triangular_coalgebra(2)
    eps = counit_form(f)
    assert convolution_inverse(f, eps) == eps


def test_convolution_inverse_unipotent():
    f = dual_coalgebra(dual_numbers())
    eps = counit_form(f)
    n = eval_form(BasisId.plain(1))
    a = dict(eps)
    a[BasisId.plain(1)] = ONE
    inv = convolution_inverse(f, a)
    assert inv == {BasisId.plain(0): ONE, BasisId.plain(1): F(-1)}
    assert convolution(f, a, inv) == eps
    assert convolution(f, inv, a) == eps


def test_convolution_inverse_nilpotent_has_none():
    f = dual_coalgebra(dual_numbers())
    assert convolution_inverse(f, eval_form(BasisId.plain(1))) is None


def test_convolution_inverse_subalgebra_pattern():
    # u + (eps - eps_B) with u = 2*e1 invertible in B = span{e1}: inverse is
    # u^{-1} + (eps - eps_B) = (1/2) e1 + e2
    f = direct_sum([triangular_coalgebra(1), triangular_coalgebra(1)])
    g1, g2 = f.basis
    a = {g1: F(2), g2: ONE}
    assert convolution_inverse(f, a) == {g1: F(1, 2), g2: ONE}


def test_transpose_left_mult_unit_is_identity():
    e = upper_triangular_algebra(2)
    assert transpose_left_mult(e, dict(e.unit)) == Matrix.identity(3)


def test_transpose_left_mult_dual_numbers():
    e = dual_numbers()
    m = transpose_left_mult(e, {1: ONE})  # elem = t
    assert m.entries == {(0, 1): ONE}


def test_transpose_left_mult_matches_form_operator():
    # elem = e[1,2] in M_2+: same matrix as the l[2,1]-evaluation operator
    e = upper_triangular_algebra(2)
    m = transpose_left_mult(e, {1: ONE})
    f = dual_coalgebra(e)
    assert m == op_from_form(f, RIOp.from_eval(BasisId.plain(1)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_transpose_left_mult_all_basis_elements(n):
    e = upper_triangular_algebra(n)
    f = dual_coalgebra(e)
    for i in range(e.dim):
        m = transpose_left_mult(e, {i: ONE})
        assert m == op_from_form(f, RIOp.from_eval(BasisId.plain(i)))
        assert verify_right_invariance(f, m)[0]


def test_verify_right_invariance_false_with_witness():
    f = triangular_coalgebra(2)
    bad = Matrix(3, 3, {(1, 0): ONE})
    ok, witness = verify_right_invariance(f, bad)
    assert not ok and witness is not None
