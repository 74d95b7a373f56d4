from fractions import Fraction as F

import pytest

from hopfreal.coalgebra import BasisId, dual_numbers, triangular_coalgebra, upper_triangular_algebra
from hopfreal.errors import UnsupportedStructureError
from hopfreal.free_tensor import (
    TensorContext,
    context_from_algebra,
    coproduct,
    counit,
    duality_pairing,
    unit_elem,
    verify_free_bialgebra,
    verify_pairing,
    word_coproduct,
    word_elem,
    word_product,
)

ONE = F(1)


def tri(i, j):
    return BasisId.tri(i, j)


@pytest.fixture
def l2_ctx():
    return TensorContext(triangular_coalgebra(2), 3)


def test_unit_law(l2_ctx):
    w = word_elem((tri(2, 1), tri(1, 1)))
    prod, truncated = word_product(l2_ctx, unit_elem(), w)
    assert prod == w and not truncated


def test_concatenation(l2_ctx):
    a = word_elem((tri(1, 1),))
    b = word_elem((tri(2, 1),))
    prod, truncated = word_product(l2_ctx, a, b)
    assert prod == word_elem((tri(1, 1), tri(2, 1))) and not truncated


def test_truncation_flag():
    ctx = TensorContext(triangular_coalgebra(2), 2)
    a = word_elem((tri(1, 1), tri(2, 1)))
    b = word_elem((tri(1, 1),))
    prod, truncated = word_product(ctx, a, b)
    assert prod == {} and truncated


def test_coproduct_of_unit(l2_ctx):
    assert coproduct(l2_ctx, unit_elem()) == {((), ()): ONE}


def test_coproduct_degree_one_word(l2_ctx):
    z = tri(2, 1)
    assert word_coproduct(l2_ctx, (z,)) == {
        ((tri(1, 1),), (z,)): ONE,
        ((z,), (tri(2, 2),)): ONE,
    }


def test_coproduct_degree_two_word_four_terms(l2_ctx):
    a, z, b = tri(1, 1), tri(2, 1), tri(2, 2)
    assert word_coproduct(l2_ctx, (z, z)) == {
        ((a, a), (z, z)): ONE,
        ((a, z), (z, b)): ONE,
        ((z, a), (b, z)): ONE,
        ((z, z), (b, b)): ONE,
    }


def test_counit_values(l2_ctx):
    assert counit(l2_ctx, unit_elem()) == 1
    assert counit(l2_ctx, word_elem((tri(2, 1),))) == 0
    assert counit(l2_ctx, word_elem((tri(1, 1), tri(2, 2)))) == 1


@pytest.mark.parametrize(
    "ctx",
    [
        TensorContext(triangular_coalgebra(2), 3),
        TensorContext(triangular_coalgebra(3), 3),
        context_from_algebra(dual_numbers(), 3),
    ],
)
def test_verify_free_bialgebra_passes(ctx):
    assert verify_free_bialgebra(ctx).ok


def test_verify_free_bialgebra_fails_on_broken_coalgebra():
    from hopfreal.coalgebra import make_coalgebra

    c = triangular_coalgebra(2)
    delta = dict(c.delta)
    delta[tri(2, 1)] = ((tri(2, 1), tri(2, 2), ONE), (tri(1, 1), tri(1, 1), ONE))
    bad = make_coalgebra(c.basis, {b: list(t) for b, t in delta.items()}, c.epsilon)
    report = verify_free_bialgebra(TensorContext(bad, 3))
    assert not report.ok
    assert any("coassociativity" in f for f in report.failures())


def test_grading_invariant_all_words_degree_up_to_three():
    ctx = TensorContext(triangular_coalgebra(2), 3)
    for n in range(4):
        for w in ctx.word_basis(n):
            for (w1, w2) in word_coproduct(ctx, w):
                assert len(w1) == n and len(w2) == n


def test_pairing_empty_word():
    ctx = context_from_algebra(upper_triangular_algebra(2), 3)
    assert duality_pairing(ctx, (), ()) == 1


def test_pairing_dual_bases():
    ctx = context_from_algebra(upper_triangular_algebra(2), 3)
    for i in range(3):
        for j in range(3):
            value = duality_pairing(ctx, (BasisId.plain(i),), (j,))
            assert value == (1 if i == j else 0)


def test_pairing_rank_mismatch():
    ctx = context_from_algebra(upper_triangular_algebra(2), 3)
    with pytest.raises(ValueError):
        duality_pairing(ctx, (BasisId.plain(0),), (0, 1))


def test_pairing_requires_algebra():
    ctx = TensorContext(triangular_coalgebra(2), 3)
    with pytest.raises(UnsupportedStructureError):
        duality_pairing(ctx, (), ())


def test_pairing_intertwines_product():
    ctx = context_from_algebra(upper_triangular_algebra(2), 3)
    assert verify_pairing(ctx, max_deg=2).ok


def test_pairing_intertwines_product_small_algebras():
    for alg in (dual_numbers(), upper_triangular_algebra(2)):
        ctx = context_from_algebra(alg, 2)
        assert verify_pairing(ctx, max_deg=2).ok
