"""The truncated free tensor bialgebra T(F) over a coalgebra F.

Elements are sparse linear combinations of words (tuples of basis ids); the
product is concatenation, truncated at a chosen maximal degree N.  The
coproduct extends the coalgebra coproduct of F multiplicatively: on a word
it expands letter by letter,

    delta(f_1 ... f_n) = sum (f'_1 ... f'_n) (x) (f''_1 ... f''_n)

over all choices of coproduct terms delta(f_k) = sum f'_k (x) f''_k, so both
output legs of a degree-n word again have degree n.  The counit is the
product of the letterwise counits.  Everything of interest downstream is
grade-preserving, which is why computations truncated at degree N are exact
on that range.

When F was built as the dual of an algebra E, the degreewise duality pairing
<f_{i1} ... f_{in}, e^{j1} (x) ... (x) e^{jn}> = prod delta(i_k, j_k)
identifies the coproduct with multiplication in the tensor powers of E;
:func:`duality_pairing` and :func:`verify_pairing` expose that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .coalgebra import AlgebraPresentation, Coalgebra
from .errors import UnsupportedStructureError
from .exactlin import ONE, ZERO, vec_clean
from .reportkit import CheckReport

# A word is a tuple of BasisId; a tensor element maps words to Fractions;
# a pair element maps (word, word) to Fractions (an element of T(F) (x) T(F)).
Word = tuple
TensorElement = dict
PairElement = dict

EMPTY_WORD: Word = ()


def unit_elem(coeff=ONE) -> TensorElement:
    return {EMPTY_WORD: Fraction(coeff)} if coeff else {}


def word_elem(w: Word, coeff=ONE) -> TensorElement:
    return {tuple(w): Fraction(coeff)} if coeff else {}


def degree(t: TensorElement) -> int:
    """Largest word length in t (0 for the zero element)."""
    return max((len(w) for w in t), default=0)


def graded_key(w: Word):
    """Degree-graded word order key: by length, then lexicographic."""
    return (len(w), w)


@dataclass(frozen=True)
class TensorContext:
    """A coalgebra F together with the truncation degree N (and optionally
    the algebra F was dualized from, enabling the duality pairing)."""

    f: Coalgebra
    max_degree: int
    algebra: AlgebraPresentation = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("truncation degree must be >= 1")

    def word_basis(self, n: int) -> tuple:
        """All words of length n over the sorted basis of F, in lex order."""
        key = ("words", n)
        if key not in self._cache:
            self._cache[key] = tuple(itertools.product(self.f.basis, repeat=n))
        return self._cache[key]

    def word_index(self, n: int) -> dict:
        key = ("index", n)
        if key not in self._cache:
            self._cache[key] = {w: k for k, w in enumerate(self.word_basis(n))}
        return self._cache[key]


def context_from_algebra(e: AlgebraPresentation, max_degree: int) -> TensorContext:
    from .coalgebra import dual_coalgebra

    return TensorContext(dual_coalgebra(e), max_degree, algebra=e)


def concat_product(a: TensorElement, b: TensorElement) -> TensorElement:
    """Bilinear concatenation with no truncation (free product in T)."""
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            s = out.get(w, ZERO) + c1 * c2
            if s:
                out[w] = s
            else:
                del out[w]
    return out


def word_product(ctx: TensorContext, a: TensorElement, b: TensorElement):
    """Concatenation product in T(F) truncated at degree N.

    Returns (element, truncated): words longer than N are dropped and the
    flag reports whether any were.
    """
    out = {}
    truncated = False
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            if len(w1) + len(w2) > ctx.max_degree:
                truncated = True
                continue
            w = w1 + w2
            s = out.get(w, ZERO) + c1 * c2
            if s:
                out[w] = s
            else:
                del out[w]
    return out, truncated


def word_coproduct(ctx: TensorContext, w: Word) -> PairElement:
    """Letterwise coproduct of a single word; both legs keep the word's length."""
    pairs = {(EMPTY_WORD, EMPTY_WORD): ONE}
    for letter in w:
        terms = ctx.f.delta_terms(letter)
        nxt = {}
        for (w1, w2), coeff in pairs.items():
            for (p, q, c) in terms:
                key = (w1 + (p,), w2 + (q,))
                s = nxt.get(key, ZERO) + coeff * c
                if s:
                    nxt[key] = s
                else:
                    del nxt[key]
        pairs = nxt
    return pairs


def coproduct(ctx: TensorContext, t: TensorElement) -> PairElement:
    out = {}
    for w, coeff in t.items():
        for key, c in word_coproduct(ctx, w).items():
            s = out.get(key, ZERO) + coeff * c
            if s:
                out[key] = s
            else:
                del out[key]
    return out


def counit(ctx: TensorContext, t: TensorElement) -> Fraction:
    total = ZERO
    for w, coeff in t.items():
        value = coeff
        for letter in w:
            value *= ctx.f.eps(letter)
            if not value:
                break
        total += value
    return total


def pair_product(a: PairElement, b: PairElement) -> PairElement:
    """Componentwise product in T(F) (x) T(F) (no truncation)."""
    out = {}
    for (a1, a2), c1 in a.items():
        for (b1, b2), c2 in b.items():
            key = (a1 + b1, a2 + b2)
            s = out.get(key, ZERO) + c1 * c2
            if s:
                out[key] = s
            else:
                del out[key]
    return out


def verify_free_bialgebra(ctx: TensorContext, sample_degree: int = 3) -> CheckReport:
    """Exhaustive exact check of the bialgebra identities on low-degree words.

    On all words of degree <= min(N, sample_degree): coassociativity, both
    counit laws, the grading of the coproduct, and multiplicativity
    delta(w1 w2) = delta(w1) delta(w2) for all pairs within the bound.
    """
    report = CheckReport("free bialgebra structure")
    bound = min(ctx.max_degree, sample_degree)
    words = [w for n in range(bound + 1) for w in ctx.word_basis(n)]

    for w in words:
        pairs = word_coproduct(ctx, w)
        n = len(w)
        graded = all(len(w1) == n and len(w2) == n for (w1, w2) in pairs)
        report.record(f"coproduct grading on {w}", graded)

        left = {}
        right = {}
        for (w1, w2), coeff in pairs.items():
            for (u1, u2), c2 in word_coproduct(ctx, w1).items():
                key = (u1, u2, w2)
                left[key] = left.get(key, ZERO) + coeff * c2
            for (u1, u2), c2 in word_coproduct(ctx, w2).items():
                key = (w1, u1, u2)
                right[key] = right.get(key, ZERO) + coeff * c2
        report.record(f"coassociativity on {w}",
                      vec_clean(left) == vec_clean(right))

        lcounit = {}
        rcounit = {}
        for (w1, w2), coeff in pairs.items():
            c = coeff * counit(ctx, {w1: ONE})
            if c:
                lcounit[w2] = lcounit.get(w2, ZERO) + c
            c = coeff * counit(ctx, {w2: ONE})
            if c:
                rcounit[w1] = rcounit.get(w1, ZERO) + c
        ok = vec_clean(lcounit) == {w: ONE} and vec_clean(rcounit) == {w: ONE}
        report.record(f"counit laws on {w}", ok)

    for w1 in words:
        for w2 in words:
            if len(w1) + len(w2) > bound:
                continue
            lhs = word_coproduct(ctx, w1 + w2)
            rhs = pair_product(word_coproduct(ctx, w1), word_coproduct(ctx, w2))
            report.record(f"coproduct multiplicative on {w1}*{w2}", lhs == rhs)
    return report


def _require_algebra(ctx: TensorContext) -> AlgebraPresentation:
    if ctx.algebra is None:
        raise UnsupportedStructureError(
            "duality pairing needs a context built from an algebra presentation")
    return ctx.algebra


def duality_pairing(ctx: TensorContext, w: Word, t: tuple) -> Fraction:
    """<f_{i1}...f_{in}, e^{j1}(x)...(x)e^{jn}> = prod delta(i_k, j_k).

    w is a word over the dual basis; t a pure basis tensor of the same rank
    given by algebra basis indices.
    """
    _require_algebra(ctx)
    if len(w) != len(t):
        raise ValueError(f"rank mismatch: word degree {len(w)} vs tensor rank {len(t)}")
    for letter, idx in zip(w, t):
        if letter.i != idx:
            return ZERO
    return ONE


def pairing_bilinear(ctx: TensorContext, elem: TensorElement, tens: dict) -> Fraction:
    """Bilinear extension of the pairing to sparse combinations on both sides."""
    total = ZERO
    for w, cw in elem.items():
        for t, ct in tens.items():
            if len(t) == len(w):
                total += cw * ct * duality_pairing(ctx, w, t)
    return total


def tensor_power_product(e: AlgebraPresentation, t1: tuple, t2: tuple) -> dict:
    """Componentwise product of two pure basis tensors in the n-th tensor
    power of the algebra, expanded on basis tensors."""
    if len(t1) != len(t2):
        raise ValueError("rank mismatch")
    acc = {(): ONE}
    for a, b in zip(t1, t2):
        expansion = e.basis_product(a, b)
        nxt = {}
        for prefix, coeff in acc.items():
            for i, c in expansion.items():
                key = prefix + (i,)
                s = nxt.get(key, ZERO) + coeff * c
                if s:
                    nxt[key] = s
        acc = nxt
    return acc


def verify_pairing(ctx: TensorContext, max_deg: int = 2) -> CheckReport:
    """Check <delta(w), t1 (x) t2> = <w, t1 . t2> on all basis words of degree
    <= max_deg and all pairs of basis tensors of the matching rank."""
    e = _require_algebra(ctx)
    report = CheckReport("duality pairing intertwines coproduct and product")
    for n in range(min(max_deg, ctx.max_degree) + 1):
        tensors = list(itertools.product(range(e.dim), repeat=n))
        for w in ctx.word_basis(n):
            pairs = word_coproduct(ctx, w)
            for t1 in tensors:
                for t2 in tensors:
                    lhs = ZERO
                    for (w1, w2), coeff in pairs.items():
                        lhs += coeff * duality_pairing(ctx, w1, t1) * duality_pairing(ctx, w2, t2)
                    rhs = pairing_bilinear(ctx, {w: ONE}, tensor_power_product(e, t1, t2))
                    report.record(f"pairing identity on w={w}, t1={t1}, t2={t2}", lhs == rhs)
    return report
