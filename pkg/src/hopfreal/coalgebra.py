"""Finite-dimensional coalgebras presented by structure constants.

A coalgebra is closed finite data here: a basis, the expansion of the
coproduct on each basis element, and the counit values.  Both axioms
(coassociativity and the counit laws) are finite exact checks, performed by
:func:`verify_coalgebra`.

The two stock constructions are the dual of a finite-dimensional associative
algebra (coproduct dual to the product, counit dual to the unit) and the
coalgebras dual to the upper-triangular matrix algebras, with

    delta(l[i,j]) = sum over j <= k <= i of  l[k,j] (x) l[i,k]
    eps(l[i,j])   = 1 if i == j else 0

on the basis l[i,j], j <= i.  Finite direct sums of the latter are the
cotriangular coalgebras used by the antipode machinery.

Everything is finite-dimensional by construction, which makes the
finiteness/regularity side conditions of the underlying theory hold
automatically; the code treats that as a standing assumption rather than
modelling infinite-dimensional coalgebras.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidAlgebraError
from .exactlin import ONE, ZERO, vec_clean
from .reportkit import CheckReport


@dataclass(frozen=True, order=True)
class BasisId:
    """Label of a coalgebra basis vector.

    Triangular ids carry the matrix position (i, j) with 1 <= j <= i and a
    block index; plain ids (j == 0) index an abstract basis, e.g. the dual
    basis of a presented algebra.  The field order gives the global,
    deterministic sort used everywhere (sparse iteration, word bases,
    monomial orders).
    """

    block: int
    i: int
    j: int = 0

    def __post_init__(self):
        if self.j < 0 or self.i < 0 or self.block < 0:
            raise ValueError(f"bad basis id ({self.block},{self.i},{self.j})")
        if self.j > self.i:
            raise ValueError(f"triangular id needs j <= i, got ({self.i},{self.j})")

    @staticmethod
    def plain(i: int, block: int = 0) -> "BasisId":
        return BasisId(block, i, 0)

    @staticmethod
    def tri(i: int, j: int, block: int = 0) -> "BasisId":
        if j < 1:
            raise ValueError("triangular indices are 1-based")
        return BasisId(block, i, j)

    @property
    def is_triangular(self) -> bool:
        return self.j > 0

    def __str__(self):
        prefix = f"{self.block}:" if self.block else ""
        if self.is_triangular:
            return f"{prefix}l[{self.i},{self.j}]"
        return f"{prefix}f[{self.i}]"


# Sparse vector in a coalgebra: BasisId -> Fraction.
Vect = dict


@dataclass(frozen=True)
class AlgebraPresentation:
    """Associative unital algebra given by structure constants.

    ``structure[(l, m)]`` is the sparse expansion of e^l . e^m on the basis
    (absent pairs multiply to zero); ``unit`` holds the coordinates of the
    algebra unit.  Basis indices run 0..dim-1; ``names`` are display labels.
    """

    dim: int
    structure: dict
    unit: dict
    names: tuple = None

    def basis_product(self, l: int, m: int) -> dict:
        return self.structure.get((l, m), {})

    def product(self, a: dict, b: dict) -> dict:
        out = {}
        for l, ca in a.items():
            for m, cb in b.items():
                for i, c in self.basis_product(l, m).items():
                    w = out.get(i, ZERO) + ca * cb * c
                    if w:
                        out[i] = w
                    else:
                        del out[i]
        return out

    def validate(self) -> list:
        """Exhaustive associativity and unit-law check; returns failure texts."""
        failures = []
        rng = range(self.dim)
        for a in rng:
            for b in rng:
                for c in rng:
                    left = self.product(self.basis_product(a, b), {c: ONE})
                    right = self.product({a: ONE}, self.basis_product(b, c))
                    if left != right:
                        failures.append(f"associativity fails on (e{a},e{b},e{c})")
        for a in rng:
            e = {a: ONE}
            if self.product(self.unit, e) != e:
                failures.append(f"left unit law fails on e{a}")
            if self.product(e, self.unit) != e:
                failures.append(f"right unit law fails on e{a}")
        return failures

    def name_of(self, i: int) -> str:
        if self.names and i < len(self.names):
            return self.names[i]
        return f"e{i}"


def ground_field() -> AlgebraPresentation:
    """The base field as a one-dimensional algebra."""
    return AlgebraPresentation(1, {(0, 0): {0: ONE}}, {0: ONE}, ("1",))


def dual_numbers() -> AlgebraPresentation:
    """C[t]/(t^2) on the basis {1, t}."""
    structure = {
        (0, 0): {0: ONE},
        (0, 1): {1: ONE},
        (1, 0): {1: ONE},
    }
    return AlgebraPresentation(2, structure, {0: ONE}, ("1", "t"))


def diagonal_algebra(n: int) -> AlgebraPresentation:
    """C^n with componentwise product (n orthogonal idempotents)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    structure = {(k, k): {k: ONE} for k in range(n)}
    unit = {k: ONE for k in range(n)}
    return AlgebraPresentation(n, structure, unit, tuple(f"p{k+1}" for k in range(n)))


def triangular_units(n: int) -> list:
    """Index order of the matrix units of the upper-triangular algebra: (row, col), row <= col."""
    return [(r, c) for r in range(1, n + 1) for c in range(r, n + 1)]


def upper_triangular_algebra(n: int) -> AlgebraPresentation:
    """The algebra of upper-triangular n x n matrices on its matrix units."""
    if n < 1:
        raise ValueError("n must be >= 1")
    units = triangular_units(n)
    index = {u: k for k, u in enumerate(units)}
    structure = {}
    for (a, b) in units:
        for (c, d) in units:
            if b == c:
                structure[(index[(a, b)], index[(c, d)])] = {index[(a, d)]: ONE}
    unit = {index[(r, r)]: ONE for r in range(1, n + 1)}
    names = tuple(f"e[{r},{c}]" for (r, c) in units)
    return AlgebraPresentation(len(units), structure, unit, names)


def _norm_delta(delta: dict) -> dict:
    out = {}
    for b, terms in delta.items():
        acc = {}
        for (p, q, c) in terms:
            key = (p, q)
            w = acc.get(key, ZERO) + Fraction(c)
            if w:
                acc[key] = w
            else:
                del acc[key]
        out[b] = tuple((p, q, c) for (p, q), c in sorted(acc.items()))
    return out


@dataclass(frozen=True)
class Coalgebra:
    """Coalgebra as structure constants: delta(b) = sum of c * p (x) q per basis b."""

    basis: tuple
    delta: dict
    epsilon: dict

    @property
    def dim(self) -> int:
        return len(self.basis)

    def delta_terms(self, b: BasisId) -> tuple:
        return self.delta.get(b, ())

    def eps(self, b: BasisId) -> Fraction:
        return self.epsilon.get(b, ZERO)

    def delta_vect(self, v: dict) -> dict:
        """Coproduct of a sparse vector, as (BasisId, BasisId) -> Fraction."""
        out = {}
        for b, coeff in v.items():
            for (p, q, c) in self.delta_terms(b):
                key = (p, q)
                w = out.get(key, ZERO) + coeff * c
                if w:
                    out[key] = w
                else:
                    del out[key]
        return out

    def eps_vect(self, v: dict) -> Fraction:
        return sum((coeff * self.eps(b) for b, coeff in v.items()), ZERO)


def make_coalgebra(basis, delta, epsilon) -> Coalgebra:
    return Coalgebra(tuple(sorted(basis)), _norm_delta(delta), vec_clean(epsilon))


def dual_coalgebra(e: AlgebraPresentation) -> Coalgebra:
    """Dual coalgebra of a presented algebra on the dual basis.

    delta(f_i) picks up one term c * f_l (x) f_m for every structure constant
    c of e^l . e^m on e^i; eps(f_i) is the i-th coordinate of the unit.
    """
    failures = e.validate()
    if failures:
        raise InvalidAlgebraError(failures)
    basis = [BasisId.plain(i) for i in range(e.dim)]
    delta = {b: [] for b in basis}
    for (l, m), expansion in e.structure.items():
        for i, c in expansion.items():
            delta[BasisId.plain(i)].append((BasisId.plain(l), BasisId.plain(m), c))
    epsilon = {BasisId.plain(i): c for i, c in e.unit.items()}
    return make_coalgebra(basis, delta, epsilon)


def triangular_coalgebra(n: int, block: int = 0) -> Coalgebra:
    """The coalgebra dual to the upper-triangular n x n matrix algebra."""
    if n < 1:
        raise ValueError("n must be >= 1")
    basis = [BasisId.tri(i, j, block) for i in range(1, n + 1) for j in range(1, i + 1)]
    delta = {}
    epsilon = {}
    for b in basis:
        delta[b] = [
            (BasisId.tri(k, b.j, block), BasisId.tri(b.i, k, block), ONE)
            for k in range(b.j, b.i + 1)
        ]
        if b.i == b.j:
            epsilon[b] = ONE
    return make_coalgebra(basis, delta, epsilon)


def _retag(b: BasisId, block: int) -> BasisId:
    return BasisId(block, b.i, b.j)


def direct_sum(cs) -> Coalgebra:
    """Direct sum of coalgebras; basis ids are retagged with consecutive block indices."""
    cs = list(cs)
    if not cs:
        raise ValueError("direct_sum needs at least one summand")
    basis = []
    delta = {}
    epsilon = {}
    next_block = 0
    for c in cs:
        blocks = sorted({b.block for b in c.basis})
        remap = {old: next_block + k for k, old in enumerate(blocks)}
        next_block += len(blocks)
        for b in c.basis:
            nb = _retag(b, remap[b.block])
            basis.append(nb)
            delta[nb] = [
                (_retag(p, remap[p.block]), _retag(q, remap[q.block]), coeff)
                for (p, q, coeff) in c.delta_terms(b)
            ]
            if c.eps(b):
                epsilon[nb] = c.eps(b)
    return make_coalgebra(basis, delta, epsilon)


def verify_coalgebra(c: Coalgebra) -> CheckReport:
    """Exact per-basis-element check of coassociativity and both counit laws."""
    report = CheckReport("coalgebra axioms")
    for b in c.basis:
        left = {}
        right = {}
        for (p, q, coeff) in c.delta_terms(b):
            for (p1, p2, c2) in c.delta_terms(p):
                key = (p1, p2, q)
                left[key] = left.get(key, ZERO) + coeff * c2
            for (q1, q2, c2) in c.delta_terms(q):
                key = (p, q1, q2)
                right[key] = right.get(key, ZERO) + coeff * c2
        left = {k: v for k, v in left.items() if v}
        right = {k: v for k, v in right.items() if v}
        report.record(f"coassociativity on {b}", left == right)
        lcounit = {}
        rcounit = {}
        for (p, q, coeff) in c.delta_terms(b):
            ec = c.eps(p) * coeff
            if ec:
                lcounit[q] = lcounit.get(q, ZERO) + ec
            ec = c.eps(q) * coeff
            if ec:
                rcounit[p] = rcounit.get(p, ZERO) + ec
        report.record(f"left counit law on {b}", vec_clean(lcounit) == {b: ONE})
        report.record(f"right counit law on {b}", vec_clean(rcounit) == {b: ONE})
    return report


def grouplikes(c: Coalgebra) -> list:
    """Basis elements b with delta(b) = b (x) b and eps(b) = 1."""
    out = []
    for b in c.basis:
        terms = c.delta_terms(b)
        if terms == ((b, b, ONE),) and c.eps(b) == ONE:
            out.append(b)
    return out


def relabel(c: Coalgebra, mapping: dict) -> Coalgebra:
    """Rename basis ids along a bijection (structure transported verbatim)."""
    basis = [mapping[b] for b in c.basis]
    delta = {
        mapping[b]: [(mapping[p], mapping[q], coeff) for (p, q, coeff) in terms]
        for b, terms in c.delta.items()
    }
    epsilon = {mapping[b]: v for b, v in c.epsilon.items()}
    return make_coalgebra(basis, delta, epsilon)


def dual_triangular_relabeling(n: int) -> dict:
    """Canonical bijection dual(M_n+) basis -> triangular basis: e[r,c]* -> l[c,r]."""
    units = triangular_units(n)
    return {
        BasisId.plain(k): BasisId.tri(c, r)
        for k, (r, c) in enumerate(units)
    }


def triangular_blocks(c: Coalgebra) -> dict:
    """Map block index -> size n if the coalgebra is cotriangular, else None.

    Cotriangular means: every basis id is triangular, each block's ids are
    exactly {(i,j): 1 <= j <= i <= n}, the coproduct is the triangular one and
    the counit is the diagonal indicator.
    """
    if not all(b.is_triangular for b in c.basis):
        return None
    sizes = {}
    for b in c.basis:
        sizes[b.block] = max(sizes.get(b.block, 0), b.i)
    expect = []
    for block, n in sorted(sizes.items()):
        expect.extend(BasisId.tri(i, j, block) for i in range(1, n + 1) for j in range(1, i + 1))
    if tuple(sorted(expect)) != c.basis:
        return None
    for b in c.basis:
        want = tuple(
            (BasisId.tri(k, b.j, b.block), BasisId.tri(b.i, k, b.block), ONE)
            for k in range(b.j, b.i + 1)
        )
        if c.delta_terms(b) != want:
            return None
        if c.eps(b) != (ONE if b.i == b.j else ZERO):
            return None
    return sizes


def is_cotriangular(c: Coalgebra) -> bool:
    return triangular_blocks(c) is not None
