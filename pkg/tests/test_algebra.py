import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sullivan_tc.algebra import Element, GeneratorSpec, GradedAlgebra, coefficient_of, format_element


@pytest.fixture
def A():
    return GradedAlgebra([GeneratorSpec("x", 2), GeneratorSpec("y", 3), GeneratorSpec("z", 5), GeneratorSpec("w", 3)])


def test_odd_square_vanishes(A):
    y = A.gen("y")
    assert y * y == 0


def test_even_generator_is_central(A):
    x, y = A.gens("x", "y")
    assert x * y == y * x


def test_odd_generators_anticommute(A):
    y, z = A.gens("y", "z")
    assert y * z == -(z * y)


def test_monomial_rejects_odd_square(A):
    with pytest.raises(ValueError):
        A.monomial({"y": 2})


def test_float_coefficients_rejected(A):
    with pytest.raises(TypeError):
        A.scalar(0.5)


def test_coefficient_extraction(A):
    x, y = A.gens("x", "y")
    e = x.scale(3) + y.scale(Fraction(1, 2))
    assert coefficient_of(e, A.monomial({"x": 1})) == 3
    assert coefficient_of(A.zero(), A.monomial({"x": 1})) == 0
    assert coefficient_of((x + y) * (x - y), A.monomial({"x": 2})) == 1


def test_degree_queries(A):
    x, y = A.gens("x", "y")
    assert (x * y).degree() == 5
    assert A.zero().degree() is None
    with pytest.raises(ValueError):
        (x + y).degree()


def _sign_of_sorting(word, odd):
    """Brute-force Koszul sign: bubble sort, counting swaps of two odd letters."""
    w = list(word)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                if odd[w[j]] and odd[w[j + 1]]:
                    sign = -sign
                w[j], w[j + 1] = w[j + 1], w[j]
    return sign, tuple(w)


def test_products_of_odd_letters_match_bubble_sort_oracle():
    alg = GradedAlgebra([GeneratorSpec(f"y{i}", 3) for i in range(4)])
    for word in itertools.permutations(range(4), 3):
        prod = alg.one()
        for i in word:
            prod = prod * alg.gen(f"y{i}")
        sign, sorted_word = _sign_of_sorting(word, alg.odd)
        mono = tuple((i, 1) for i in sorted_word)
        assert prod == alg.monomial_element(mono, sign)


def test_associativity_on_all_odd_triples():
    alg = GradedAlgebra([GeneratorSpec(f"y{i}", 3) for i in range(3)])
    ys = [alg.gen(f"y{i}") for i in range(3)]
    for a, b, c in itertools.product(ys, repeat=3):
        assert (a * b) * c == a * (b * c)


def _count_monomials(degrees, k):
    """Coefficient of t^k in prod 1/(1 - t^d) (even d) times prod (1 + t^d) (odd d)."""
    series = [1] + [0] * k
    for d in degrees:
        if d % 2:
            series = [series[i] + (series[i - d] if i >= d else 0) for i in range(k + 1)]
        else:
            for i in range(d, k + 1):
                series[i] += series[i - d]
    return series[k]


@pytest.mark.parametrize("degrees", [(2,), (4, 6), (2, 3, 5), (4, 6, 7, 11, 9), (2, 2, 3, 3, 3)])
def test_basis_sizes_match_generating_function(degrees):
    alg = GradedAlgebra([GeneratorSpec(f"g{i}", d) for i, d in enumerate(degrees)])
    for k in range(0, 26):
        basis = alg.basis_in_degree(k)
        assert len(basis) == _count_monomials(degrees, k)
        assert len(set(basis)) == len(basis)
        assert all(alg.monomial_degree(m) == k for m in basis)


def test_basis_examples():
    a = GradedAlgebra([GeneratorSpec("x", 2)])
    assert a.basis_in_degree(6) == [a.monomial({"x": 3})]
    b = GradedAlgebra([GeneratorSpec("x1", 4), GeneratorSpec("x2", 6)])
    assert sorted(b.basis_in_degree(12)) == sorted([b.monomial({"x1": 3}), b.monomial({"x2": 2})])
    c = GradedAlgebra([GeneratorSpec("y", 3)])
    assert c.basis_in_degree(6) == []


def test_elements_in_different_algebras_do_not_mix(A):
    B = GradedAlgebra([GeneratorSpec("x", 4)])
    with pytest.raises(ValueError):
        A.gen("x") + B.gen("x")


def test_format_element(A):
    x, y = A.gens("x", "y")
    assert format_element(x * x - (x * y).scale(Fraction(1, 3))) == "x^2 - 1/3 x y"


_GENS = [GeneratorSpec("a", 2), GeneratorSpec("b", 3), GeneratorSpec("c", 4), GeneratorSpec("e", 5)]
_ALG = GradedAlgebra(_GENS)


@st.composite
def elements(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        exps = {g.name: draw(st.integers(0, 1 if g.odd else 2)) for g in _GENS}
        terms[_ALG.monomial(exps)] = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
    return Element(_ALG, {m: c for m, c in terms.items() if c})


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) * r == p * r + q * r


@settings(max_examples=60, deadline=None)
@given(elements(), elements())
def test_graded_commutativity_on_homogeneous_parts(p, q):
    for mp, cp in p.terms.items():
        for mq, cq in q.terms.items():
            a = _ALG.monomial_element(mp, cp)
            b = _ALG.monomial_element(mq, cq)
            s = (-1) ** (_ALG.monomial_degree(mp) * _ALG.monomial_degree(mq))
            assert a * b == (b * a).scale(s)
