from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from sullivan_tc.linalg import Echelon, is_invertible, kernel_and_image, rank, same_span


def _dense_rank(rows, ncols):
    """Textbook row reduction on a dense copy; an independent oracle."""
    m = [[Fraction(r.get(j, 0)) for j in range(ncols)] for r in rows]
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(len(m)):
            if i != rk and m[i][col] != 0:
                f = m[i][col] / m[rk][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk


sparse_vec = st.dictionaries(st.integers(0, 5), st.integers(-3, 3).map(Fraction), max_size=4).map(
    lambda d: {k: v for k, v in d.items() if v})


@settings(max_examples=80, deadline=None)
@given(st.lists(sparse_vec, max_size=7))
def test_rank_matches_dense_oracle(vectors):
    assert rank(vectors) == _dense_rank(vectors, 6)


@settings(max_examples=80, deadline=None)
@given(st.lists(sparse_vec, min_size=1, max_size=7))
def test_kernel_and_image(columns):
    kernel, image = kernel_and_image(columns)
    assert len(kernel) + len(image) == len(columns)
    for v in kernel:
        total = {}
        for j, c in v.items():
            for i, a in columns[j].items():
                total[i] = total.get(i, 0) + c * a
        assert all(x == 0 for x in total.values())
    assert len(image) == _dense_rank(columns, 6)


def test_solve_and_contains():
    e = Echelon()
    e.add({0: Fraction(1), 1: Fraction(1)}, {0: Fraction(1)})
    e.add({1: Fraction(1)}, {1: Fraction(1)})
    assert e.contains({0: Fraction(2)})
    coeffs = e.solve({0: Fraction(2)})
    assert coeffs == {0: Fraction(2), 1: Fraction(-2)}
    assert e.solve({2: Fraction(1)}) is None


def test_invertibility_and_span():
    assert is_invertible([[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]])
    assert not is_invertible([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
    assert same_span([{0: 1}, {1: 1}], [{0: 1, 1: 1}, {0: 1, 1: -1}])
