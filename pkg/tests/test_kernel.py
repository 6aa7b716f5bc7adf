from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from corrfunctor.kernel import (Matrix, NotInvertibleError, charpoly, column_relations, invert, kernel_basis, kron,
                                quotient_presentation, rank, rational_roots, solve_linear)


def small_matrices(max_dim=4, lo=-3, hi=3):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


def dense(m):
    return [[Fraction(x) for x in row] for row in m.to_lists()]


def det(rows):
    # cofactor expansion, fine for n <= 4
    if not rows:
        return Fraction(1)
    return sum((-1) ** j * rows[0][j] * det([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(len(rows)))


def test_solve_examples():
    assert solve_linear(Matrix.identity(2), [3, 5]) == [3, 5]
    assert solve_linear(Matrix.from_rows([[1, 1], [1, 1]]), [1, 0]) is None
    assert solve_linear(Matrix.from_rows([[2, 0], [0, 4]]), [1, 1]) == [Fraction(1, 2), Fraction(1, 4)]


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(3)) == []
    assert len(kernel_basis(Matrix.zeros(2, 3))) == 3
    (v,) = kernel_basis(Matrix.from_rows([[1, 1]]))
    assert v[0] == -v[1] != 0


def test_quotient_examples():
    proj, _ = quotient_presentation(2, [[1, -1]])
    assert proj.nrows == 1
    proj, _ = quotient_presentation(3, [])
    assert proj.is_identity()
    proj, _ = quotient_presentation(3, [[1, 0, 0], [1, 1, 0], [0, 1, 1]])
    assert proj.nrows == 0


def test_invert_examples():
    assert invert(Matrix.identity(3)).is_identity()
    assert invert(Matrix.from_rows([[2, 0], [0, 3]])) == Matrix.from_rows([[Fraction(1, 2), 0], [0, Fraction(1, 3)]])
    assert invert(Matrix.from_rows([[1, 1], [0, 1]])) == Matrix.from_rows([[1, -1], [0, 1]])
    with pytest.raises(NotInvertibleError):
        invert(Matrix.from_rows([[1, 1], [1, 1]]))


def test_map_and_sparse_forms_agree():
    m = Matrix.from_map(3, np.array([2, -1, 0, 2]))
    s = Matrix.from_rows(m.to_lists())
    assert m == s
    assert (m @ Matrix.identity(4)) == s
    assert kron(m, Matrix.identity(2)).to_lists() == np.kron(np.array(m.to_lists()), np.eye(2, dtype=int)).tolist()


@given(small_matrices())
def test_rank_nullity(rows):
    m = Matrix.from_rows(rows)
    basis = kernel_basis(m)
    assert rank(m) + len(basis) == m.ncols
    for v in basis:
        assert all(x == 0 for x in m.apply(dict(enumerate(v))).values())


@given(small_matrices(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solution_satisfies_system(rows, xs):
    m = Matrix.from_rows(rows)
    x0 = xs[:m.ncols]
    b = [sum(r[j] * x0[j] for j in range(m.ncols)) for r in rows]
    x = solve_linear(m, b)
    assert x is not None
    assert [sum(Fraction(r[j]) * x[j] for j in range(m.ncols)) for r in rows] == b


@given(small_matrices(max_dim=4))
def test_invert_matches_determinant(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    m = Matrix.from_rows(sq)
    d = det([[Fraction(x) for x in r] for r in sq])
    if d == 0:
        with pytest.raises(NotInvertibleError):
            invert(m)
    else:
        assert (invert(m) @ m).is_identity()
        assert (m @ invert(m)).is_identity()


@given(small_matrices(max_dim=4, lo=-2, hi=2))
def test_charpoly_against_determinant(rows):
    n = min(len(rows), len(rows[0]))
    sq = [[Fraction(x) for x in r[:n]] for r in rows[:n]]
    coeffs = charpoly(Matrix.from_rows(sq))
    assert coeffs[-1] == 1
    for t in (-2, 0, 1, 3):
        shifted = [[(t if i == j else 0) - sq[i][j] for j in range(n)] for i in range(n)]
        assert sum(c * t ** k for k, c in enumerate(coeffs)) == det(shifted)


def test_rational_roots():
    # (x - 1/2)^2 (x + 3) (x^2 + 1)
    roots = rational_roots(_expand([Fraction(-1, 2), Fraction(-1, 2), 3]))
    assert roots == {Fraction(1, 2): 2, -3: 1}


def _expand(neg_roots):
    coeffs = [Fraction(1)]
    for a in neg_roots:
        coeffs = [Fraction(0)] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] += a * coeffs[i + 1]
    # times x^2 + 1
    out = [Fraction(0)] * (len(coeffs) + 2)
    for i, c in enumerate(coeffs):
        out[i] += c
        out[i + 2] += c
    return out


@given(st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=5))
def test_column_relations_are_relations(vectors):
    vecs = [{i: x for i, x in enumerate(v) if x} for v in vectors]
    rels = column_relations(vecs)
    assert len(rels) == len(vecs) - rank(Matrix.from_rows(vectors))
    for r in rels:
        acc = [sum(Fraction(c) * vectors[i][k] for i, c in r.items()) for k in range(3)]
        assert acc == [0, 0, 0]
