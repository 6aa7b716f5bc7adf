import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corrfunctor.kernel import Matrix
from corrfunctor.lattices import (CycleError, JoinMorphismMap, Lattice, LatticeError, all_join_morphisms, chain,
                                  corpus, diamond, find_isomorphism, format_lattice, idempotent_basis,
                                  is_join_morphism, is_join_morphism_bruteforce, join_of_subset, m3, mobius,
                                  mobius_matrix, n5, named_lattice, parse_lattice, powerset, product,
                                  product_of_morphisms)

CORPUS = corpus()
lattice_names = st.sampled_from(sorted(CORPUS))


def brute_join(t, a, b):
    ups = [u for u in range(t.size) if t.le(a, u) and t.le(b, u)]
    least = [u for u in ups if all(t.le(u, w) for w in ups)]
    assert len(least) == 1
    return least[0]


def test_from_covers_examples():
    t = Lattice.from_covers(2, [(0, 1)])
    assert t.le(0, 1) and not t.le(1, 0)
    d = Lattice.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert find_isomorphism(d, powerset(2)) is not None
    assert d.join(1, 2) == 3 and d.meet(1, 2) == 0
    m = Lattice.from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
    assert all(m.join(a, b) == brute_join(m, a, b) for a in range(5) for b in range(5))


def test_invalid_posets_rejected():
    with pytest.raises(CycleError):
        Lattice.from_covers(2, [(0, 1), (1, 0)])
    with pytest.raises(LatticeError):
        # two maximal elements, no top
        Lattice.from_covers(3, [(0, 1), (0, 2)])
    with pytest.raises(LatticeError):
        # bowtie: 0,1 below both 2,3, no least upper bound
        Lattice.from_covers(6, [(4, 0), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 5), (3, 5)])


def test_subset_joins():
    d = diamond()
    assert join_of_subset(d, []) == d.bottom
    assert join_of_subset(d, [2]) == 2
    assert join_of_subset(d, [1, 2]) == d.top


def test_product_examples():
    assert find_isomorphism(product(chain(1), chain(1)), diamond()) is not None
    assert find_isomorphism(product(n5(), chain(0)), n5()) is not None
    assert product(m3(), chain(2)).size == 15


def test_morphism_products():
    t = chain(1)
    ident = JoinMorphismMap.identity(t)
    assert product_of_morphisms(ident, ident).image == JoinMorphismMap.identity(product(t, t)).image
    z = JoinMorphismMap.zero(t, t)
    assert product_of_morphisms(z, z).image == JoinMorphismMap.zero(product(t, t), product(t, t)).image


def test_join_morphism_check_matches_bruteforce():
    small = [c for c in CORPUS.values() if c.size <= 3]
    for s, t in itertools.product(small, small):
        for img in itertools.product(range(t.size), repeat=s.size):
            assert is_join_morphism(s, t, img) == is_join_morphism_bruteforce(s, t, img)
        for f, g in itertools.product(list(all_join_morphisms(s, t)), list(all_join_morphisms(s, t))):
            assert is_join_morphism_bruteforce(product(s, s), product(t, t), product_of_morphisms(f, g).image)


def test_mobius_examples():
    assert mobius(chain(1), 0, 0) == 1 and mobius(chain(1), 0, 1) == -1
    d = diamond()
    assert mobius(d, d.bottom, d.top) == 1
    assert mobius(m3(), 0, 4) == 2


def zeta_inverse(t):
    """Möbius function as the inverse of the zeta matrix, by Gauss-Jordan over Fractions."""
    n = t.size
    a = [[Fraction(int(t.le(i, j))) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        a[c] = [x / a[c][c] for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                a[r] = [x - a[r][c] * y for x, y in zip(a[r], a[c])]
    return [[int(x) for x in row[n:]] for row in a]


@given(lattice_names)
def test_mobius_is_zeta_inverse(name):
    t = CORPUS[name]
    assert mobius_matrix(t) == zeta_inverse(t)


@given(lattice_names)
def test_mobius_recursion(name):
    t = CORPUS[name]
    chi = mobius_matrix(t)
    for a, u in itertools.product(range(t.size), repeat=2):
        if t.lt(a, u):
            assert sum(chi[s][u] for s in range(t.size) if t.le(a, s) and t.le(s, u)) == 0


def test_idempotent_basis_examples():
    f_from_g, g_from_f = idempotent_basis(chain(0))
    assert f_from_g.to_lists() == [[1]] == g_from_f.to_lists()
    f_from_g, _ = idempotent_basis(chain(1))
    # f_0 = g_0 - g_1, f_1 = g_1
    assert f_from_g.to_lists() == [[1, 0], [-1, 1]]


@given(lattice_names)
def test_idempotent_bases_inverse(name):
    f_from_g, g_from_f = idempotent_basis(CORPUS[name])
    assert (g_from_f @ f_from_g) == Matrix.identity(CORPUS[name].size)


@given(lattice_names)
def test_lattice_axioms(name):
    t = CORPUS[name]
    r = range(t.size)
    for a, b in itertools.product(r, r):
        assert t.join(a, b) == brute_join(t, a, b) == t.join(b, a)
        assert t.meet(a, t.join(a, b)) == a
        assert t.join(a, t.meet(a, b)) == a
    for a, b, c in itertools.product(r, r, r):
        assert t.join(t.join(a, b), c) == t.join(a, t.join(b, c))
        assert t.meet(t.meet(a, b), c) == t.meet(a, t.meet(b, c))


def test_corpus_shapes():
    assert chain(2).size == 3 and all(chain(2).le(a, b) or chain(2).le(b, a) for a in range(3) for b in range(3))
    assert find_isomorphism(powerset(2), diamond()) is not None
    assert not n5().is_distributive()
    assert not m3().is_distributive()
    assert powerset(3).is_distributive()
    assert sorted(CORPUS) == sorted([f"chain{i}" for i in range(5)] + ["powerset1", "powerset2", "powerset3",
                                                                       "m3", "n5"])
    assert named_lattice("diamond").size == 4
    with pytest.raises(KeyError):
        named_lattice("no-such-lattice")


@given(lattice_names, st.permutations(range(8)))
def test_text_round_trip_and_relabel(name, perm):
    t = CORPUS[name]
    back = parse_lattice(format_lattice(t))
    assert back.leq == t.leq
    p = [x for x in perm if x < t.size]
    assert find_isomorphism(t.relabel(p), t) is not None


def test_parse_errors():
    from corrfunctor.relations import ParseError
    with pytest.raises(ParseError, match="line 2"):
        parse_lattice("lattice 2\ncover 0 5\n")
    with pytest.raises(ParseError):
        parse_lattice("cover 0 1\n")
