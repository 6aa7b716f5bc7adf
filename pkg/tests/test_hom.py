import random

import numpy as np
import pytest

from corrfunctor.config import SweepConfig
from corrfunctor.functors import (Morphism, Pairing, constant, functor_FT, functoriality_failure, hom_is_exact, hom_solver, internal_hom,
                                  morphism_from_pairing, morphism_vector, pairing_from_morphism, pairing_solver,
                                  random_morphism, random_pairing, representable, shift, tensor, zero_functor)
from corrfunctor.kernel import Matrix
from corrfunctor.lattices import chain
from corrfunctor.relations import all_up_to
from corrfunctor.theorems import pairing_bijection_rank

QUICK = SweepConfig(samples=30)


def dense_hom_dim(m, mp):
    """Nullity of the full stacked naturality system, by float rank."""
    sizes = [mp.dims[n] * m.dims[n] for n in range(m.bound + 1)]
    offs = np.cumsum([0] + sizes)
    rows = []
    for u in all_up_to(m.bound):
        x, y = u.source, u.target
        a_t = np.array(mp.action(u).to_lists(), dtype=float).reshape(mp.dims[y], mp.dims[x])
        a_s = np.array(m.action(u).to_lists(), dtype=float).reshape(m.dims[y], m.dims[x])
        # M'(U) ψ_x - ψ_y M(U), row-major vec(ψ)
        block = np.zeros((mp.dims[y] * m.dims[x], offs[-1]))
        block[:, offs[x]:offs[x + 1]] += np.kron(a_t, np.eye(m.dims[x]))
        block[:, offs[y]:offs[y + 1]] -= np.kron(np.eye(mp.dims[y]), a_s.T)
        rows.append(block)
    big = np.vstack(rows) if rows else np.zeros((0, offs[-1]))
    return int(offs[-1] - (np.linalg.matrix_rank(big) if big.size else 0))


F1 = functor_FT(chain(1), 2)


@pytest.mark.parametrize("m,mp", [
    (constant(2), constant(2)), (constant(2), F1), (F1, F1), (representable(1, 2), F1),
    (F1, constant(2)), (representable(1, 2), representable(1, 2)), (functor_FT(chain(2), 2), F1),
], ids=["k-k", "k-F1", "F1-F1", "rep1-F1", "F1-k", "rep1-rep1", "F2-F1"])
def test_hom_dims_against_dense_oracle(m, mp):
    basis = hom_solver(m, mp)
    assert len(basis) == dense_hom_dim(m, mp)
    for psi in basis:
        assert psi.is_natural(QUICK)


def test_hom_examples():
    assert len(hom_solver(constant(3), constant(3))) == 1
    assert len(hom_solver(F1, zero_functor(2))) == 0
    assert len(hom_solver(zero_functor(2), F1)) == 0


@pytest.mark.parametrize("target", [constant(3), functor_FT(chain(1), 3), functor_FT(chain(2), 3),
                                    representable(1, 3)], ids=["k", "F1", "F2", "rep1"])
@pytest.mark.parametrize("e", [0, 1, 2])
def test_yoneda_dims(target, e):
    src = representable(e, 3)
    assert hom_is_exact(src)
    assert len(hom_solver(src, target)) == target.dims[e]


def test_exactness_label():
    assert not hom_is_exact(representable(3, 3))
    assert hom_is_exact(functor_FT(chain(1), 3))


def test_basis_independent_of_constraint_order():
    cons = list(all_up_to(2))
    random.Random(5).shuffle(cons)
    a = hom_solver(representable(1, 2), F1)
    b = hom_solver(representable(1, 2), F1, constraints=cons)
    assert [morphism_vector(p) for p in a] == [morphism_vector(p) for p in b]


def test_random_morphism_lies_in_span():
    basis = hom_solver(F1, F1)
    psi = random_morphism(basis, random.Random(0))
    assert psi.is_natural(QUICK)
    z = random_morphism([], random.Random(0), F1, F1)
    assert all(c.is_zero() for c in z.components)


def test_mu_pairing_glues_functions():
    # μ̂ for F_T: φ ⊗ ψ goes to the function equal to φ on X and ψ on Y
    n = 3
    f = functor_FT(chain(1), n)
    comps = {}
    for x in range(n + 1):
        for y in range(n + 1 - x):
            dx, dy = 2 ** x, 2 ** y
            comps[(x, y)] = Matrix.from_map(2 ** (x + y), np.arange(dx * dy))
    eta = Pairing(f, f, f, comps)
    assert eta.first_unbinatural() is None
    psi = morphism_from_pairing(eta)
    assert pairing_from_morphism(psi) == eta.truncate(n // 2)


def test_pairing_round_trips():
    rng = random.Random(2)
    n = 3
    m, mp = constant(n), functor_FT(chain(1), n)
    src = tensor(m, mp)
    for tgt in (functor_FT(chain(1), n), representable(1, n)):
        basis = hom_solver(src, tgt)
        psi = random_morphism(basis, rng, src, tgt)
        assert morphism_from_pairing(pairing_from_morphism(psi)).components == psi.truncate(n // 2).components
        pbasis = pairing_solver(m, mp, tgt)
        eta = random_pairing(pbasis, rng)
        assert eta.first_unbinatural(exhaustive=False, samples=50) is None
        assert pairing_from_morphism(morphism_from_pairing(eta)) == eta.truncate(n // 2)


def test_zero_pairing_gives_zero_morphism():
    n = 2
    f = functor_FT(chain(1), n)
    comps = {(x, y): Matrix.zeros(f.dims[x + y], f.dims[x] * f.dims[y])
             for x in range(n + 1) for y in range(n + 1 - x)}
    psi = morphism_from_pairing(Pairing(f, f, f, comps))
    assert all(c.is_zero() for c in psi.components)


def test_identity_on_k_tensor_k():
    kk = tensor(constant(2), constant(2))
    psi = Morphism(kk, constant(2), [Matrix.identity(1)] * 3)
    eta = pairing_from_morphism(psi)
    assert all(c == Matrix.identity(1) for c in eta.components.values())


@pytest.mark.parametrize("n_rep", [constant(3), functor_FT(chain(1), 3)], ids=["k", "F1"])
def test_internal_hom_dims(n_rep):
    h = internal_hom(constant(3), n_rep)
    assert h.dims == n_rep.dims[:h.bound + 1]
    h = internal_hom(representable(1, 3), n_rep, bound=1)
    assert h.dims == shift(n_rep, 1).dims[:2]
    h = internal_hom(functor_FT(chain(1), 3), constant(3))
    assert h.dims == (1,) * (h.bound + 1)


def test_internal_hom_is_functor():
    h = internal_hom(representable(1, 3), functor_FT(chain(1), 3))
    assert functoriality_failure(h, QUICK) is None


def test_pairing_basis_binatural_and_injective_hat():
    n = 2
    m, mp, mpp = constant(n), representable(1, n), functor_FT(chain(1), n)
    for eta in pairing_solver(m, mp, mpp):
        assert eta.first_unbinatural() is None
    homs = hom_solver(tensor(m, mp), mpp)
    assert pairing_bijection_rank(homs) == len(homs)
