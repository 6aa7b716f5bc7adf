import itertools
import json

import pytest

from corrfunctor.config import SweepConfig, exhaustive_count
from corrfunctor.functors import (Morphism, constant, functor_FT, hom_solver, regular_module, representable, tensor,
                                  trivial_module, zero_module)
from corrfunctor.kernel import Matrix
from corrfunctor.lattices import chain, corpus, find_isomorphism, join_of_subset, product
from corrfunctor.relations import all_up_to
from corrfunctor.theorems import (VerificationReport, _naturality, hom_dims, lev_morphisms, merge_reports,
                                  pairing_bijection_rank, tau_morphism, verify_adjunction_dims,
                                  verify_internal_hom_identities, verify_LEV_tensor, verify_pairing_roundtrip,
                                  verify_representable_tensor, verify_tau, verify_tensor_laws)

QUICK = SweepConfig(samples=40)
CORPUS = corpus()


def test_report_formats():
    r = VerificationReport("tau", "x", checked_cases=3)
    assert r.to_line() == "THEOREM tau PASS cases=3"
    r.fail("bad thing")
    assert r.to_line() == "THEOREM tau FAIL cases=3 witness=bad thing"
    d = json.loads(r.to_json())
    assert d["status"] == "FAIL" and d["cases"] == 3 and d["theorem"] == "tau"
    merged = merge_reports("all", "", [VerificationReport("a", "", 2), r])
    assert not merged.passed and merged.checked_cases == 5 and merged.witness.startswith("tau")


def test_tau_example():
    rep = verify_tau(chain(1), chain(1), 3)
    assert rep.passed
    assert rep.details["dims"] == rep.details["target_dims"] == [1, 4, 16, 64]
    assert rep.details["exhaustive_cases"] == exhaustive_count(2) == 31


def test_tau_sends_pair_of_functions_to_function_of_pairs():
    t, tp = chain(2), CORPUS["powerset2"]
    tau = tau_morphism(t, tp, 2)
    pt = product(t, tp)
    for phi in itertools.product(range(3), repeat=2):
        for psi in itertools.product(range(4), repeat=2):
            a = phi[0] * 3 + phi[1]
            b = psi[0] * 4 + psi[1]
            pairs = [phi[i] * 4 + psi[i] for i in range(2)]
            assert tau.components[2].col(a * 16 + b) == {pairs[0] * 12 + pairs[1]: 1}
    # product elements are T-major pairs; join is componentwise
    for a, b in itertools.product(range(12), repeat=2):
        assert pt.join(a, b) == t.join(a // 4, b // 4) * 4 + tp.join(a % 4, b % 4)


def test_tau_with_point_is_unit():
    rep = verify_tau(CORPUS["n5"], chain(0), 3, QUICK)
    assert rep.passed
    tau = tau_morphism(CORPUS["n5"], chain(0), 2)
    assert all(c.is_identity() for c in tau.components)


@pytest.mark.parametrize("a,b", [(a, b) for a, b in itertools.combinations_with_replacement(sorted(CORPUS), 2)
                                 if CORPUS[a].size * CORPUS[b].size <= 9])
def test_tau_small_pairs(a, b):
    assert verify_tau(CORPUS[a], CORPUS[b], 2).passed


def test_naturality_helper_reports_witness():
    f = functor_FT(chain(1), 2)
    comps = [Matrix.identity(d) for d in f.dims]
    comps[1] = Matrix.from_rows([[0, 1], [1, 0]])
    rep = VerificationReport("probe", "")
    assert not _naturality(rep, Morphism(f, f, comps), list(all_up_to(2)), "swap")
    assert not rep.passed and "swap not natural" in rep.witness


@pytest.mark.parametrize("e,ep", [(0, 0), (0, 1), (1, 1), (1, 2)])
def test_representable_tensor(e, ep):
    rep = verify_representable_tensor(e, ep, 3, QUICK)
    assert rep.passed, rep.witness


def test_tensor_laws():
    fs = [constant(2), representable(1, 2), functor_FT(chain(1), 2)]
    for triple in itertools.product(fs, repeat=3):
        assert verify_tensor_laws(*triple).passed


def test_pairing_roundtrip_small():
    fs = [constant(2), functor_FT(chain(1), 2)]
    rep = verify_pairing_roundtrip(fs, samples=4, seed=1)
    assert rep.passed, rep.witness


def test_pairing_bijection_rank_full():
    n = 2
    src = tensor(functor_FT(chain(1), n), constant(n))
    basis = hom_solver(src, functor_FT(chain(1), n))
    assert pairing_bijection_rank(basis) == len(basis)


@pytest.mark.parametrize("e,v,f,w", [
    (1, regular_module(1), 1, regular_module(1)),
    (0, trivial_module(0), 1, regular_module(1)),
    (1, zero_module(1), 1, regular_module(1)),
    (1, trivial_module(1), 1, trivial_module(1)),
], ids=["regular", "unit", "zero", "trivial"])
def test_lev_tensor(e, v, f, w):
    rep = verify_LEV_tensor(e, v, f, w, 2, QUICK)
    assert rep.passed, rep.witness
    assert rep.details["left_dims"] == rep.details["right_dims"]
    if v.dim == 0:
        assert rep.details["left_dims"] == [0, 0, 0]


def test_lev_regular_dims_match_representable():
    d, phi, psi, defects = lev_morphisms(1, regular_module(1), 1, regular_module(1), 2)
    assert list(d.big.dims) == [1, 4, 16]
    assert not any(a or b for a, b in defects)


def test_adjunction_examples():
    k = constant(2)
    rep = verify_adjunction_dims(k, k, k, QUICK)
    assert rep.passed and rep.details["left_dim"] == rep.details["right_dim"] == 1
    f1 = functor_FT(chain(1), 3)
    rep = verify_adjunction_dims(f1, representable(1, 3), f1, QUICK)
    assert rep.passed, rep.witness
    # M' = k: both sides equal Hom(M, M'')
    rep = verify_adjunction_dims(representable(1, 3), constant(3), f1, QUICK)
    assert rep.details["left_dim"] == hom_dims(representable(1, 3), f1)[0]


@pytest.mark.parametrize("e", [0, 1])
def test_internal_hom_identities(e):
    for n_rep in (constant(3), functor_FT(chain(1), 3)):
        rep = verify_internal_hom_identities(n_rep, e, cfg=QUICK)
        assert rep.passed, rep.witness
        assert set(rep.details) == {"hom-representable", "hom-constant", "hom-into-constant"}


def test_lattice_join_used_by_tau_target():
    # sanity tie between the product lattice and subset joins
    pt = product(chain(1), chain(1))
    assert find_isomorphism(pt, CORPUS["powerset2"]) is not None
    assert join_of_subset(pt, [1, 2]) == 3
