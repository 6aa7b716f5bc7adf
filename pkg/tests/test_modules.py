import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrfunctor.config import SweepConfig
from corrfunctor.functors import (Induction, L_functor, RModule, constant, functoriality_failure, induced_module,
                                  module_failure, regular_module, representable, tensor_modules, trivial_module,
                                  zero_module)
from corrfunctor.kernel import DimensionError, Matrix
from corrfunctor.relations import enumerate_correspondences


def dense_quotient_dim(ind):
    """ambient dim minus the float rank of the relators; independent of the exact Echelon."""
    rels = ind.relators()
    if not rels:
        return ind.ambient_dim
    a = np.zeros((len(rels), ind.ambient_dim))
    for i, r in enumerate(rels):
        for k, v in r.items():
            a[i, k] = float(v)
    return ind.ambient_dim - np.linalg.matrix_rank(a)


@pytest.mark.parametrize("w", [regular_module(1), trivial_module(1), zero_module(1), regular_module(0),
                               tensor_modules(regular_module(1), trivial_module(1))],
                         ids=["R1", "k1", "zero1", "R0", "R1xk"])
def test_module_axioms(w):
    assert module_failure(w) is None


@pytest.mark.parametrize("w", [regular_module(1), trivial_module(1), trivial_module(2)], ids=["R1", "k1", "k2"])
def test_induction_to_same_set_is_identity_dim(w):
    assert Induction(w, w.ground).dim == w.dim


@pytest.mark.parametrize("f", [0, 1, 2, 3])
@pytest.mark.parametrize("w", [regular_module(1), trivial_module(1), regular_module(2)], ids=["R1", "k1", "R2"])
def test_quotient_dims_against_float_rank(w, f):
    ind = Induction(w, f)
    assert ind.dim == dense_quotient_dim(ind)


@given(st.integers(0, 10_000))
@settings(max_examples=15)
def test_induction_stable_under_relator_order(seed):
    w = regular_module(1)

    def shuffle(rels):
        random.Random(seed).shuffle(rels)
        return rels

    a, b = Induction(w, 2), Induction(w, 2, relator_order=shuffle)
    assert a.dim == b.dim == 4


@pytest.mark.parametrize("f", [0, 1, 2])
def test_induced_module_is_module(f):
    m = induced_module(regular_module(1), f)
    assert module_failure(m) is None


def test_L_functor_examples():
    assert L_functor(1, regular_module(1), 3).dims == representable(1, 3).dims == (1, 2, 4, 8)
    assert L_functor(0, trivial_module(0), 3).dims == constant(3).dims
    assert L_functor(1, regular_module(1), 2).dims[1] == regular_module(1).dim
    assert L_functor(1, zero_module(1), 2).dims == (0, 0, 0)
    with pytest.raises(DimensionError):
        L_functor(2, regular_module(1), 2)


@pytest.mark.parametrize("e,w", [(1, regular_module(1)), (1, trivial_module(1)), (2, trivial_module(2)),
                                 (0, trivial_module(0))], ids=["R1", "k1", "k2", "k0"])
def test_L_functoriality(e, w):
    assert functoriality_failure(L_functor(e, w, 3), SweepConfig(samples=40)) is None


def test_module_failure_detects_bad_action():
    base = regular_module(1)
    rels = list(enumerate_correspondences(1, 1))

    bad = RModule(1, 2, lambda r: Matrix.identity(2) if r == rels[1] else Matrix.from_rows([[0, 1], [1, 0]]))
    assert module_failure(bad) is not None
    assert module_failure(base) is None
