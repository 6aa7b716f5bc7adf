"""Modules over relation algebras, induction, and the functors L_{E,W}.

Tensor products over R_E are realised as explicit quotients: the ambient space
has basis kC(F, E) x basis(W) with index ``pattern(A) * dim W + w``, and the
relators are (A R) ⊗ w - A ⊗ (R w).
"""

from __future__ import annotations

import threading
from typing import Callable, Iterable

import numpy as np

from ..kernel import DimensionError, Echelon, Matrix, Vec, _quotient_from_echelon, kron
from ..relations import Correspondence, compose, enumerate_correspondences, identity
from .core import FunctorRep


class RModule:
    """Left module over the monoid algebra of relations on a set of size ``ground``."""

    def __init__(self, ground: int, dim: int, action: Callable[[Correspondence], Matrix],
                 name: str = "W", labels: list[str] | None = None):
        self.ground = ground
        self.dim = dim
        self._action = action
        self.name = name
        self.labels = labels or [f"w{i}" for i in range(dim)]
        self._cache: dict[Correspondence, Matrix] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"RModule({self.name}, ground={self.ground}, dim={self.dim})"

    def action(self, r: Correspondence) -> Matrix:
        if r.shape != (self.ground, self.ground):
            raise DimensionError(f"{r.short()} is not a relation on a {self.ground}-set")
        m = self._cache.get(r)
        if m is None:
            m = self._action(r)
            if m.shape != (self.dim, self.dim):
                raise DimensionError("module action has the wrong shape")
            with self._lock:
                self._cache[r] = m
        return m

    __call__ = action


def module_failure(w: RModule, pairs: Iterable[tuple[Correspondence, Correspondence]] | None = None):
    """First witness against the module axioms, or None.

    Without ``pairs`` every pair of relations is checked.
    """
    if not w.action(identity(w.ground)).is_identity():
        return (identity(w.ground), None)
    if pairs is None:
        rels = list(enumerate_correspondences(w.ground, w.ground))
        pairs = ((r, s) for r in rels for s in rels)
    for r, s in pairs:
        if w.action(compose(r, s)) != w.action(r) @ w.action(s):
            return (r, s)
    return None


def regular_module(e: int) -> RModule:
    """R_E acting on itself by left multiplication, basis in pattern order."""

    def action(r: Correspondence) -> Matrix:
        img = [compose(r, Correspondence.from_pattern(e, e, p)).pattern for p in range(1 << (e * e))]
        return Matrix.from_map(1 << (e * e), img)

    labels = [Correspondence.from_pattern(e, e, p).short() for p in range(1 << (e * e))]
    return RModule(e, 1 << (e * e), action, name=f"R_{e}", labels=labels)


def trivial_module(e: int) -> RModule:
    """k with every relation acting as 1."""
    one = Matrix.identity(1)
    return RModule(e, 1, lambda r: one, name="k", labels=["1"])


def zero_module(e: int) -> RModule:
    return RModule(e, 0, lambda r: Matrix.zeros(0, 0), name="0", labels=[])


def tensor_modules(v: RModule, w: RModule) -> RModule:
    """V ⊗_k W with R acting as R ⊗ R."""
    if v.ground != w.ground:
        raise DimensionError("modules over different relation algebras")
    labels = [f"({a})⊗({b})" for a in v.labels for b in w.labels]
    return RModule(v.ground, v.dim * w.dim, lambda r: kron(v.action(r), w.action(r)),
                   name=f"{v.name}⊗{w.name}", labels=labels)


class Induction:
    """The quotient kC(F, E) ⊗_{R_E} W for a module W on E and |F| = f."""

    def __init__(self, w: RModule, f: int, relator_order: Callable | None = None):
        self.module = w
        self.f = f
        e = w.ground
        self.e = e
        self.n_corr = 1 << (f * e)
        self.ambient_dim = self.n_corr * w.dim
        ech = Echelon()
        relators = self._relators()
        if relator_order is not None:
            relators = relator_order(list(relators))
        for r in relators:
            ech.add(r)
        self.relator_rank = ech.rank
        self.projection, self.section = _quotient_from_echelon(self.ambient_dim, ech)
        self.dim = self.projection.nrows

    def _relators(self):
        w = self.module
        d = w.dim
        if d == 0:
            return
        rels = list(enumerate_correspondences(self.e, self.e))
        corrs = list(enumerate_correspondences(self.f, self.e))
        for r in rels:
            act = w.action(r)
            for a in corrs:
                ar = compose(a, r).pattern * d
                base = a.pattern * d
                for j in range(d):
                    vec: Vec = {ar + j: 1}
                    for i, c in act.col(j).items():
                        k = base + i
                        val = vec.get(k, 0) - c
                        if val:
                            vec[k] = val
                        else:
                            vec.pop(k, None)
                    if vec:
                        yield vec

    def relators(self) -> list[Vec]:
        return list(self._relators())

    def index(self, a: Correspondence, j: int) -> int:
        return a.pattern * self.module.dim + j

    def ambient_vector(self, a: Correspondence, wvec: Vec) -> Vec:
        base = a.pattern * self.module.dim
        return {base + j: c for j, c in wvec.items()}

    def representative(self, i: int) -> tuple[Correspondence, int]:
        """The pure tensor A ⊗ w chosen as the i-th quotient basis vector."""
        k = int(self.section.img[i])
        p, j = divmod(k, self.module.dim)
        return Correspondence.from_pattern(self.f, self.e, p), j

    def labels(self) -> list[str]:
        out = []
        for i in range(self.dim):
            a, j = self.representative(i)
            out.append(f"{a.short()}⊗{self.module.labels[j]}")
        return out


def ambient_map(src: Induction, tgt: Induction, u: Correspondence) -> Matrix:
    """A ⊗ w -> (U A) ⊗ w on ambient spaces, for U in C(|tgt|, |src|)."""
    d = src.module.dim
    e = src.e
    new = np.fromiter((compose(u, Correspondence.from_pattern(src.f, e, p)).pattern for p in range(src.n_corr)),
                      dtype=np.int64, count=src.n_corr)
    img = (new[:, None] * d + np.arange(d, dtype=np.int64)[None, :]).reshape(-1)
    return Matrix.from_map(tgt.ambient_dim, img)


def induced_action(src: Induction, tgt: Induction, u: Correspondence) -> Matrix:
    return tgt.projection @ (ambient_map(src, tgt, u) @ src.section)


def induced_module(w: RModule, f: int) -> RModule:
    """W↑ to F: the R_F-module kC(F, E) ⊗_{R_E} W."""
    ind = Induction(w, f)
    m = RModule(f, ind.dim, lambda s: induced_action(ind, ind, s), name=f"{w.name}↑{f}",
                labels=ind.labels())
    m.induction = ind
    return m


def L_functor(e: int, w: RModule, bound: int) -> FunctorRep:
    """L_{E,W}: X -> kC(X, E) ⊗_{R_E} W."""
    if w.ground != e:
        raise DimensionError("module is not over R_E")
    inds = [Induction(w, n) for n in range(bound + 1)]

    def action(u: Correspondence) -> Matrix:
        return induced_action(inds[u.source], inds[u.target], u)

    fr = FunctorRep(bound, [i.dim for i in inds], action, lambda n: inds[n].labels(),
                    name=f"L[{e},{w.name}]", generation_size=e)
    fr.inductions = inds
    return fr


__all__ = [
    "RModule", "module_failure", "regular_module", "trivial_module", "zero_module", "tensor_modules",
    "Induction", "ambient_map", "induced_action", "induced_module", "L_functor",
]
