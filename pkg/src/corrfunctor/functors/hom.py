"""Hom spaces, pairings and the internal hom, computed at truncation.

``hom_solver`` finds all families (ψ_n) with M'(U) ψ_x = ψ_y M(U) for every
correspondence U: X -> Y between sets of size <= bound.  The solution space
is narrowed one correspondence at a time: the constraint of U is evaluated on
the current basis of candidates and replaced by the kernel of the resulting
residual matrix.  This is the kernel of the stacked constraint matrix, without
ever building it.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from ..kernel import Matrix, SpanCoordinates, Vec, column_relations, kron, norm, vec_axpy
from ..relations import (Correspondence, block_diag, enumerate_correspondences, fold,
                         identity, inject_left, inject_right)
from .core import (BoundError, FunctorRep, Morphism, Pairing, morphism_from_vector, morphism_vector,
                   shift, shift_morphism, tensor)


def _constraint_order(bound: int) -> list[Correspondence]:
    """Relations on each size first (largest first), then cross-size maps."""
    out = []
    for n in range(bound, -1, -1):
        out.extend(enumerate_correspondences(n, n))
    for y in range(bound, -1, -1):
        for x in range(bound, -1, -1):
            if x != y:
                out.extend(enumerate_correspondences(y, x))
    return out


class _Blocks:
    """Candidate solutions stored per size block: {n: {local index: value}}."""

    @staticmethod
    def combine(cands: Sequence[dict], coeffs: Vec) -> dict:
        out: dict[int, Vec] = {}
        for i, c in coeffs.items():
            for n, vec in cands[i].items():
                acc = out.setdefault(n, {})
                vec_axpy(acc, c, vec)
        return {n: v for n, v in out.items() if v}


def _residual(cand: dict, u: Correspondence, src: FunctorRep, tgt: FunctorRep, rows_src) -> Vec:
    """Flattened M'(U) ψ_x - ψ_y M(U) for one candidate."""
    x, y = u.source, u.target
    dx = src.dims[x]
    res: Vec = {}
    bx = cand.get(x)
    if bx:
        act = tgt.action(u)
        for k, v in bx.items():
            i, j = divmod(k, dx)
            for r, a in act.col(i).items():
                key = r * dx + j
                val = res.get(key, 0) + v * a
                if val:
                    res[key] = norm(val)
                else:
                    del res[key]
    by = cand.get(y)
    if by:
        dy = src.dims[y]
        for k, v in by.items():
            i, j = divmod(k, dy)
            for c, a in rows_src[j].items():
                key = i * dx + c
                val = res.get(key, 0) - v * a
                if val:
                    res[key] = norm(val)
                else:
                    del res[key]
    return res


def hom_solver(m: FunctorRep, mp: FunctorRep, constraints: Iterable[Correspondence] | None = None) -> list[Morphism]:
    """Basis of the natural transformations m -> mp at truncation."""
    if m.bound != mp.bound:
        raise BoundError("hom between functors with different bounds")
    cands: list[dict] = []
    for n in range(m.bound + 1):
        for k in range(m.dims[n] * mp.dims[n]):
            cands.append({n: {k: 1}})
    if constraints is None:
        constraints = _constraint_order(m.bound)
    for u in constraints:
        if not cands:
            break
        x, y = u.source, u.target
        involved = [i for i, c in enumerate(cands) if x in c or y in c]
        if not involved:
            continue
        rows_src = m.action(u).rows()
        residuals = [_residual(cands[i], u, m, mp, rows_src) for i in involved]
        if not any(residuals):
            continue
        rels = column_relations(residuals)
        untouched = [c for i, c in enumerate(cands) if not (x in c or y in c)]
        sub = [cands[i] for i in involved]
        cands = untouched + [_Blocks.combine(sub, r) for r in rels]
    out = []
    for c in cands:
        comps = []
        for n in range(m.bound + 1):
            r, cc = mp.dims[n], m.dims[n]
            cols: list[Vec] = [{} for _ in range(cc)]
            for k, v in c.get(n, {}).items():
                i, j = divmod(k, cc)
                cols[j][i] = v
            comps.append(Matrix(r, cc, cols=cols))
        out.append(Morphism(m, mp, comps))
    return _canonical_basis(out, m, mp)


def _canonical_basis(basis: list[Morphism], m: FunctorRep, mp: FunctorRep) -> list[Morphism]:
    """Row-reduce the solution basis so the result does not depend on constraint order."""
    from ..kernel import Echelon
    e = Echelon()
    for psi in basis:
        e.add(morphism_vector(psi))
    return [morphism_from_vector(m, mp, e.rows[p]) for p in e.pivots()]


def hom_is_exact(m: FunctorRep) -> bool:
    """Whether truncated Hom out of m is known to agree with the true Hom.

    This holds when m is generated in a size strictly below the bound.
    """
    return m.generation_size is not None and m.generation_size < m.bound


def random_morphism(basis: Sequence[Morphism], rng: random.Random, source=None, target=None) -> Morphism:
    if not basis:
        if source is None:
            raise ValueError("empty basis needs explicit source and target")
        return Morphism.zero(source, target)
    acc: Vec = {}
    for psi in basis:
        vec_axpy(acc, rng.randint(-3, 3), morphism_vector(psi))
    return morphism_from_vector(basis[0].source, basis[0].target, acc)


# --- pairings ------------------------------------------------------------------------

def pairing_from_morphism(psi: Morphism) -> Pairing:
    """ψ̂_{X,Y} = ψ_{X⊔Y} ∘ (M'(Δ_X over ∅) ⊗ M(∅ over Δ_Y))."""
    src = psi.source
    if src.factors is None:
        raise TypeError("morphism source is not a tensor product")
    left, right = src.factors
    n = psi.bound
    comps = {}
    for x in range(n + 1):
        for y in range(n + 1 - x):
            ins = kron(left.action(inject_left(x, y)), right.action(inject_right(x, y)))
            comps[(x, y)] = psi.components[x + y] @ ins
    return Pairing(left, right, psi.target, comps)


def morphism_from_pairing(eta: Pairing) -> Morphism:
    """η̃_X = (Δ_X, Δ_X) η_{X,X}, on the sizes with 2x <= bound."""
    avail = eta.bound // 2
    src = tensor(eta.left.truncate(avail), eta.right.truncate(avail))
    tgt = eta.target.truncate(avail)
    comps = [eta.target.action(fold(x)) @ eta.components[(x, x)] for x in range(avail + 1)]
    return Morphism(src, tgt, comps)


def pairing_solver(left: FunctorRep, right: FunctorRep, target: FunctorRep) -> list[Pairing]:
    """Basis of bilinear pairings left x right -> target at truncation.

    Binaturality is imposed for U ⊔ Δ_Y and Δ_X ⊔ V separately; these generate
    all of U ⊔ V since U ⊔ V = (U ⊔ Δ) ∘ (Δ ⊔ V).
    """
    n = target.bound
    keys = [(x, y) for x in range(n + 1) for y in range(n + 1 - x)]
    dims = {k: (target.dims[k[0] + k[1]], left.dims[k[0]] * right.dims[k[1]]) for k in keys}
    cands: list[dict] = []
    for k in keys:
        r, c = dims[k]
        for i in range(r * c):
            cands.append({k: {i: 1}})
    cons = []
    for (x, y) in keys:
        for x2 in range(n + 1 - y):
            for u in enumerate_correspondences(x2, x):
                cons.append(((x, y), (x2, y), u, identity(y)))
        for y2 in range(n + 1 - x):
            for v in enumerate_correspondences(y2, y):
                cons.append(((x, y), (x, y2), identity(x), v))
    for (k1, k2, u, v) in cons:
        if not cands:
            break
        involved = [i for i, c in enumerate(cands) if k1 in c or k2 in c]
        if not involved:
            continue
        a_tgt = target.action(block_diag(u, v))
        a_src = kron(left.action(u), right.action(v))
        rows_src = a_src.rows()
        c1 = dims[k1][1]
        c2 = dims[k2][1]
        residuals = []
        for i in involved:
            cand = cands[i]
            res: Vec = {}
            b1 = cand.get(k1)
            if b1:
                for kk, val in b1.items():
                    i1, j1 = divmod(kk, c1)
                    for r, a in a_tgt.col(i1).items():
                        vec_axpy(res, val * a, {r * c1 + j1: 1})
            b2 = cand.get(k2)
            if b2:
                for kk, val in b2.items():
                    i2, j2 = divmod(kk, c2)
                    for cc, a in rows_src[j2].items():
                        vec_axpy(res, -val * a, {i2 * c1 + cc: 1})
            residuals.append(res)
        if not any(residuals):
            continue
        rels = column_relations(residuals)
        untouched = [c for i, c in enumerate(cands) if not (k1 in c or k2 in c)]
        sub = [cands[i] for i in involved]
        cands = untouched + [_Blocks.combine(sub, r) for r in rels]
    out = []
    for cand in cands:
        comps = {}
        for k in keys:
            r, c = dims[k]
            cols: list[Vec] = [{} for _ in range(c)]
            for kk, v in cand.get(k, {}).items():
                i, j = divmod(kk, c)
                cols[j][i] = v
            comps[k] = Matrix(r, c, cols=cols)
        out.append(Pairing(left, right, target, comps))
    return out


def random_pairing(basis: Sequence[Pairing], rng: random.Random) -> Pairing:
    p0 = basis[0]
    comps = {}
    coeffs = [rng.randint(-3, 3) for _ in basis]
    for k in p0.components:
        acc = Matrix.zeros(*p0.components[k].shape)
        for a, p in zip(coeffs, basis):
            if a:
                acc = acc + p.components[k].scale(a)
        comps[k] = acc
    return Pairing(p0.left, p0.right, p0.target, comps)


# --- internal hom -----------------------------------------------------------------

class InternalHom(FunctorRep):
    """H(M, M')(E) = Hom(M, M'_E), every Hom computed at the common level
    ``level = bound(M) - bound(H)`` so that post-composition with M'_V stays
    inside the computed range."""

    def __init__(self, m: FunctorRep, mp: FunctorRep, bound: int | None = None):
        if m.bound != mp.bound:
            raise BoundError("internal hom of functors with different bounds")
        if bound is None:
            bound = m.bound - 1
        if not 0 <= bound <= m.bound:
            raise BoundError("output bound outside 0..N")
        self.level = m.bound - bound
        self.inner = m
        self.outer = mp
        src = m.truncate(self.level)
        self.homs = [hom_solver(src, shift(mp, e).truncate(self.level)) for e in range(bound + 1)]
        self.coords = [SpanCoordinates([morphism_vector(p) for p in basis]) for basis in self.homs]
        super().__init__(bound, [len(b) for b in self.homs], self._act,
                         name=f"H({m.name},{mp.name})", generation_size=None)

    def _act(self, v: Correspondence) -> Matrix:
        e, f = v.source, v.target
        mv = shift_morphism(self.outer, v).truncate(self.level)
        cols = []
        for psi in self.homs[e]:
            composed = [b @ a for a, b in zip(psi.components, mv.components)]
            vec = morphism_vector(Morphism(psi.source, self.homs_target(f), composed))
            c = self.coords[f].coords(vec)
            if c is None:
                raise ArithmeticError("post-composition left the computed Hom space")
            cols.append(c)
        return Matrix(self.dims[f], self.dims[e], cols=cols)

    def homs_target(self, f: int) -> FunctorRep:
        return shift(self.outer, f).truncate(self.level)


def internal_hom(m: FunctorRep, mp: FunctorRep, bound: int | None = None) -> InternalHom:
    return InternalHom(m, mp, bound)


__all__ = [
    "hom_solver", "hom_is_exact", "random_morphism", "pairing_from_morphism", "morphism_from_pairing",
    "pairing_solver", "random_pairing", "InternalHom", "internal_hom",
]
