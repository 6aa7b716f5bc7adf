"""Correspondence functors represented up to a set-size bound.

A ``FunctorRep`` knows the dimension of M(X) for |X| <= bound and can produce
the matrix of M(U) for any correspondence U between such sets.  Every
statement checked on a ``FunctorRep`` is a statement "at truncation N".
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from ..config import SweepConfig, sweep
from ..kernel import DimensionError, Matrix, Vec, kron, block_diagonal, vec_axpy
from ..lattices import Lattice
from ..relations import (Correspondence, all_up_to, block_diag, compose, enumerate_correspondences, identity,
                         random_correspondence)


class BoundError(ValueError):
    """A construction needs sets larger than the truncation bound."""


class FunctorRep:
    """Truncated correspondence functor.

    ``action(U)`` returns the matrix of M(U) with shape dims[|Y|] x dims[|X|]
    for U in C(Y, X).  Results are memoized.
    """

    def __init__(self, bound: int, dims: Sequence[int], action: Callable[[Correspondence], Matrix],
                 labels: Callable[[int], list[str]] | None = None, name: str = "M",
                 generation_size: int | None = None, factors: tuple | None = None):
        if bound < 0:
            raise BoundError("negative bound")
        if len(dims) != bound + 1:
            raise DimensionError("need one dimension per size 0..bound")
        self.bound = bound
        self.dims = tuple(int(d) for d in dims)
        self._action = action
        self._labels = labels
        self.name = name
        # generators live in M(E) with |E| = generation_size, when known
        self.generation_size = generation_size
        # (left, right) when this functor was built as a tensor product
        self.factors = factors
        self._cache: dict[Correspondence, Matrix] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"FunctorRep({self.name}, bound={self.bound}, dims={list(self.dims)})"

    def dim(self, n: int) -> int:
        return self.dims[n]

    def action(self, u: Correspondence) -> Matrix:
        if u.target > self.bound or u.source > self.bound:
            raise BoundError(f"{u.short()} exceeds bound {self.bound} of {self.name}")
        m = self._cache.get(u)
        if m is None:
            m = self._action(u)
            if m.shape != (self.dims[u.target], self.dims[u.source]):
                raise DimensionError(f"action of {u.short()} has shape {m.shape}")
            with self._lock:
                self._cache[u] = m
        return m

    __call__ = action

    def labels(self, n: int) -> list[str]:
        if self._labels is None:
            return [f"e{i}" for i in range(self.dims[n])]
        return self._labels(n)

    def truncate(self, bound: int) -> "FunctorRep":
        if bound > self.bound:
            raise BoundError(f"cannot extend {self.name} beyond bound {self.bound}")
        if bound == self.bound:
            return self
        return FunctorRep(bound, self.dims[:bound + 1], self.action, self._labels, self.name,
                          self.generation_size, self.factors)

    def clear_cache(self) -> None:
        with self._lock:
            self._cache.clear()


def functoriality_failure(m: FunctorRep, cfg: SweepConfig = SweepConfig(samples=200)):
    """First (V, U) with M(V∘U) != M(V) M(U) or an identity not acting as identity.

    Composable pairs are formed from the sweep: every exhaustive correspondence
    U is paired with every exhaustive V it composes with; random ones are paired
    with a random composable partner.
    """
    for n in range(m.bound + 1):
        if not m.action(identity(n)).is_identity():
            return (identity(n), None)
    small = min(m.bound, cfg.exhaustive_max)
    pool = list(all_up_to(small))
    by_source: dict[int, list[Correspondence]] = {}
    for v in pool:
        by_source.setdefault(v.source, []).append(v)
    for u in pool:
        mu = m.action(u)
        for v in by_source.get(u.target, []):
            if m.action(compose(v, u)) != m.action(v) @ mu:
                return (v, u)
    rng = random.Random(cfg.seed)
    for u in sweep(m.bound, cfg):
        if max(u.shape) <= small:
            continue
        z = rng.randint(0, m.bound)
        v = random_correspondence(rng, z, u.target)
        if m.action(compose(v, u)) != m.action(v) @ m.action(u):
            return (v, u)
    return None


# --- morphisms and pairings -----------------------------------------------------

@dataclass(eq=False)
class Morphism:
    """Natural transformation between two functors with the same bound."""

    source: FunctorRep
    target: FunctorRep
    components: list[Matrix]

    def __post_init__(self):
        if self.source.bound != self.target.bound:
            raise BoundError("morphism between functors with different bounds")
        if len(self.components) != self.source.bound + 1:
            raise DimensionError("need one component per size")
        for n, c in enumerate(self.components):
            if c.shape != (self.target.dims[n], self.source.dims[n]):
                raise DimensionError(f"component {n} has shape {c.shape}")

    @property
    def bound(self) -> int:
        return self.source.bound

    def __getitem__(self, n: int) -> Matrix:
        return self.components[n]

    @classmethod
    def identity(cls, m: FunctorRep) -> "Morphism":
        return cls(m, m, [Matrix.identity(d) for d in m.dims])

    @classmethod
    def zero(cls, source: FunctorRep, target: FunctorRep) -> "Morphism":
        return cls(source, target, [Matrix.zeros(target.dims[n], source.dims[n]) for n in range(source.bound + 1)])

    def naturality_failure(self, u: Correspondence) -> bool:
        return self.target.action(u) @ self.components[u.source] != self.components[u.target] @ self.source.action(u)

    def first_unnatural(self, correspondences: Iterable[Correspondence]) -> Correspondence | None:
        for u in correspondences:
            if self.naturality_failure(u):
                return u
        return None

    def is_natural(self, cfg: SweepConfig | None = None) -> bool:
        return self.first_unnatural(sweep(self.bound, cfg or SweepConfig())) is None

    def then(self, other: "Morphism") -> "Morphism":
        """other ∘ self."""
        return Morphism(self.source, other.target, [b @ a for a, b in zip(self.components, other.components)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Morphism) and all(a == b for a, b in zip(self.components, other.components))

    __hash__ = None

    def truncate(self, bound: int) -> "Morphism":
        return Morphism(self.source.truncate(bound), self.target.truncate(bound), self.components[:bound + 1])

    def is_invertible(self) -> bool:
        from ..kernel import rank
        return all(c.nrows == c.ncols and rank(c) == c.nrows for c in self.components)


@dataclass(eq=False)
class Pairing:
    """Bilinear pairing left x right -> target: components[(x, y)] maps
    left(X) ⊗ right(Y) to target(X ⊔ Y), for x + y <= bound."""

    left: FunctorRep
    right: FunctorRep
    target: FunctorRep
    components: dict[tuple[int, int], Matrix]

    @property
    def bound(self) -> int:
        return self.target.bound

    def binaturality_failure(self, u: Correspondence, v: Correspondence) -> bool:
        x, y, x2, y2 = u.source, v.source, u.target, v.target
        lhs = self.target.action(block_diag(u, v)) @ self.components[(x, y)]
        rhs = self.components[(x2, y2)] @ kron(self.left.action(u), self.right.action(v))
        return lhs != rhs

    def first_unbinatural(self, exhaustive: bool = True, samples: int = 0, seed: int = 0):
        keys = sorted(self.components)
        for (x, y) in keys:
            for (x2, y2) in keys:
                if exhaustive:
                    for u in enumerate_correspondences(x2, x):
                        for v in enumerate_correspondences(y2, y):
                            if self.binaturality_failure(u, v):
                                return (u, v)
        rng = random.Random(seed)
        for _ in range(samples):
            (x, y) = rng.choice(keys)
            (x2, y2) = rng.choice(keys)
            u = random_correspondence(rng, x2, x)
            v = random_correspondence(rng, y2, y)
            if self.binaturality_failure(u, v):
                return (u, v)
        return None

    def truncate(self, bound: int) -> "Pairing":
        comps = {k: c for k, c in self.components.items() if k[0] + k[1] <= bound}
        return Pairing(self.left.truncate(bound), self.right.truncate(bound), self.target.truncate(bound), comps)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Pairing) and self.components.keys() == other.components.keys()
                and all(self.components[k] == other.components[k] for k in self.components))

    __hash__ = None


# --- basic functors ------------------------------------------------------------------

def _function_table(t_size: int, n: int) -> np.ndarray:
    """All maps {0..n-1} -> {0..t_size-1}, lexicographic, first coordinate most significant."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((t_size,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def functor_FT(t: Lattice, bound: int) -> FunctorRep:
    """F_T: basis of F_T(X) is T^X; U sends φ to y -> join of φ(x) over (y, x) in U."""
    size = t.size
    tables = [_function_table(size, n) for n in range(bound + 1)]
    join = t.join_array
    weights = [size ** np.arange(n - 1, -1, -1, dtype=np.int64) for n in range(bound + 1)]

    def action(u: Correspondence) -> Matrix:
        funcs = tables[u.source]
        nf = funcs.shape[0]
        vals = np.empty((nf, u.target), dtype=np.int64)
        for y, row in enumerate(u.rows):
            acc = np.full(nf, t.bottom, dtype=np.int64)
            x = 0
            while row:
                if row & 1:
                    acc = join[acc, funcs[:, x]]
                row >>= 1
                x += 1
            vals[:, y] = acc
        img = vals @ weights[u.target] if u.target else np.zeros(nf, dtype=np.int64)
        return Matrix.from_map(size ** u.target, img)

    def labels(n: int) -> list[str]:
        return ["(" + ",".join(t.labels[v] for v in row) + ")" for row in tables[n].tolist()]

    gen = len(t.join_irreducibles())
    return FunctorRep(bound, [size ** n for n in range(bound + 1)], action, labels,
                      name=f"F[{t.name or t.size}]", generation_size=gen)


def representable(e: int, bound: int) -> FunctorRep:
    """kC(-, E): basis of kC(X, E) in pattern order, acting by post-composition."""

    def action(u: Correspondence) -> Matrix:
        img = [compose(u, Correspondence.from_pattern(u.source, e, p)).pattern
               for p in range(1 << (u.source * e))]
        return Matrix.from_map(1 << (u.target * e), img)

    def labels(n: int) -> list[str]:
        return [Correspondence.from_pattern(n, e, p).short() for p in range(1 << (n * e))]

    return FunctorRep(bound, [1 << (n * e) for n in range(bound + 1)], action, labels,
                      name=f"kC(-,{e})", generation_size=e)


def constant(bound: int) -> FunctorRep:
    one = Matrix.identity(1)
    return FunctorRep(bound, [1] * (bound + 1), lambda u: one, lambda n: ["1"], name="k",
                      generation_size=0)


def zero_functor(bound: int) -> FunctorRep:
    return FunctorRep(bound, [0] * (bound + 1), lambda u: Matrix.zeros(0, 0), lambda n: [],
                      name="0", generation_size=0)


def tensor(m: FunctorRep, mp: FunctorRep) -> FunctorRep:
    """Pointwise tensor product with diagonal action U(a⊗b) = Ua ⊗ Ub."""
    if m.bound != mp.bound:
        raise BoundError("tensor of functors with different bounds")

    def labels(n: int) -> list[str]:
        return [f"{a}⊗{b}" for a in m.labels(n) for b in mp.labels(n)]

    gen = None
    if m.generation_size is not None and mp.generation_size is not None:
        gen = m.generation_size + mp.generation_size
    return FunctorRep(m.bound, [a * b for a, b in zip(m.dims, mp.dims)],
                      lambda u: kron(m.action(u), mp.action(u)), labels,
                      name=f"({m.name}⊗{mp.name})", generation_size=gen, factors=(m, mp))


def direct_sum(m: FunctorRep, mp: FunctorRep) -> FunctorRep:
    if m.bound != mp.bound:
        raise BoundError("direct sum of functors with different bounds")

    def labels(n: int) -> list[str]:
        return [f"{a}⊕0" for a in m.labels(n)] + [f"0⊕{b}" for b in mp.labels(n)]

    gen = None
    if m.generation_size is not None and mp.generation_size is not None:
        gen = max(m.generation_size, mp.generation_size)
    return FunctorRep(m.bound, [a + b for a, b in zip(m.dims, mp.dims)],
                      lambda u: block_diagonal([m.action(u), mp.action(u)]), labels,
                      name=f"({m.name}⊕{mp.name})", generation_size=gen)


def shift(m: FunctorRep, e: int) -> FunctorRep:
    """M_E: X -> M(X ⊔ E), U -> M(U ⊔ Δ_E)."""
    if e > m.bound:
        raise BoundError(f"cannot shift {m.name} by {e} at bound {m.bound}")
    de = identity(e)

    def labels(n: int) -> list[str]:
        return m.labels(n + e)

    gen = m.generation_size
    return FunctorRep(m.bound - e, m.dims[e:], lambda u: m.action(block_diag(u, de)), labels,
                      name=f"{m.name}_{e}", generation_size=gen)


def shift_morphism(m: FunctorRep, v: Correspondence) -> Morphism:
    """M_V: M_E -> M_F for V in C(F, E), component at X the action of Δ_X ⊔ V.

    Both shifted functors are truncated to the common bound N - max(|E|, |F|).
    """
    e, f = v.source, v.target
    bound = m.bound - max(e, f)
    if bound < 0:
        raise BoundError("shift morphism needs a larger bound")
    src = shift(m, e).truncate(bound)
    tgt = shift(m, f).truncate(bound)
    return Morphism(src, tgt, [m.action(block_diag(identity(n), v)) for n in range(bound + 1)])


def swap_morphism(m: FunctorRep, mp: FunctorRep) -> Morphism:
    """The symmetry M ⊗ M' -> M' ⊗ M, a ⊗ b -> b ⊗ a."""
    a, b = tensor(m, mp), tensor(mp, m)
    comps = []
    for n in range(m.bound + 1):
        d, dp = m.dims[n], mp.dims[n]
        img = (np.arange(d * dp) % dp) * d + np.arange(d * dp) // dp
        comps.append(Matrix.from_map(d * dp, img))
    return Morphism(a, b, comps)


def unit_morphism(m: FunctorRep) -> Morphism:
    """k ⊗ M -> M."""
    return Morphism(tensor(constant(m.bound), m), m, [Matrix.identity(d) for d in m.dims])


def associator(m: FunctorRep, mp: FunctorRep, mpp: FunctorRep) -> Morphism:
    """M ⊗ (M' ⊗ M'') -> (M ⊗ M') ⊗ M''; both use the same flat index."""
    return Morphism(tensor(m, tensor(mp, mpp)), tensor(tensor(m, mp), mpp),
                    [Matrix.identity(a * b * c) for a, b, c in zip(m.dims, mp.dims, mpp.dims)])


def morphism_vector(psi: Morphism) -> Vec:
    """Flatten components into one sparse vector (size-major, then row-major)."""
    out: Vec = {}
    off = 0
    for c in psi.components:
        ncols = c.ncols
        for j in range(ncols):
            for i, v in c.col(j).items():
                out[off + i * ncols + j] = v
        off += c.nrows * c.ncols
    return out


def morphism_from_vector(source: FunctorRep, target: FunctorRep, vec: Vec) -> Morphism:
    comps = []
    off = 0
    for n in range(source.bound + 1):
        r, c = target.dims[n], source.dims[n]
        cols: list[Vec] = [{} for _ in range(c)]
        for k, v in vec.items():
            if off <= k < off + r * c:
                i, j = divmod(k - off, c)
                cols[j][i] = v
        comps.append(Matrix(r, c, cols=cols))
        off += r * c
    return Morphism(source, target, comps)


def combine_morphisms(terms: Iterable[tuple[int, Morphism]], source: FunctorRep, target: FunctorRep) -> Morphism:
    acc: Vec = {}
    for a, psi in terms:
        vec_axpy(acc, a, morphism_vector(psi))
    return morphism_from_vector(source, target, acc)


def lattice_morphism(f, bound: int) -> Morphism:
    """F_f: F_S -> F_T induced by a join-morphism f, by composition with f."""
    s, t = f.source, f.target
    fs, ft = functor_FT(s, bound), functor_FT(t, bound)
    comps = []
    for n in range(bound + 1):
        funcs = _function_table(s.size, n)
        image = np.asarray(f.image, dtype=np.int64)[funcs]
        w = t.size ** np.arange(n - 1, -1, -1, dtype=np.int64)
        img = image @ w if n else np.zeros(1, dtype=np.int64)
        comps.append(Matrix.from_map(t.size ** n, img))
    return Morphism(fs, ft, comps)


__all__ = [
    "BoundError", "FunctorRep", "Morphism", "Pairing", "functor_FT", "representable", "constant",
    "zero_functor", "tensor", "direct_sum", "shift", "shift_morphism", "swap_morphism", "unit_morphism",
    "associator", "morphism_vector", "morphism_from_vector", "combine_morphisms", "lattice_morphism",
    "functoriality_failure",
]
