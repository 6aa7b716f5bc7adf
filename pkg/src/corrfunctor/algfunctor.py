"""Algebra correspondence functors and recovery of a lattice from one.

An algebra functor A carries a multiplication μ_X on every A(X) and units
ε_X, compatible with the action of correspondences.  For F_T the product is
the pointwise join of functions X -> T.

``reconstruct_lattice`` runs the recovery algorithm on an abstract algebra
functor: split A(•) into primitive idempotents f_t, read a meet off the
comultiplication δ, locate the top with the counit η, then rebuild the
isomorphism λ: F_T -> A size by size and check it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import SweepConfig, sweep
from .functors.core import FunctorRep, _function_table, direct_sum, functor_FT
from .kernel import (Matrix, NotInvertibleError, SpanCoordinates, Vec, as_scalar, charpoly, invert,
                     kernel_vectors, kron, norm, rank, rational_roots, vec_axpy, vec_scale)
from .lattices import Lattice, LatticeError, find_isomorphism, idempotent_basis
from .relations import (Correspondence, ParseError, all_up_to, compose, diagonal, empty, identity,
                        inject_left, inject_right)
from .theorems import VerificationReport


class AlgebraError(ValueError):
    """An algebra functor violates a hypothesis; ``hypothesis`` names it."""

    def __init__(self, hypothesis: str, message: str):
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {message}")


class NotSplitError(AlgebraError):
    def __init__(self, message: str):
        super().__init__("not split", message)


class NotCommutativeError(AlgebraError):
    def __init__(self, message: str):
        super().__init__("not commutative", message)


# --- products in a structure-constant algebra -------------------------------------

def multiply(mu: Matrix, d: int, a: Vec, b: Vec) -> Vec:
    """μ(a ⊗ b) for an algebra of dimension d with multiplication matrix mu."""
    out: Vec = {}
    if mu.is_map:
        img = mu.img
        for i, x in a.items():
            base = i * d
            for j, y in b.items():
                k = int(img[base + j])
                if k >= 0:
                    v = out.get(k, 0) + x * y
                    if v:
                        out[k] = v
                    else:
                        del out[k]
        return {k: norm(v) for k, v in out.items()}
    for i, x in a.items():
        for j, y in b.items():
            vec_axpy(out, x * y, mu.col(i * d + j))
    return out


def left_multiplication(mu: Matrix, d: int, a: Vec) -> Matrix:
    return Matrix(d, d, cols=[multiply(mu, d, a, {j: 1}) for j in range(d)])


class AlgebraFunctorRep:
    """A FunctorRep with multiplications ``mul[n]`` (dims(n) x dims(n)^2) and units ``unit[n]``."""

    def __init__(self, carrier: FunctorRep, mul: Sequence[Matrix], unit: Sequence[Vec], name: str | None = None,
                 validate: bool = True, cfg: SweepConfig = SweepConfig(samples=200)):
        self.carrier = carrier
        self.mul = list(mul)
        self.unit = [{k: as_scalar(v) for k, v in u.items() if v} for u in unit]
        self.name = name or carrier.name
        self.bound = carrier.bound
        self.dims = carrier.dims
        for n, m in enumerate(self.mul):
            d = self.dims[n]
            if m.shape != (d, d * d):
                raise AlgebraError("shape", f"multiplication at size {n} has shape {m.shape}")
        if validate:
            problem = self.structure_failure(cfg)
            if problem is not None:
                raise AlgebraError(*problem)

    def __repr__(self) -> str:
        return f"AlgebraFunctorRep({self.name}, bound={self.bound}, dims={list(self.dims)})"

    def action(self, u: Correspondence) -> Matrix:
        return self.carrier.action(u)

    def product(self, n: int, a: Vec, b: Vec) -> Vec:
        return multiply(self.mul[n], self.dims[n], a, b)

    def structure_failure(self, cfg: SweepConfig = SweepConfig(samples=200), triples: int = 3000,
                          seed: int = 0) -> tuple[str, str] | None:
        """First violated algebra axiom as (hypothesis, detail), or None.

        Associativity is checked on every basis triple when dims(n)^3 <= 5*10^4
        and on ``triples`` random basis triples otherwise.
        """
        rng = random.Random(seed)
        for n in range(self.bound + 1):
            d = self.dims[n]
            mu = self.mul[n]
            if mu.is_map:
                sq = mu.img.reshape(d, d) if d else mu.img.reshape(0, 0)
                if not np.array_equal(sq, sq.T):
                    return ("commutative", f"product not commutative at size {n}")
            else:
                for i in range(d):
                    for j in range(i + 1, d):
                        if mu.col(i * d + j) != mu.col(j * d + i):
                            return ("commutative", f"e{i} e{j} != e{j} e{i} at size {n}")
            one = self.unit[n]
            for i in range(d):
                if self.product(n, one, {i: 1}) != {i: 1}:
                    return ("unit", f"unit does not fix e{i} at size {n}")
            if d ** 3 <= 50000:
                trip = ((i, j, k) for i in range(d) for j in range(d) for k in range(d))
            else:
                trip = ((rng.randrange(d), rng.randrange(d), rng.randrange(d)) for _ in range(triples))
            for i, j, k in trip:
                lhs = self.product(n, self.product(n, {i: 1}, {j: 1}), {k: 1})
                rhs = self.product(n, {i: 1}, self.product(n, {j: 1}, {k: 1}))
                if lhs != rhs:
                    return ("associative", f"(e{i} e{j}) e{k} != e{i} (e{j} e{k}) at size {n}")
        for u in sweep(self.bound, cfg):
            x, y = u.source, u.target
            act = self.action(u)
            if act.apply(self.unit[x]) != self.unit[y]:
                return ("algebra action", f"{u.short()} does not preserve the unit")
            if act @ self.mul[x] != self.mul[y] @ kron(act, act):
                return ("algebra action", f"{u.short()} is not multiplicative")
        return None


def algebra_FT(t: Lattice, bound: int, validate: bool = True) -> AlgebraFunctorRep:
    """F_T with pointwise join as product and the constant-0̂ function as unit."""
    carrier = functor_FT(t, bound)
    size = t.size
    join = t.join_array
    mul, unit = [], []
    for n in range(bound + 1):
        funcs = _function_table(size, n)
        d = funcs.shape[0]
        w = size ** np.arange(n - 1, -1, -1, dtype=np.int64)
        if n:
            joined = join[funcs[:, None, :], funcs[None, :, :]]
            img = (joined @ w).reshape(d * d)
            zero = int(t.bottom * w.sum())
        else:
            img = np.zeros(1, dtype=np.int64)
            zero = 0
        mul.append(Matrix.from_map(d, img))
        unit.append({zero: 1})
    return AlgebraFunctorRep(carrier, mul, unit, name=f"alg F[{t.name or t.size}]", validate=validate)


def product_algebra(a: AlgebraFunctorRep, b: AlgebraFunctorRep, validate: bool = True) -> AlgebraFunctorRep:
    """Pointwise direct product A x B (dimensions add)."""
    carrier = direct_sum(a.carrier, b.carrier)
    mul, unit = [], []
    for n in range(a.bound + 1):
        da, db = a.dims[n], b.dims[n]
        d = da + db
        cols: list[Vec] = []
        for i in range(d):
            for j in range(d):
                if i < da and j < da:
                    cols.append(a.mul[n].col(i * da + j))
                elif i >= da and j >= da:
                    cols.append({k + da: v for k, v in b.mul[n].col((i - da) * db + (j - da)).items()})
                else:
                    cols.append({})
        mul.append(Matrix(d, d * d, cols=cols))
        unit.append({**a.unit[n], **{k + da: v for k, v in b.unit[n].items()}})
    return AlgebraFunctorRep(carrier, mul, unit, name=f"({a.name}x{b.name})", validate=validate)


def mu_hat(a: AlgebraFunctorRep, x: int, y: int) -> Matrix:
    """μ̂_{X,Y} = μ_{X⊔Y} ∘ (action of (Δ_X over ∅) ⊗ action of (∅ over Δ_Y))."""
    return a.mul[x + y] @ kron(a.action(inject_left(x, y)), a.action(inject_right(x, y)))


def _invertible(m: Matrix) -> bool:
    if m.nrows != m.ncols:
        return False
    if m.is_map:
        img = m.img
        return bool((img >= 0).all() and np.unique(img).size == m.ncols)
    return rank(m) == m.nrows


def check_exponential(a: AlgebraFunctorRep) -> VerificationReport:
    rep = VerificationReport("exponential", f"A={a.name} N={a.bound}")
    rep.checked_cases += 1
    if a.dims[0] != 1:
        return rep.fail(f"dim A(0) = {a.dims[0]}")
    for x in range(a.bound + 1):
        for y in range(a.bound + 1 - x):
            rep.checked_cases += 1
            if not _invertible(mu_hat(a, x, y)):
                return rep.fail(f"mu_hat({x},{y}) is not invertible")
    return rep


# --- splitting ---------------------------------------------------------------------------

@dataclass
class SplitBasis:
    idempotents: list[Vec]
    labels: list[str]

    def matrix(self, d: int) -> Matrix:
        return Matrix(d, len(self.idempotents), cols=[dict(e) for e in self.idempotents])


def _restrict(op: Matrix, basis: list[Vec]) -> Matrix:
    coords = SpanCoordinates(basis)
    cols = []
    for b in basis:
        c = coords.coords(op.apply(b))
        if c is None:
            raise NotSplitError("an eigenspace is not stable under multiplication")
        cols.append(c)
    return Matrix(len(basis), len(basis), cols=cols)


def _combine(basis: list[Vec], coeffs: Vec) -> Vec:
    out: Vec = {}
    for i, c in coeffs.items():
        vec_axpy(out, c, basis[i])
    return out


def split_idempotents(a: AlgebraFunctorRep) -> SplitBasis:
    """Primitive orthogonal idempotents of A(•) by simultaneous eigenspace refinement."""
    if a.bound < 1 or a.dims[1] < 1:
        raise NotSplitError("A(1) is zero")
    d = a.dims[1]
    mu = a.mul[1]
    for i in range(d):
        for j in range(i + 1, d):
            if mu.col(i * d + j) != mu.col(j * d + i):
                raise NotCommutativeError(f"e{i} e{j} != e{j} e{i}")
    blocks: list[list[Vec]] = [[{i: 1} for i in range(d)]]
    for b in range(d):
        if all(len(blk) == 1 for blk in blocks):
            break
        op = left_multiplication(mu, d, {b: 1})
        new_blocks = []
        for blk in blocks:
            if len(blk) == 1:
                new_blocks.append(blk)
                continue
            local = _restrict(op, blk)
            roots = rational_roots(charpoly(local))
            if sum(roots.values()) < len(blk):
                raise NotSplitError(f"multiplication by e{b} has eigenvalues outside Q")
            pieces = []
            for r in sorted(roots):
                shifted = local - Matrix.identity(len(blk)).scale(r)
                pieces.append([_combine(blk, v) for v in kernel_vectors(shifted)])
            if sum(len(p) for p in pieces) < len(blk):
                raise NotSplitError(f"multiplication by e{b} is not diagonalisable")
            new_blocks.extend(pieces)
        blocks = new_blocks
    if any(len(blk) != 1 for blk in blocks):
        raise NotSplitError("common eigenspaces are not one-dimensional")
    idems = []
    for (v,) in blocks:
        sq = a.product(1, v, v)
        k = min(v)
        c = as_scalar(Fraction(sq.get(k, 0)) / Fraction(v[k]))
        if c == 0 or vec_scale(c, v) != sq:
            raise NotSplitError("a one-dimensional ideal squares to zero")
        idems.append(vec_scale(Fraction(1) / Fraction(c), v))
    idems.sort(key=lambda e: sorted((k, Fraction(v)) for k, v in e.items()))
    total: Vec = {}
    for i, e in enumerate(idems):
        vec_axpy(total, 1, e)
        for j in range(i + 1, len(idems)):
            if a.product(1, e, idems[j]):
                raise NotSplitError("idempotents are not orthogonal")
    if total != a.unit[1]:
        raise NotSplitError("idempotents do not sum to the unit")
    return SplitBasis(idems, [f"f{i}" for i in range(len(idems))])


# --- comultiplication and counit ---------------------------------------------------------------

def comultiplication(a: AlgebraFunctorRep) -> Matrix:
    """δ_• = μ̂_{•,•}^{-1} ∘ action of (Δ_• over Δ_•)."""
    if a.bound < 2:
        raise AlgebraError("bound", "comultiplication needs bound >= 2")
    return invert(mu_hat(a, 1, 1)) @ a.action(diagonal(1))


def counit(a: AlgebraFunctorRep) -> Matrix:
    """η_•: A(•) -> A(∅) = k, the action of the empty correspondence."""
    if a.dims[0] != 1:
        raise AlgebraError("exponential", "A(0) is not one-dimensional")
    return a.action(empty(0, 1))


def _tensor_product_mul(mu: Matrix, d: int) -> Matrix:
    """Multiplication of A ⊗ A: (a⊗b)(c⊗e) = ac ⊗ be."""
    cols = []
    for i in range(d * d):
        a1, b1 = divmod(i, d)
        for j in range(d * d):
            a2, b2 = divmod(j, d)
            x = mu.col(a1 * d + a2)
            y = mu.col(b1 * d + b2)
            cols.append({p * d + q: norm(u * v) for p, u in x.items() for q, v in y.items()})
    return Matrix(d * d, d ** 4, cols=cols)


def _swap_matrix(d: int) -> Matrix:
    idx = np.arange(d * d)
    return Matrix.from_map(d * d, (idx % d) * d + idx // d)


def check_comultiplication(a: AlgebraFunctorRep, delta: Matrix | None = None,
                           eta: Matrix | None = None) -> VerificationReport:
    """δ_• is a coassociative cocommutative algebra map with μδ = id, and η_• is an algebraic counit."""
    rep = VerificationReport("comultiplication", f"A={a.name}")
    d = a.dims[1]
    delta = delta if delta is not None else comultiplication(a)
    eta = eta if eta is not None else counit(a)
    ident = Matrix.identity(d)
    checks = [
        ("algebra map", lambda: delta @ a.mul[1] == _tensor_product_mul(a.mul[1], d) @ kron(delta, delta)),
        ("unit", lambda: delta.apply(a.unit[1]) == kron(Matrix.column(a.unit[1], d), Matrix.column(a.unit[1], d)).col(0)),
        ("coassociative", lambda: kron(delta, ident) @ delta == kron(ident, delta) @ delta),
        ("cocommutative", lambda: _swap_matrix(d) @ delta == delta),
        ("mu delta = id", lambda: (a.mul[1] @ delta).is_identity()),
        ("left counit", lambda: (kron(eta, ident) @ delta).is_identity()),
        ("right counit", lambda: (kron(ident, eta) @ delta).is_identity()),
        ("counit multiplicative", lambda: eta @ a.mul[1] == kron(eta, eta)),
        ("counit unital", lambda: eta.apply(a.unit[1]) == {0: 1}),
    ]
    for label, check in checks:
        rep.checked_cases += 1
        if not check():
            return rep.fail(label)
    return rep


# --- reconstruction ------------------------------------------------------------------------

@dataclass
class Diagnosis:
    step: str
    hypothesis: str
    detail: str

    def __str__(self) -> str:
        return f"step {self.step}: {self.hypothesis} ({self.detail})"


@dataclass
class Reconstruction:
    lattice: Lattice | None = None
    lam: list[Matrix] = field(default_factory=list)
    idempotents: list[Vec] = field(default_factory=list)
    g: list[Vec] = field(default_factory=list)
    meet: list[list[int]] = field(default_factory=list)
    top: int | None = None
    diagnosis: Diagnosis | None = None
    cases: int = 0

    @property
    def ok(self) -> bool:
        return self.diagnosis is None

    def failed(self, step: str, hypothesis: str, detail: str) -> "Reconstruction":
        self.diagnosis = Diagnosis(step, hypothesis, detail)
        return self


def delta_expansion(a: AlgebraFunctorRep, idems: Sequence[Vec], delta: Matrix) -> list[dict[tuple[int, int], object]]:
    """Coefficients of δ(f_t) in the basis f_a ⊗ f_b, one dict per t."""
    d = a.dims[1]
    p = Matrix(d, len(idems), cols=[dict(e) for e in idems])
    q = invert(p)
    qq = kron(q, q)
    m = len(idems)
    out = []
    for e in idems:
        c = qq.apply(delta.apply(e))
        out.append({divmod(k, m): v for k, v in c.items()})
    return out


def _lambda_matrices(a: AlgebraFunctorRep, size: int, g: Sequence[Vec]) -> list[Matrix]:
    """λ_X(φ) = Π_x C_x g_{φ(x)}, C_x = {(x, •)}, for every size up to the bound."""
    out = []
    for n in range(a.bound + 1):
        if n == 0:
            out.append(Matrix(a.dims[0], 1, cols=[dict(a.unit[0])]))
            continue
        lifted = []
        for x in range(n):
            cx = Correspondence(n, 1, tuple(1 if y == x else 0 for y in range(n)))
            act = a.action(cx)
            lifted.append([act.apply(gt) for gt in g])
        layer = [dict(v) for v in lifted[0]]
        for x in range(1, n):
            layer = [a.product(n, prev, nxt) for prev in layer for nxt in lifted[x]]
        out.append(Matrix(a.dims[n], size ** n, cols=layer))
    return out


def reconstruct_lattice(a: AlgebraFunctorRep, cfg: SweepConfig = SweepConfig(samples=200),
                        check_pairs: int = 2000, seed: int = 0) -> Reconstruction:
    res = Reconstruction()
    exp = check_exponential(a)
    res.cases += exp.checked_cases
    if not exp.passed:
        return res.failed("0", "exponential property", exp.witness)
    # (1) split A(•)
    try:
        split = split_idempotents(a)
    except AlgebraError as exc:
        return res.failed("1", exc.hypothesis, str(exc))
    f = split.idempotents
    res.idempotents = f
    m = len(f)
    # (2) expand δ(f_t) on f_a ⊗ f_b
    try:
        delta = comultiplication(a)
    except (NotInvertibleError, AlgebraError) as exc:
        return res.failed("2", "exponential property", str(exc))
    owner: dict[tuple[int, int], int] = {}
    for t, coeffs in enumerate(delta_expansion(a, f, delta)):
        for ab, c in coeffs.items():
            if c != 1:
                return res.failed("2", "zero-one coefficients", f"delta(f{t}) has coefficient {c} on f{ab[0]}⊗f{ab[1]}")
            if ab in owner:
                return res.failed("2", "partition", f"f{ab[0]}⊗f{ab[1]} occurs in delta(f{owner[ab]}) and delta(f{t})")
            owner[ab] = t
    if len(owner) != m * m:
        missing = next((x, y) for x in range(m) for y in range(m) if (x, y) not in owner)
        return res.failed("2", "partition", f"f{missing[0]}⊗f{missing[1]} occurs in no delta(f_t)")
    # (3) the meet
    meet = [[owner[(x, y)] for y in range(m)] for x in range(m)]
    res.meet = meet
    for x in range(m):
        res.cases += 1
        if meet[x][x] != x:
            return res.failed("3", "idempotent meet", f"f{x}")
        for y in range(m):
            if meet[x][y] != meet[y][x]:
                return res.failed("3", "commutative meet", f"f{x}, f{y}")
            for z in range(m):
                if meet[meet[x][y]][z] != meet[x][meet[y][z]]:
                    return res.failed("3", "associative meet", f"f{x}, f{y}, f{z}")
    # (4) top from the counit
    eta = counit(a)
    values = [eta.apply(e).get(0, 0) for e in f]
    if any(v not in (0, 1) for v in values):
        return res.failed("4", "counit values", f"eta(f) = {values}")
    tops = [t for t, v in enumerate(values) if v == 1]
    if len(tops) != 1:
        return res.failed("4", "unique counit-positive idempotent", f"{len(tops)} candidates")
    u = tops[0]
    res.top = u
    if any(meet[u][t] != t for t in range(m)):
        return res.failed("4", "top element", f"f{u} is not above every element")
    # (5) the lattice
    le = [[meet[x][y] == x for y in range(m)] for x in range(m)]
    for x in range(m):
        for y in range(m):
            ups = [z for z in range(m) if le[x][z] and le[y][z]]
            j = u
            for z in ups:
                j = meet[j][z]
            if not (le[x][j] and le[y][j]):
                return res.failed("5", "join via upper bounds", f"f{x}, f{y}")
    try:
        lat = Lattice.from_leq(le, name="recovered", labels=[f"f{i}" for i in range(m)])
    except LatticeError as exc:
        return res.failed("5", "lattice", str(exc))
    res.lattice = lat
    # (6) g_t = Σ_{s >= t} f_s
    g = []
    for t in range(m):
        acc: Vec = {}
        for s in range(m):
            if le[t][s]:
                vec_axpy(acc, 1, f[s])
        g.append(acc)
    res.g = g
    if g[lat.bottom] != a.unit[1]:
        return res.failed("6", "g basis", "g of the bottom is not the unit")
    for s in range(m):
        for t in range(m):
            res.cases += 1
            if a.product(1, g[s], g[t]) != g[lat.join(s, t)]:
                return res.failed("6", "g basis", f"g{s} g{t} != g of the join")
    # (7) λ
    lam = _lambda_matrices(a, m, g)
    res.lam = lam
    # (8) checks on λ
    ft = algebra_FT(lat, a.bound, validate=False)
    for n, l in enumerate(lam):
        res.cases += 1
        if not _invertible(l):
            return res.failed("8", "lambda invertible", f"size {n}")
        if l.apply(ft.unit[n]) != a.unit[n]:
            return res.failed("8", "lambda unital", f"size {n}")
    rng = random.Random(seed)
    for n, l in enumerate(lam):
        d = ft.dims[n]
        if d * d <= check_pairs:
            pairs = ((i, j) for i in range(d) for j in range(d))
        else:
            pairs = ((rng.randrange(d), rng.randrange(d)) for _ in range(check_pairs))
        for i, j in pairs:
            res.cases += 1
            prod = ft.product(n, {i: 1}, {j: 1})
            if l.apply(prod) != a.product(n, l.col(i), l.col(j)):
                return res.failed("8", "lambda multiplicative", f"size {n}, basis {i} and {j}")
    for uc in sweep(a.bound, cfg):
        res.cases += 1
        if a.action(uc) @ lam[uc.source] != lam[uc.target] @ ft.action(uc):
            return res.failed("8", "lambda natural", uc.short())
    return res


def match_to_reference(rec: Reconstruction, t: Lattice) -> list[int] | None:
    """Relabeling recovered index -> element of t, when A(•) is F_T(•) with its g-basis.

    Recovered idempotents are compared with the Möbius idempotents of t; if
    they are not literally equal an abstract lattice isomorphism is sought.
    """
    f_from_g, _ = idempotent_basis(t)
    ref = {tuple(sorted(f_from_g.col(s).items())): s for s in range(t.size)}
    perm = []
    for e in rec.idempotents:
        s = ref.get(tuple(sorted(e.items())))
        if s is None:
            break
        perm.append(s)
    if len(perm) == t.size and len(set(perm)) == t.size:
        return perm
    if rec.lattice is None:
        return None
    return find_isomorphism(rec.lattice, t)


def meet_tables_agree(rec: Reconstruction, t: Lattice, perm: Sequence[int]) -> bool:
    m = len(perm)
    return all(perm[rec.meet[x][y]] == t.meet(perm[x], perm[y]) for x in range(m) for y in range(m))


def verify_reconstruction(t: Lattice, bound: int, cfg: SweepConfig = SweepConfig(samples=200)) -> VerificationReport:
    """Round trip: the lattice recovered from algebra_FT(T) is T up to the computed relabeling."""
    rep = VerificationReport("reconstruct", f"T={t.name or t.size} N={bound}")
    rec = reconstruct_lattice(algebra_FT(t, bound), cfg)
    rep.checked_cases = rec.cases
    if not rec.ok:
        return rep.fail(str(rec.diagnosis))
    perm = match_to_reference(rec, t)
    if perm is None:
        return rep.fail("no relabeling onto the reference lattice")
    rep.checked_cases += 1
    if not meet_tables_agree(rec, t, perm):
        return rep.fail(f"meet tables differ under relabeling {perm}")
    rep.details["relabeling"] = list(perm)
    return rep


# --- multiplicativity of unions --------------------------------------------------------------

def verify_product_union(a: AlgebraFunctorRep, t: Lattice | None = None, random_pairs: int = 300,
                         seed: int = 0) -> VerificationReport:
    """(W g_t)(Z g_t) = (W ∪ Z) g_t for W, Z ⊆ Y x •.

    With ``t`` given, A(•) is taken to be F_T(•) and g_t is the basis vector t;
    otherwise the g-basis comes from reconstruction.
    """
    rep = VerificationReport("product-union", f"A={a.name} N={a.bound}")
    if t is not None:
        g = [{s: 1} for s in range(t.size)]
    else:
        rec = reconstruct_lattice(a)
        if not rec.ok:
            return rep.fail(str(rec.diagnosis))
        g = rec.g
    rng = random.Random(seed)
    for y in range(min(a.bound, 3) + 1):
        if y <= 2:
            pairs = [(w, z) for w in range(1 << y) for z in range(1 << y)]
        else:
            pairs = [(rng.randrange(1 << y), rng.randrange(1 << y)) for _ in range(random_pairs)]
        for w, z in pairs:
            cw = Correspondence.from_pattern(y, 1, w)
            cz = Correspondence.from_pattern(y, 1, z)
            cu = Correspondence.from_pattern(y, 1, w | z)
            aw, az, au = a.action(cw), a.action(cz), a.action(cu)
            for s, gs in enumerate(g):
                rep.checked_cases += 1
                if a.product(y, aw.apply(gs), az.apply(gs)) != au.apply(gs):
                    return rep.fail(f"Y={y} W={cw.short()} Z={cz.short()} t={s}")
    return rep


def verify_idempotent_calculus(t: Lattice, bound: int) -> VerificationReport:
    """Möbius idempotents of F_T(•), the δ/η calculus and the product-union identity."""
    rep = VerificationReport("idempotents", f"T={t.name or t.size} N={bound}")
    a = algebra_FT(t, bound)
    f_from_g, _ = idempotent_basis(t)
    f = [f_from_g.col(s) for s in range(t.size)]
    total: Vec = {}
    for i, e in enumerate(f):
        vec_axpy(total, 1, e)
        for j, e2 in enumerate(f):
            rep.checked_cases += 1
            prod = a.product(1, e, e2)
            if prod != (e if i == j else {}):
                return rep.fail(f"f{i} f{j} wrong")
    rep.checked_cases += 1
    if total != a.unit[1]:
        return rep.fail("idempotents do not sum to the unit")
    sub = check_comultiplication(a)
    rep.checked_cases += sub.checked_cases
    if not sub.passed:
        return rep.fail(f"comultiplication: {sub.witness}")
    delta = comultiplication(a)
    for s in range(t.size):
        rep.checked_cases += 1
        if delta.apply({s: 1}) != {s * t.size + s: 1}:
            return rep.fail(f"delta(g{s}) != g{s}⊗g{s}")
        expected: Vec = {}
        for x in range(t.size):
            for y in range(t.size):
                if t.meet(x, y) == s:
                    for i, u in f[x].items():
                        for j, v in f[y].items():
                            vec_axpy(expected, u * v, {i * t.size + j: 1})
        if delta.apply(f[s]) != expected:
            return rep.fail(f"delta(f{s}) is not the sum over meets")
    sub = verify_product_union(a, t)
    rep.checked_cases += sub.checked_cases
    if not sub.passed:
        return rep.fail(f"product-union: {sub.witness}")
    return rep


# --- text format ---------------------------------------------------------------------------

def _fmt(v) -> str:
    return str(v)


def _close_actions(known: dict[Correspondence, Matrix], bound: int) -> dict[Correspondence, Matrix]:
    """Close a set of action matrices under composition; raises on inconsistent routes."""
    out = dict(known)
    for n in range(bound + 1):
        out.setdefault(identity(n), None)
    frontier = list(out)
    while frontier:
        new = []
        items = list(out.items())
        for u in frontier:
            mu = out[u]
            for v, mv in items:
                for first, second, m1, m2 in ((u, v, mu, mv), (v, u, mv, mu)):
                    if second.source != first.target:
                        continue
                    c = compose(second, first)
                    prod = None if m1 is None and m2 is None else _mat_compose(m2, m1, second, first)
                    if c not in out:
                        out[c] = prod
                        new.append(c)
                    elif prod is not None and out[c] is not None and out[c] != prod:
                        raise ParseError(f"action is not functorial: two routes to {c.short()} disagree")
        frontier = new
    return out


def _mat_compose(m2, m1, second, first):
    if m2 is None:
        return m1
    if m1 is None:
        return m2
    return m2 @ m1


def load_algebra(text: str, validate: bool = True) -> AlgebraFunctorRep:
    """Parse the line-oriented algebra format (see ``dump_algebra``)."""
    bound = None
    dims = None
    unit: dict[int, Vec] = {}
    mul: dict[int, dict[int, Vec]] = {}
    actions: dict[Correspondence, dict[int, Vec]] = {}
    current = None

    def parse_vec(tokens, line_no) -> Vec:
        v: Vec = {}
        for tok in tokens:
            try:
                k, c = tok.split(":")
                val = as_scalar(Fraction(c))
                if val:
                    v[int(k)] = val
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad entry {tok!r}", line_no) from None
        return v

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        try:
            if head == "algebra":
                bound = int(tok[1])
            elif head == "dims":
                dims = [int(x) for x in tok[1:]]
            elif head == "unit":
                unit[int(tok[1])] = parse_vec(tok[2:], line_no)
            elif head == "mul":
                n, i, j = int(tok[1]), int(tok[2]), int(tok[3])
                if dims is None:
                    raise ParseError("mul before dims", line_no)
                mul.setdefault(n, {})[i * dims[n] + j] = parse_vec(tok[4:], line_no)
            elif head == "action":
                y, x, pattern = int(tok[1]), int(tok[2]), int(tok[3])
                current = Correspondence.from_pattern(y, x, pattern)
                actions[current] = {}
            elif head == "col":
                if current is None:
                    raise ParseError("col outside an action block", line_no)
                actions[current][int(tok[1])] = parse_vec(tok[2:], line_no)
            else:
                raise ParseError(f"unknown keyword {head!r}", line_no)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed line: {line}", line_no) from None
    if bound is None or dims is None:
        raise ParseError("missing 'algebra' or 'dims' header")
    if len(dims) != bound + 1:
        raise ParseError("dims must list one entry per size")
    given = {}
    for u, cols in actions.items():
        if max(u.shape) > bound:
            raise ParseError(f"action {u.short()} exceeds the bound")
        given[u] = Matrix(dims[u.target], dims[u.source], cols=[cols.get(j, {}) for j in range(dims[u.source])])
    closed = _close_actions(given, bound)
    for n in range(bound + 1):
        closed[identity(n)] = Matrix.identity(dims[n])
    missing = [u for u in all_up_to(bound) if u not in closed]
    if missing:
        raise ParseError(f"generators do not reach {missing[0].short()}")
    table = {u: (m if m is not None else Matrix.identity(dims[u.target])) for u, m in closed.items()}
    carrier = FunctorRep(bound, dims, lambda u: table[u], name="loaded")
    muls = [Matrix(dims[n], dims[n] ** 2, cols=[mul.get(n, {}).get(k, {}) for k in range(dims[n] ** 2)])
            for n in range(bound + 1)]
    units = [unit.get(n, {}) for n in range(bound + 1)]
    return AlgebraFunctorRep(carrier, muls, units, name="loaded", validate=validate)


def generating_set(a: AlgebraFunctorRep, bound: int) -> list[Correspondence]:
    """Greedy list of correspondences whose actions generate all others by composition."""
    kept: list[Correspondence] = []
    reach = set(_close_actions({}, bound))
    for u in all_up_to(bound):
        if u in reach:
            continue
        kept.append(u)
        reach = set(_close_actions({v: None for v in kept}, bound))
    return kept


def dump_algebra(a: AlgebraFunctorRep, bound: int = 2) -> str:
    bound = min(bound, a.bound)
    dims = a.dims[:bound + 1]
    lines = [f"algebra {bound}", "dims " + " ".join(map(str, dims))]

    def vec(v: Vec) -> str:
        return " ".join(f"{k}:{_fmt(c)}" for k, c in sorted(v.items()))

    for n in range(bound + 1):
        lines.append(f"unit {n} {vec(a.unit[n])}".rstrip())
    for n in range(bound + 1):
        d = dims[n]
        for k in range(d * d):
            col = a.mul[n].col(k)
            if col:
                i, j = divmod(k, d)
                lines.append(f"mul {n} {i} {j} {vec(col)}")
    for u in generating_set(a, bound):
        lines.append(f"action {u.target} {u.source} {u.pattern}")
        m = a.action(u)
        for j in range(m.ncols):
            col = m.col(j)
            if col:
                lines.append(f"col {j} {vec(col)}")
    return "\n".join(lines) + "\n"


__all__ = [
    "AlgebraError", "NotSplitError", "NotCommutativeError", "AlgebraFunctorRep", "SplitBasis", "algebra_FT",
    "product_algebra", "mu_hat", "check_exponential", "split_idempotents", "comultiplication", "counit",
    "check_comultiplication", "Diagnosis", "Reconstruction", "delta_expansion", "reconstruct_lattice",
    "match_to_reference", "meet_tables_agree", "verify_reconstruction", "verify_product_union",
    "verify_idempotent_calculus", "load_algebra", "dump_algebra", "generating_set", "multiply",
    "left_multiplication",
]
