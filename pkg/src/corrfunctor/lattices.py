"""Finite lattices, join-morphisms, products and the Möbius function."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .kernel import Matrix
from .relations import ParseError


class LatticeError(ValueError):
    """Raised when an order is not a lattice; ``witness`` names the offending pair."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message}: {witness}")


class CycleError(LatticeError):
    pass


class JoinMorphismError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Lattice:
    size: int
    leq: tuple[tuple[bool, ...], ...]
    join_table: tuple[tuple[int, ...], ...]
    meet_table: tuple[tuple[int, ...], ...]
    bottom: int
    top: int
    name: str = ""
    labels: tuple[str, ...] = field(default=())

    @classmethod
    def from_leq(cls, leq, name: str = "", labels=()) -> "Lattice":
        """Build a lattice from a partial order matrix, computing joins and meets
        by scanning upper and lower bounds."""
        n = len(leq)
        if n == 0:
            raise LatticeError("the empty poset has no least element")
        le = tuple(tuple(bool(leq[a][b]) for b in range(n)) for a in range(n))
        for a in range(n):
            if not le[a][a]:
                raise LatticeError("order is not reflexive", a)
            for b in range(n):
                if a != b and le[a][b] and le[b][a]:
                    raise CycleError("order is not antisymmetric", (a, b))
                for c in range(n):
                    if le[a][b] and le[b][c] and not le[a][c]:
                        raise LatticeError("order is not transitive", (a, b, c))
        join = [[0] * n for _ in range(n)]
        meet = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                ups = [c for c in range(n) if le[a][c] and le[b][c]]
                least = [c for c in ups if all(le[c][d] for d in ups)]
                if not least:
                    raise LatticeError("pair has no join", (a, b))
                downs = [c for c in range(n) if le[c][a] and le[c][b]]
                greatest = [c for c in downs if all(le[d][c] for d in downs)]
                if not greatest:
                    raise LatticeError("pair has no meet", (a, b))
                join[a][b] = join[b][a] = least[0]
                meet[a][b] = meet[b][a] = greatest[0]
        bottoms = [a for a in range(n) if all(le[a][b] for b in range(n))]
        tops = [a for a in range(n) if all(le[b][a] for b in range(n))]
        if not bottoms:
            raise LatticeError("no least element")
        if not tops:
            raise LatticeError("no greatest element")
        return cls(n, le, tuple(map(tuple, join)), tuple(map(tuple, meet)), bottoms[0], tops[0],
                   name, tuple(labels) or tuple(str(i) for i in range(n)))

    @classmethod
    def from_covers(cls, size: int, covers, name: str = "", labels=()) -> "Lattice":
        le = [[a == b for b in range(size)] for a in range(size)]
        for a, b in covers:
            if not (0 <= a < size and 0 <= b < size):
                raise LatticeError("cover outside the element range", (a, b))
            if a == b:
                raise CycleError("cycle detected", (a, b))
            le[a][b] = True
        for k in range(size):
            for i in range(size):
                if le[i][k]:
                    for j in range(size):
                        if le[k][j]:
                            le[i][j] = True
        for a in range(size):
            for b in range(a + 1, size):
                if le[a][b] and le[b][a]:
                    raise CycleError("cycle detected", (a, b))
        return cls.from_leq(le, name, labels)

    @classmethod
    def from_meet_table(cls, meet, name: str = "") -> "Lattice":
        n = len(meet)
        le = [[meet[a][b] == a for b in range(n)] for a in range(n)]
        return cls.from_leq(le, name)

    # basic queries
    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"Lattice({self.name or self.size})"

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq[a][b]

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    @cached_property
    def join_array(self) -> np.ndarray:
        return np.asarray(self.join_table, dtype=np.int64).reshape(self.size, self.size)

    def covers(self) -> list[tuple[int, int]]:
        n = self.size
        return [(a, b) for a in range(n) for b in range(n)
                if self.lt(a, b) and not any(self.lt(a, c) and self.lt(c, b) for c in range(n))]

    def join_irreducibles(self) -> list[int]:
        return [a for a in range(self.size) if sum(1 for (_, b) in self.covers() if b == a) == 1]

    def linear_extension(self) -> list[int]:
        return sorted(range(self.size), key=lambda a: sum(self.leq[b][a] for b in range(self.size)))

    def is_distributive(self) -> bool:
        r = range(self.size)
        return all(self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
                   for a in r for b in r for c in r)

    def relabel(self, perm, name: str | None = None) -> "Lattice":
        """Lattice with element a renamed perm[a]."""
        n = self.size
        inv = [0] * n
        for a, p in enumerate(perm):
            inv[p] = a
        le = [[self.leq[inv[a]][inv[b]] for b in range(n)] for a in range(n)]
        return Lattice.from_leq(le, self.name if name is None else name)


def join_of_subset(t: Lattice, elements) -> int:
    acc = t.bottom
    for a in elements:
        acc = t.join(acc, a)
    return acc


def meet_of_subset(t: Lattice, elements) -> int:
    acc = t.top
    for a in elements:
        acc = t.meet(acc, a)
    return acc


def product(t: Lattice, u: Lattice) -> Lattice:
    """Componentwise product; the pair (a, b) has index a*|u| + b."""
    m = u.size
    n = t.size * m
    le = [[t.leq[i // m][j // m] and u.leq[i % m][j % m] for j in range(n)] for i in range(n)]
    join = tuple(tuple(t.join(i // m, j // m) * m + u.join(i % m, j % m) for j in range(n)) for i in range(n))
    meet = tuple(tuple(t.meet(i // m, j // m) * m + u.meet(i % m, j % m) for j in range(n)) for i in range(n))
    labels = tuple(f"({a},{b})" for a in t.labels for b in u.labels)
    return Lattice(n, tuple(map(tuple, le)), join, meet, t.bottom * m + u.bottom, t.top * m + u.top,
                   f"{t.name}x{u.name}", labels)


# --- join-morphisms -----------------------------------------------------------

def is_join_morphism(source: Lattice, target: Lattice, image) -> bool:
    """Finite criterion: preserves the bottom element and binary joins."""
    if image[source.bottom] != target.bottom:
        return False
    r = range(source.size)
    return all(image[source.join(a, b)] == target.join(image[a], image[b]) for a in r for b in r)


def is_join_morphism_bruteforce(source: Lattice, target: Lattice, image) -> bool:
    """The all-subsets definition, for cross-checking the finite criterion."""
    for k in range(source.size + 1):
        for sub in itertools.combinations(range(source.size), k):
            if image[join_of_subset(source, sub)] != join_of_subset(target, (image[a] for a in sub)):
                return False
    return True


@dataclass(frozen=True, eq=False)
class JoinMorphismMap:
    source: Lattice
    target: Lattice
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.source.size:
            raise JoinMorphismError("image has the wrong length")
        if not is_join_morphism(self.source, self.target, self.image):
            raise JoinMorphismError("map does not preserve joins")

    def __call__(self, a: int) -> int:
        return self.image[a]

    @classmethod
    def identity(cls, t: Lattice) -> "JoinMorphismMap":
        return cls(t, t, tuple(range(t.size)))

    @classmethod
    def zero(cls, source: Lattice, target: Lattice) -> "JoinMorphismMap":
        return cls(source, target, (target.bottom,) * source.size)


def product_of_morphisms(f: JoinMorphismMap, g: JoinMorphismMap) -> JoinMorphismMap:
    s = product(f.source, g.source)
    t = product(f.target, g.target)
    m, mt = g.source.size, g.target.size
    image = tuple(f(i // m) * mt + g(i % m) for i in range(s.size))
    return JoinMorphismMap(s, t, image)


def projections(t: Lattice, u: Lattice) -> tuple[JoinMorphismMap, JoinMorphismMap]:
    p = product(t, u)
    m = u.size
    return (JoinMorphismMap(p, t, tuple(i // m for i in range(p.size))),
            JoinMorphismMap(p, u, tuple(i % m for i in range(p.size))))


def all_join_morphisms(source: Lattice, target: Lattice):
    for image in itertools.product(range(target.size), repeat=source.size):
        if is_join_morphism(source, target, image):
            yield JoinMorphismMap(source, target, image)


# --- Möbius function and idempotent bases ------------------------------------------

def mobius_matrix(t: Lattice) -> list[list[int]]:
    """chi[a][b] for all pairs, by the defining recursion."""
    n = t.size
    order = t.linear_extension()
    chi = [[0] * n for _ in range(n)]
    for a in range(n):
        chi[a][a] = 1
        for b in order:
            if t.lt(a, b):
                chi[a][b] = -sum(chi[a][r] for r in range(n) if t.le(a, r) and t.lt(r, b))
    return chi


def mobius(t: Lattice, a: int, b: int) -> int:
    return mobius_matrix(t)[a][b]


def idempotent_basis(t: Lattice) -> tuple[Matrix, Matrix]:
    """Change of basis between g_t (the function with value t) and f_t.

    ``f_from_g`` has column t equal to f_t written in the g-basis, i.e. entry
    (s, t) = chi(t, s); ``g_from_f`` has column t equal to g_t = sum_{s>=t} f_s
    written in the f-basis.  The two are inverse to each other.
    """
    n = t.size
    chi = mobius_matrix(t)
    f_from_g = Matrix.from_rows([[chi[c][r] for c in range(n)] for r in range(n)])
    g_from_f = Matrix.from_rows([[1 if t.le(c, r) else 0 for c in range(n)] for r in range(n)])
    return f_from_g, g_from_f


# --- corpus ---------------------------------------------------------------------

def chain(n: int) -> Lattice:
    """The totally ordered lattice 0 < 1 < ... < n."""
    return Lattice.from_covers(n + 1, [(i, i + 1) for i in range(n)], name=f"chain{n}")


def powerset(n: int) -> Lattice:
    """Subsets of an n-set; the subset with bitmask m is element m."""
    size = 1 << n
    covers = [(m, m | 1 << i) for m in range(size) for i in range(n) if not m >> i & 1]
    labels = ["{" + ",".join(str(i) for i in range(n) if m >> i & 1) + "}" for m in range(size)]
    return Lattice.from_covers(size, covers, name=f"powerset{n}", labels=labels)


def m3() -> Lattice:
    return Lattice.from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], name="m3")


def n5() -> Lattice:
    # 0 < 1 < 2 < 4 and 0 < 3 < 4
    return Lattice.from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], name="n5")


def diamond() -> Lattice:
    t = powerset(2)
    return Lattice(t.size, t.leq, t.join_table, t.meet_table, t.bottom, t.top, "diamond", t.labels)


def corpus() -> dict[str, Lattice]:
    out = {f"chain{n}": chain(n) for n in range(5)}
    out.update({f"powerset{n}": powerset(n) for n in range(1, 4)})
    out["m3"] = m3()
    out["n5"] = n5()
    return out


def named_lattice(name: str) -> Lattice:
    if name == "diamond":
        return diamond()
    if name == "m3":
        return m3()
    if name == "n5":
        return n5()
    for prefix, make in (("chain", chain), ("powerset", powerset)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return make(int(name[len(prefix):]))
    raise KeyError(f"unknown lattice {name!r}")


# --- isomorphism -------------------------------------------------------------------

def find_isomorphism(a: Lattice, b: Lattice) -> list[int] | None:
    """An order isomorphism a -> b as an image list, or None."""
    if a.size != b.size:
        return None
    n = a.size

    def sig(t: Lattice, x: int):
        return (sum(t.leq[y][x] for y in range(n)), sum(t.leq[x][y] for y in range(n)))

    sa = [sig(a, x) for x in range(n)]
    sb = [sig(b, x) for x in range(n)]
    if sorted(sa) != sorted(sb):
        return None
    order = sorted(range(n), key=lambda x: sa[x])
    image = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        x = order[k]
        for y in range(n):
            if used[y] or sb[y] != sa[x]:
                continue
            if all(a.leq[x][z] == b.leq[y][image[z]] and a.leq[z][x] == b.leq[image[z]][y]
                   for z in order[:k]):
                image[x] = y
                used[y] = True
                if extend(k + 1):
                    return True
                used[y] = False
        image[x] = -1
        return False

    return image if extend(0) else None


# --- text format -----------------------------------------------------------------

def format_lattice(t: Lattice) -> str:
    lines = [f"lattice {t.size}"]
    lines += [f"cover {a} {b}" for a, b in t.covers()]
    return "\n".join(lines) + "\n"


def parse_lattice(text: str, name: str = "") -> Lattice:
    size = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "lattice" and len(parts) == 2:
                if size is not None:
                    raise ParseError("duplicate 'lattice' header", lineno)
                size = int(parts[1])
                if size < 1:
                    raise ParseError("lattice size must be positive", lineno)
            elif parts[0] == "cover" and len(parts) == 3:
                if size is None:
                    raise ParseError("'cover' before 'lattice' header", lineno)
                a, b = int(parts[1]), int(parts[2])
                if not (0 <= a < size and 0 <= b < size):
                    raise ParseError(f"element out of range 0..{size - 1}", lineno)
                covers.append((a, b))
            else:
                raise ParseError(f"unrecognised line {line!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError("expected integer arguments", lineno) from None
    if size is None:
        raise ParseError("missing 'lattice <size>' header")
    return Lattice.from_covers(size, covers, name=name)
