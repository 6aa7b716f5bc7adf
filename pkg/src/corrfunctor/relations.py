"""Finite sets and correspondences.

A finite set is identified with its size n and has elements 0..n-1.  A
correspondence U from X to Y is a subset of Y x X, stored as one bitset per
target element: bit x of ``rows[y]`` is set iff (y, x) is in U.  Disjoint
unions place the elements of the left summand first.

Correspondences in C(Y, X) are numbered by their *pattern*: the rows read as
|X|-bit digits with row 0 most significant.  Enumeration is in ascending
pattern order, and this numbering is the basis order of representable
functors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Mapping

from .kernel import DimensionError, Scalar, as_scalar, norm

MAX_ENUMERATION_BITS = 25


class ParseError(ValueError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, slots=True)
class Correspondence:
    target: int
    source: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.target:
            raise DimensionError("row count does not match target size")
        full = (1 << self.source) - 1
        if any(r & ~full for r in self.rows):
            raise DimensionError("row bits outside the source set")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.target, self.source)

    def __contains__(self, pair) -> bool:
        y, x = pair
        return bool(self.rows[y] >> x & 1)

    def pairs(self) -> list[tuple[int, int]]:
        return [(y, x) for y, r in enumerate(self.rows) for x in range(self.source) if r >> x & 1]

    @property
    def pattern(self) -> int:
        p = 0
        for r in self.rows:
            p = (p << self.source) | r
        return p

    @classmethod
    def from_pattern(cls, target: int, source: int, pattern: int) -> "Correspondence":
        mask = (1 << source) - 1
        rows = tuple((pattern >> (source * (target - 1 - y))) & mask for y in range(target))
        return cls(target, source, rows)

    @classmethod
    def from_pairs(cls, target: int, source: int, pairs) -> "Correspondence":
        rows = [0] * target
        for y, x in pairs:
            if not (0 <= y < target and 0 <= x < source):
                raise DimensionError(f"pair {(y, x)} outside {target}x{source}")
            rows[y] |= 1 << x
        return cls(target, source, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix) -> "Correspondence":
        target = len(matrix)
        source = len(matrix[0]) if target else 0
        rows = tuple(sum(1 << x for x, b in enumerate(row) if b) for row in matrix)
        return cls(target, source, rows)

    def to_matrix(self) -> list[list[int]]:
        return [[r >> x & 1 for x in range(self.source)] for r in self.rows]

    def column(self, x: int) -> int:
        """Bitset over targets of the elements related to x."""
        return sum(1 << y for y, r in enumerate(self.rows) if r >> x & 1)

    def transpose(self) -> "Correspondence":
        return Correspondence(self.source, self.target, tuple(self.column(x) for x in range(self.source)))

    def union(self, other: "Correspondence") -> "Correspondence":
        if self.shape != other.shape:
            raise DimensionError("union of correspondences of different shapes")
        return Correspondence(self.target, self.source, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __matmul__(self, other: "Correspondence") -> "Correspondence":
        return compose(self, other)

    def __str__(self) -> str:
        return format_correspondence(self).rstrip("\n")

    def short(self) -> str:
        body = "/".join("".join(str(r >> x & 1) for x in range(self.source)) or "-" for r in self.rows)
        return f"{self.target}x{self.source}:{body or '-'}"


def compose(v: Correspondence, u: Correspondence) -> Correspondence:
    """V∘U: (z, x) related iff some y has (z, y) in V and (y, x) in U."""
    if v.source != u.target:
        raise DimensionError(f"cannot compose {v.shape} after {u.shape}")
    urows = u.rows
    out = []
    for r in v.rows:
        acc = 0
        y = 0
        while r:
            if r & 1:
                acc |= urows[y]
            r >>= 1
            y += 1
        out.append(acc)
    return Correspondence(v.target, u.source, tuple(out))


def identity(n: int) -> Correspondence:
    return Correspondence(n, n, tuple(1 << i for i in range(n)))


def empty(target: int, source: int) -> Correspondence:
    return Correspondence(target, source, (0,) * target)


def full(target: int, source: int) -> Correspondence:
    return Correspondence(target, source, ((1 << source) - 1,) * target)


def block_diag(u: Correspondence, v: Correspondence) -> Correspondence:
    """U ⊔ V from X ⊔ Y to X' ⊔ Y'."""
    shift = u.source
    rows = u.rows + tuple(r << shift for r in v.rows)
    return Correspondence(u.target + v.target, u.source + v.source, rows)


def stack(u: Correspondence, v: Correspondence) -> Correspondence:
    """The correspondence (U over V) from X to X' ⊔ X''."""
    if u.source != v.source:
        raise DimensionError("stack needs a common source")
    return Correspondence(u.target + v.target, u.source, u.rows + v.rows)


def concat(u: Correspondence, v: Correspondence) -> Correspondence:
    """The correspondence (U, V) from X' ⊔ X'' to X."""
    if u.target != v.target:
        raise DimensionError("concat needs a common target")
    shift = u.source
    return Correspondence(u.target, u.source + v.source, tuple(a | (b << shift) for a, b in zip(u.rows, v.rows)))


def inject_left(x: int, y: int) -> Correspondence:
    """(Δ_X over ∅) in C(X ⊔ Y, X)."""
    return stack(identity(x), empty(y, x))


def inject_right(x: int, y: int) -> Correspondence:
    """(∅ over Δ_Y) in C(X ⊔ Y, Y)."""
    return stack(empty(x, y), identity(y))


def fold(x: int) -> Correspondence:
    """(Δ_X, Δ_X) in C(X, X ⊔ X)."""
    return concat(identity(x), identity(x))


def diagonal(x: int) -> Correspondence:
    """(Δ_X over Δ_X) in C(X ⊔ X, X)."""
    return stack(identity(x), identity(x))


def swap(x: int, y: int) -> Correspondence:
    """The bijection X ⊔ Y -> Y ⊔ X as a correspondence in C(Y ⊔ X, X ⊔ Y)."""
    rows = tuple(1 << (x + i) for i in range(y)) + tuple(1 << i for i in range(x))
    return Correspondence(x + y, x + y, rows)


def count_correspondences(target: int, source: int) -> int:
    return 1 << (target * source)


def enumerate_correspondences(target: int, source: int) -> Iterator[Correspondence]:
    bits = target * source
    if bits > MAX_ENUMERATION_BITS:
        raise ValueError(f"refusing to enumerate 2^{bits} correspondences")
    for p in range(1 << bits):
        yield Correspondence.from_pattern(target, source, p)


def random_correspondence(rng: random.Random, target: int, source: int) -> Correspondence:
    return Correspondence.from_pattern(target, source, rng.getrandbits(target * source) if target * source else 0)


def all_up_to(bound: int) -> Iterator[Correspondence]:
    """Every correspondence between sets of size <= bound."""
    for y in range(bound + 1):
        for x in range(bound + 1):
            yield from enumerate_correspondences(y, x)


# --- relation algebra R_X -----------------------------------------------------

@dataclass(frozen=True)
class RelAlgElement:
    """Element of the monoid algebra of relations on a set of size ``ground``."""

    ground: int
    coeffs: Mapping[Correspondence, Scalar]

    def __post_init__(self):
        clean = {}
        for u, c in self.coeffs.items():
            if u.shape != (self.ground, self.ground):
                raise DimensionError("relation on the wrong ground set")
            c = as_scalar(c)
            if c:
                clean[u] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def basis(cls, u: Correspondence, coeff: Scalar = 1) -> "RelAlgElement":
        if u.target != u.source:
            raise DimensionError("relation must be an endo-correspondence")
        return cls(u.target, {u: coeff})

    def __add__(self, other: "RelAlgElement") -> "RelAlgElement":
        if self.ground != other.ground:
            raise DimensionError("ground mismatch")
        out = dict(self.coeffs)
        for u, c in other.coeffs.items():
            out[u] = out.get(u, 0) + c
        return RelAlgElement(self.ground, out)

    def __mul__(self, other: "RelAlgElement") -> "RelAlgElement":
        return relalg_multiply(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, RelAlgElement) and self.ground == other.ground and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ground, frozenset(self.coeffs.items())))


def relalg_multiply(a: RelAlgElement, b: RelAlgElement) -> RelAlgElement:
    if a.ground != b.ground:
        raise DimensionError("ground mismatch")
    out: dict[Correspondence, Scalar] = {}
    for u, cu in a.coeffs.items():
        for v, cv in b.coeffs.items():
            w = compose(u, v)
            out[w] = norm(out.get(w, 0) + cu * cv)
    return RelAlgElement(a.ground, out)


# --- text format ----------------------------------------------------------------

def format_correspondence(u: Correspondence) -> str:
    lines = [f"corr {u.target} {u.source}"]
    for r in u.rows:
        lines.append("".join(str(r >> x & 1) for x in range(u.source)) or "-")
    return "\n".join(lines) + "\n"


def parse_correspondences(text: str) -> list[Correspondence]:
    """Parse one or more ``corr |Y| |X|`` blocks.  Zero-width rows are written ``-``."""
    out = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i].split("#", 1)[0].strip()
        i += 1
        if not raw:
            continue
        head = raw.split()
        if head[0] != "corr" or len(head) != 3:
            raise ParseError(f"expected 'corr <|Y|> <|X|>', got {raw!r}", i)
        try:
            target, source = int(head[1]), int(head[2])
        except ValueError:
            raise ParseError("sizes must be integers", i) from None
        if target < 0 or source < 0:
            raise ParseError("sizes must be non-negative", i)
        rows = []
        while len(rows) < target:
            if i >= len(lines):
                raise ParseError(f"expected {target} rows, found {len(rows)}", i)
            row = lines[i].split("#", 1)[0].strip()
            i += 1
            if not row and source > 0:
                continue
            if row in ("-", "") and source == 0:
                rows.append(0)
                continue
            if len(row) != source or set(row) - {"0", "1"}:
                raise ParseError(f"row must be {source} characters of 0/1, got {row!r}", i)
            rows.append(sum(1 << x for x, ch in enumerate(row) if ch == "1"))
        out.append(Correspondence(target, source, tuple(rows)))
    return out


def parse_correspondence(text: str) -> Correspondence:
    items = parse_correspondences(text)
    if len(items) != 1:
        raise ParseError(f"expected exactly one correspondence, found {len(items)}")
    return items[0]


__all__ = [
    "Correspondence", "RelAlgElement", "ParseError", "compose", "identity", "empty", "full",
    "block_diag", "stack", "concat", "inject_left", "inject_right", "fold", "diagonal", "swap",
    "enumerate_correspondences", "random_correspondence", "count_correspondences", "all_up_to",
    "relalg_multiply", "format_correspondence", "parse_correspondence", "parse_correspondences",
]
