"""Exact rational linear algebra.

Scalars are Python ``int`` or ``fractions.Fraction``; a Fraction with
denominator 1 is always collapsed back to ``int`` so integer-only work stays on
the fast path.  Nothing in this module ever rounds.

``Matrix`` is column-sparse.  Matrices whose columns each hold at most one
entry equal to 1 (the action of a correspondence on a basis of functions, a
permutation, ...) are kept as a numpy index array instead, which makes
composition and Kronecker products of such maps cheap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Scalar = int | Fraction
Vec = dict  # sparse vector: {index: nonzero Scalar}


class NotInvertibleError(ArithmeticError):
    pass


class DimensionError(ValueError):
    pass


def norm(x) -> Scalar:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def as_scalar(x) -> Scalar:
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return norm(x)
    if isinstance(x, str):
        return norm(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return norm(Fraction(x))


# --- sparse vectors -------------------------------------------------------

def vec_axpy(y: Vec, a: Scalar, x: Vec) -> None:
    """y += a*x in place."""
    for k, v in x.items():
        w = y.get(k, 0) + a * v
        if w:
            y[k] = norm(w)
        else:
            y.pop(k, None)


def vec_scale(a: Scalar, x: Vec) -> Vec:
    if not a:
        return {}
    return {k: norm(a * v) for k, v in x.items()}


def vec_combine(terms: Iterable[tuple[Scalar, Vec]]) -> Vec:
    out: Vec = {}
    for a, x in terms:
        if a:
            vec_axpy(out, a, x)
    return out


def dense_to_vec(values: Sequence) -> Vec:
    return {i: as_scalar(v) for i, v in enumerate(values) if v}


def vec_to_dense(v: Vec, n: int) -> list:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out


# --- matrices ---------------------------------------------------------------

class Matrix:
    """Exact rational matrix, immutable by convention."""

    __slots__ = ("nrows", "ncols", "_cols", "_img")

    def __init__(self, nrows: int, ncols: int, cols=None, img=None):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self._cols = cols
        self._img = img
        if cols is None and img is None:
            self._img = np.full(self.ncols, -1, dtype=np.int64)

    # constructors
    @classmethod
    def from_map(cls, nrows: int, img) -> "Matrix":
        """Column j has a single 1 in row img[j] (or is zero when img[j] < 0)."""
        arr = np.asarray(img, dtype=np.int64)
        return cls(nrows, len(arr), img=arr)

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[Vec]) -> "Matrix":
        return cls(nrows, len(cols), cols=[dict(c) for c in cols])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: list[Vec] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise DimensionError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = as_scalar(v)
        return cls(nrows, ncols, cols=cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_map(n, np.arange(n, dtype=np.int64))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols)

    @classmethod
    def column(cls, v: Vec, n: int) -> "Matrix":
        return cls(n, 1, cols=[dict(v)])

    # representation
    @property
    def is_map(self) -> bool:
        return self._img is not None

    @property
    def img(self) -> np.ndarray | None:
        return self._img

    @property
    def cols(self) -> list[Vec]:
        if self._cols is None:
            self._cols = [{int(i): 1} if i >= 0 else {} for i in self._img.tolist()]
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def col(self, j: int) -> Vec:
        if self._img is not None:
            i = int(self._img[j])
            return {i: 1} if i >= 0 else {}
        return self._cols[j]

    def rows(self) -> list[Vec]:
        out: list[Vec] = [{} for _ in range(self.nrows)]
        if self._img is not None:
            for j, i in enumerate(self._img.tolist()):
                if i >= 0:
                    out[i][j] = 1
            return out
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def to_lists(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j in range(self.ncols):
            for i, v in self.col(j).items():
                out[i][j] = v
        return out

    def entry(self, i: int, j: int) -> Scalar:
        return self.col(j).get(i, 0)

    def nnz(self) -> int:
        if self._img is not None:
            return int((self._img >= 0).sum())
        return sum(len(c) for c in self._cols)

    def is_integral(self) -> bool:
        if self._img is not None:
            return True
        return all(isinstance(v, int) for c in self._cols for v in c.values())

    def __repr__(self) -> str:
        kind = "map" if self.is_map else "sparse"
        return f"Matrix({self.nrows}x{self.ncols}, {kind}, nnz={self.nnz()})"

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.to_lists())

    # algebra
    def apply(self, v: Vec) -> Vec:
        if self._img is not None:
            out: Vec = {}
            img = self._img
            for k, a in v.items():
                i = int(img[k])
                if i >= 0:
                    w = out.get(i, 0) + a
                    if w:
                        out[i] = w
                    else:
                        del out[i]
            return out
        return vec_combine((a, self._cols[k]) for k, a in v.items())

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self._img is not None and other._img is not None:
            b = other._img
            if self.ncols == 0:
                img = np.full(len(b), -1, dtype=np.int64)
            else:
                img = np.where(b >= 0, self._img[np.maximum(b, 0)], -1)
            return Matrix(self.nrows, other.ncols, img=img)
        if other._img is not None:
            cols = [self.col(int(k)) if k >= 0 else {} for k in other._img.tolist()]
            return Matrix(self.nrows, other.ncols, cols=cols)
        return Matrix(self.nrows, other.ncols, cols=[self.apply(c) for c in other._cols])

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        cols = []
        for j in range(self.ncols):
            c = dict(self.col(j))
            vec_axpy(c, 1, other.col(j))
            cols.append(c)
        return Matrix(self.nrows, self.ncols, cols=cols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in subtraction")
        cols = []
        for j in range(self.ncols):
            c = dict(self.col(j))
            vec_axpy(c, -1, other.col(j))
            cols.append(c)
        return Matrix(self.nrows, self.ncols, cols=cols)

    def scale(self, a) -> "Matrix":
        a = as_scalar(a)
        return Matrix(self.nrows, self.ncols, cols=[vec_scale(a, self.col(j)) for j in range(self.ncols)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self._img is not None and other._img is not None:
            return bool(np.array_equal(self._img, other._img))
        return all(self.col(j) == other.col(j) for j in range(self.ncols))

    __hash__ = None

    def is_zero(self) -> bool:
        if self._img is not None:
            return bool((self._img < 0).all())
        return not any(self._cols)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        if self._img is not None:
            return bool(np.array_equal(self._img, np.arange(self.ncols)))
        return all(c == {j: 1} for j, c in enumerate(self._cols))

    def transpose(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, cols=self.rows())

    T = property(transpose)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        if self._img is not None:
            return Matrix(self.nrows, len(idx), img=self._img[np.asarray(idx, dtype=np.int64)])
        return Matrix(self.nrows, len(idx), cols=[self._cols[j] for j in idx])

    def map_rows(self, nrows: int, row_of) -> "Matrix":
        """Reindex rows through row_of (an index array) into a matrix with nrows rows."""
        row_of = np.asarray(row_of, dtype=np.int64)
        if self._img is not None:
            img = np.where(self._img >= 0, row_of[np.maximum(self._img, 0)], -1) if self.ncols else self._img
            return Matrix(nrows, self.ncols, img=img)
        cols = []
        for c in self._cols:
            d: Vec = {}
            for i, v in c.items():
                vec_axpy(d, v, {int(row_of[i]): 1})
            cols.append(d)
        return Matrix(nrows, self.ncols, cols=cols)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; basis (i, j) of the product has index i*dim_b + j."""
    nrows = a.nrows * b.nrows
    ncols = a.ncols * b.ncols
    if a.is_map and b.is_map:
        ai = a.img[:, None]
        bi = b.img[None, :]
        img = np.where((ai >= 0) & (bi >= 0), ai * b.nrows + bi, -1).reshape(ncols)
        return Matrix(nrows, ncols, img=img)
    cols = []
    bcols = [b.col(j) for j in range(b.ncols)]
    nb = b.nrows
    for ja in range(a.ncols):
        ca = a.col(ja)
        for cb in bcols:
            cols.append({ia * nb + ib: norm(va * vb) for ia, va in ca.items() for ib, vb in cb.items()})
    return Matrix(nrows, ncols, cols=cols)


def hstack(mats: Sequence[Matrix], nrows: int | None = None) -> Matrix:
    if not mats:
        return Matrix(nrows or 0, 0)
    n = mats[0].nrows
    cols = []
    for m in mats:
        if m.nrows != n:
            raise DimensionError("hstack row mismatch")
        cols.extend(m.col(j) for j in range(m.ncols))
    return Matrix(n, len(cols), cols=cols)


def block_diagonal(mats: Sequence[Matrix]) -> Matrix:
    nrows = sum(m.nrows for m in mats)
    cols = []
    off = 0
    for m in mats:
        for j in range(m.ncols):
            cols.append({i + off: v for i, v in m.col(j).items()})
        off += m.nrows
    return Matrix(nrows, len(cols), cols=cols)


# --- elimination -------------------------------------------------------------

class Echelon:
    """Incrementally maintained reduced row echelon basis of a span.

    Each stored row has its pivot (its smallest column) equal to 1 and no other
    stored row has an entry in that column, so the final state is the canonical
    RREF of the span regardless of insertion order.  With ``track=True`` every
    row also records the combination of inserted vectors it equals, which gives
    both coordinates and linear dependencies.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[int, Vec] = {}
        self.combo: dict[int, Vec] = {}
        self.track = track
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vec, combo: Vec | None = None) -> Vec:
        v = dict(v)
        for c in [c for c in v if c in self.rows]:
            a = v.get(c)
            if a:
                vec_axpy(v, -a, self.rows[c])
                if combo is not None:
                    vec_axpy(combo, -a, self.combo[c])
        return v

    def add(self, v: Vec) -> Vec | None:
        """Insert v.  Returns None if v was independent, otherwise the
        dependency (coefficients over inserted vectors, summing to zero)."""
        idx = self.count
        self.count += 1
        combo = {idx: 1} if self.track else None
        r = self.reduce(v, combo)
        if not r:
            return combo if self.track else {}
        p = min(r)
        inv = r[p]
        if inv != 1:
            inv = Fraction(1, 1) / inv
            r = vec_scale(inv, r)
            if combo is not None:
                combo = vec_scale(inv, combo)
        for q, row in self.rows.items():
            a = row.get(p)
            if a:
                vec_axpy(row, -a, r)
                if self.track:
                    vec_axpy(self.combo[q], -a, combo)
        self.rows[p] = r
        if self.track:
            self.combo[p] = combo
        return None

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)


def rref(rows: Iterable[Vec]) -> Echelon:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e


def rank(a: Matrix) -> int:
    return rref(a.rows()).rank


def kernel_vectors(a: Matrix) -> list[Vec]:
    e = rref(a.rows())
    free = [j for j in range(a.ncols) if j not in e.rows]
    out = []
    for f in free:
        v = {f: 1}
        for p, row in e.rows.items():
            x = row.get(f)
            if x:
                v[p] = norm(-x)
        out.append(v)
    return out


def kernel_basis(a: Matrix) -> list[list]:
    """Basis of {x : A x = 0} as dense column vectors, one per free column."""
    return [vec_to_dense(v, a.ncols) for v in kernel_vectors(a)]


def solve_vec(a: Matrix, b: Vec) -> Vec | None:
    n = a.ncols
    rows = a.rows()
    for i, x in b.items():
        rows[i] = dict(rows[i])
        rows[i][n] = x
    e = rref(rows)
    if n in e.rows:
        return None
    return {p: row[n] for p, row in e.rows.items() if n in row}


def solve_linear(a: Matrix, b: Sequence) -> list | None:
    """A particular solution x of A x = b (free variables set to 0), or None."""
    if a.nrows != len(b):
        raise DimensionError("right-hand side length does not match rows")
    x = solve_vec(a, dense_to_vec(b))
    return None if x is None else vec_to_dense(x, a.ncols)


def invert(a: Matrix) -> Matrix:
    if a.nrows != a.ncols:
        raise NotInvertibleError(f"non-square matrix {a.shape}")
    n = a.nrows
    if a.is_map:
        img = a.img
        if n and (img.min() < 0 or len(np.unique(img)) != n):
            raise NotInvertibleError("map matrix is not a permutation")
        inv = np.empty(n, dtype=np.int64)
        inv[img] = np.arange(n, dtype=np.int64)
        return Matrix.from_map(n, inv)
    rows = a.rows()
    for i in range(n):
        rows[i] = dict(rows[i])
        rows[i][n + i] = 1
    e = rref(rows)
    if e.rank < n or any(p >= n for p in e.rows):
        raise NotInvertibleError("matrix is singular")
    cols: list[Vec] = [{} for _ in range(n)]
    for p, row in e.rows.items():
        for c, v in row.items():
            if c >= n:
                cols[c - n][p] = v
    return Matrix(n, n, cols=cols)


def quotient_presentation(ambient_dim: int, relators: Iterable) -> tuple[Matrix, Matrix]:
    """Quotient of k^ambient_dim by the span of relators.

    Returns (projection, section): the quotient basis is the set of non-pivot
    coordinates of the RREF of the relator span, in increasing order, and the
    section sends each quotient basis vector to that coordinate vector.
    """
    e = Echelon()
    for r in relators:
        v = r if isinstance(r, dict) else dense_to_vec(r)
        if any(k >= ambient_dim or k < 0 for k in v):
            raise DimensionError("relator outside the ambient space")
        e.add(v)
    return _quotient_from_echelon(ambient_dim, e)


def _quotient_from_echelon(ambient_dim: int, e: Echelon) -> tuple[Matrix, Matrix]:
    free = [j for j in range(ambient_dim) if j not in e.rows]
    pos = {j: i for i, j in enumerate(free)}
    q = len(free)
    cols: list[Vec] = [None] * ambient_dim
    for j in free:
        cols[j] = {pos[j]: 1}
    for p, row in e.rows.items():
        cols[p] = {pos[c]: norm(-v) for c, v in row.items() if c != p}
    projection = Matrix(q, ambient_dim, cols=cols)
    section = Matrix.from_map(ambient_dim, np.asarray(free, dtype=np.int64))
    return projection, section


class SpanCoordinates:
    """Coordinates with respect to a fixed family of independent vectors."""

    def __init__(self, basis: Sequence[Vec]):
        self.e = Echelon(track=True)
        self.size = len(basis)
        for b in basis:
            if self.e.add(b) is not None:
                raise ValueError("basis vectors are linearly dependent")

    def coords(self, v: Vec) -> Vec | None:
        combo: Vec = {}
        r = self.e.reduce(v, combo)
        if r:
            return None
        # reduce() subtracted; v = sum(-combo)
        return {k: norm(-x) for k, x in combo.items()}


def column_relations(vectors: Sequence[Vec]) -> list[Vec]:
    """Basis of the linear relations sum c_i v_i = 0 among the given vectors."""
    e = Echelon(track=True)
    out = []
    for v in vectors:
        dep = e.add(v)
        if dep is not None:
            out.append(dep)
    return out


# --- polynomials --------------------------------------------------------------

def charpoly(a: Matrix) -> list[Scalar]:
    """Coefficients [c_0, ..., c_n] of det(x I - A) (monic), by Faddeev-LeVerrier."""
    n = a.nrows
    if a.ncols != n:
        raise DimensionError("charpoly of non-square matrix")
    dense = a.to_lists()
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = [[0] * n for _ in range(n)]  # M_0 = 0
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        c_prev = coeffs[n - k + 1]
        mk = [[sum(dense[i][l] * m[l][j] for l in range(n)) + (c_prev if i == j else 0) for j in range(n)]
              for i in range(n)]
        am = [[sum(dense[i][l] * mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        coeffs[n - k] = norm(Fraction(-tr, k) if isinstance(tr, int) else -tr / k)
        m = mk
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_eval(coeffs: Sequence[Scalar], x: Scalar) -> Scalar:
    acc: Scalar = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: list, r: Scalar) -> list:
    """Divide by (x - r), assuming r is a root."""
    n = len(coeffs) - 1
    out = [0] * n
    acc: Scalar = 0
    for k in range(n, 0, -1):
        acc = norm(acc * r + coeffs[k])
        out[k - 1] = acc
    return out


def rational_roots(coeffs: Sequence[Scalar]) -> dict[Scalar, int]:
    """Rational roots with multiplicity, by the rational root theorem."""
    c = [Fraction(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    roots: dict[Scalar, int] = {}
    while len(c) > 1 and c[0] == 0:
        roots[0] = roots.get(0, 0) + 1
        c = c[1:]
    if len(c) <= 1:
        return roots
    lcm = 1
    for x in c:
        lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in c]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    ints = [x // g for x in ints]
    candidates = set()
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            candidates.add(Fraction(p, q))
            candidates.add(Fraction(-p, q))
    poly = [norm(Fraction(x)) for x in ints]
    for r in sorted(candidates):
        while len(poly) > 1 and _poly_eval(poly, r) == 0:
            rr = norm(r)
            roots[rr] = roots.get(rr, 0) + 1
            poly = _deflate(poly, r)
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)
