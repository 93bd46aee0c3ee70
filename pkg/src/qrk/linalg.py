"""Exact linear algebra over the rationals and prime fields.

Everything here is immutable.  Matrices hold normalized field elements
(``Fraction`` for Q, ``int`` in ``range(p)`` for GF(p)).  A :class:`Subspace`
is stored by its reduced row-echelon basis, so two subspaces are equal as
sets exactly when they compare equal.
"""
from __future__ import annotations

import math
import operator
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Field", "QQ", "GF", "parse_field", "LinAlgError",
    "Matrix", "Subspace", "rref", "image", "kernel", "subspace_sum",
    "intersect", "intersect_by_annihilators", "preimage", "rank_through",
    "induced_matrix", "quotient_matrix", "block_diag", "hstack", "vstack",
]

_WORD = 2**31


class LinAlgError(ValueError):
    """Shape, ambient-space or field mismatch."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``characteristic == 0``) or the prime field GF(p)."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0:
            if not _is_prime(p):
                raise ValueError(f"GF({p}): {p} is not prime")
            if p >= _WORD:
                raise ValueError(f"GF({p}): only word-size primes are supported")

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> int | None:
        return self.characteristic or None

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction or text) into a normalized element."""
        p = self.characteristic
        if isinstance(x, str):
            return self.parse(x)
        if p:
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise ZeroDivisionError(f"{x} has no image in GF({p})")
                return x.numerator * pow(x.denominator, -1, p) % p
            return int(x) % p
        return Fraction(x)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        if p:
            return pow(x, -1, p)
        return 1 / x

    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def elements(self) -> range:
        if not self.characteristic:
            raise ValueError("Q is infinite")
        return range(self.characteristic)

    def random_element(self, rng: random.Random, window: int = 3):
        """Uniform over GF(p); uniform over the integers ``[-window, window]`` for Q."""
        if self.characteristic:
            return rng.randrange(self.characteristic)
        return Fraction(rng.randint(-window, window))

    def parse(self, token: str):
        token = token.strip()
        if "/" in token:
            num, den = token.split("/", 1)
            return self(Fraction(int(num), int(den)))
        return self(int(token))

    def format(self, x) -> str:
        return str(x)

    @property
    def name(self) -> str:
        return f"gf{self.characteristic}" if self.characteristic else "Q"

    def __str__(self):
        return f"GF({self.characteristic})" if self.characteristic else "Q"

    def __repr__(self):
        return f"Field({self})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def parse_field(text: str) -> Field:
    """Accepts ``Q``, ``QQ``, ``gf5``, ``GF 5``, ``GF(5)`` and ``F5``."""
    t = text.strip().replace(" ", "").replace("(", "").replace(")", "").lower()
    if t in ("q", "qq"):
        return QQ
    for prefix in ("gf", "f"):
        if t.startswith(prefix) and t[len(prefix):].isdigit():
            return Field(int(t[len(prefix):]))
    raise ValueError(f"unknown field {text!r}")


# -- elimination kernel -------------------------------------------------------

def _primitive(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    return [x // g for x in row] if g > 1 else row


def _rref_rows_q(rows: list[list], ncols: int) -> list[int]:
    # fraction-free: clear denominators, eliminate with integer row operations
    # kept primitive, and only divide by the pivots at the very end
    ints = []
    for row in rows:
        ints.append(_primitive(_scaled(row)[0]))
    nrows = len(ints)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r, nrows):
            if ints[i][c]:
                break
        else:
            continue
        ints[r], ints[i] = ints[i], ints[r]
        prow = ints[r]
        pv = prow[c]
        tail = prow[c:]
        for i in range(nrows):
            if i != r:
                row = ints[i]
                f = row[c]
                if f:
                    g = math.gcd(pv, f)
                    a, b = pv // g, f // g
                    row = [a * x for x in row[:c]] + [a * x - b * y for x, y in zip(row[c:], tail)]
                    ints[i] = _primitive(row)
        pivots.append(c)
        r += 1
    zero = Fraction(0)
    for i, row in enumerate(ints):
        if i < r:
            pv = row[pivots[i]]
            rows[i] = [Fraction(x, pv) if x else zero for x in row]
        else:
            rows[i] = [zero] * ncols
    return pivots


def _rref_rows(field: Field, rows: list[list], ncols: int) -> list[int]:
    """Bring ``rows`` to reduced row-echelon form in place; return pivot columns."""
    p = field.characteristic
    if not p:
        return _rref_rows_q(rows, ncols)
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r, nrows):
            if rows[i][c]:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        inv = field.inv(rows[r][c])
        if p:
            prow = [x * inv % p for x in rows[r]]
        else:
            prow = [x * inv for x in rows[r]]
        rows[r] = prow
        # entries of prow left of c are zero, so only the tail needs updating
        tail = prow[c:]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    if p:
                        row[c:] = [(x - f * y) % p for x, y in zip(row[c:], tail)]
                    else:
                        row[c:] = [x - f * y for x, y in zip(row[c:], tail)]
        pivots.append(c)
        r += 1
    return pivots


def _scaled(row) -> tuple[list[int], int]:
    """Integers ``n_i`` and ``d`` with ``row[i] == n_i / d``."""
    d = math.lcm(*(x.denominator for x in row)) if row else 1
    return [x.numerator * (d // x.denominator) for x in row], d


def _dot(field: Field, u, v):
    s = sum(map(operator.mul, u, v))
    return s % field.characteristic if field.characteristic else s


# -- matrices -----------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """A dense ``nrows x ncols`` matrix; ``rows`` holds normalized entries."""

    field: Field
    nrows: int
    ncols: int
    rows: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise LinAlgError(f"entries do not form a {self.nrows}x{self.ncols} matrix")

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence], ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise LinAlgError("column count is ambiguous for an empty row list")
            ncols = len(rows[0])
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls.from_rows(field, zip(*cols), len(cols)) if cols and nrows else cls.zeros(field, nrows, len(cols))

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def columns(self) -> tuple[tuple, ...]:
        if not self.nrows:
            return tuple(() for _ in range(self.ncols))
        return tuple(zip(*self.rows))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows, self.columns)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def _check(self, other: "Matrix"):
        if other.field != self.field:
            raise LinAlgError(f"field mismatch: {self.field} vs {other.field}")

    @cached_property
    def _integral(self) -> tuple[list[list[int]], int]:
        # over Q: integer rows and one common denominator, for fast products
        d = math.lcm(*(x.denominator for r in self.rows for x in r)) if self.nrows and self.ncols else 1
        return [[x.numerator * (d // x.denominator) for x in r] for r in self.rows], d

    def apply(self, v: Sequence) -> tuple:
        """Return ``self @ v`` for a coordinate vector ``v``."""
        if len(v) != self.ncols:
            raise LinAlgError(f"vector of length {len(v)} against {self.nrows}x{self.ncols} matrix")
        if not self.field.characteristic:
            rows, d = self._integral
            iv, dv = _scaled(v)
            d *= dv
            return tuple(Fraction(sum(map(operator.mul, r, iv)), d) for r in rows)
        return tuple(_dot(self.field, r, v) for r in self.rows)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return self.apply(other)
        self._check(other)
        if self.ncols != other.nrows:
            raise LinAlgError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        p = f.characteristic
        n = other.ncols
        if not p:
            a, da = self._integral
            b, db = other._integral
            d = da * db
            cols = list(zip(*b)) if b else [()] * n
            return Matrix(f, self.nrows, n, tuple(
                tuple(Fraction(sum(map(operator.mul, r, c)), d) for c in cols) for r in a))
        rows = []
        # combine rows of ``other``, skipping zero coefficients
        for r in self.rows:
            acc = [f.zero] * n
            for x, orow in zip(r, other.rows):
                if x:
                    acc = list(map(operator.add, acc, [x * y for y in orow]))
            rows.append(tuple(v % p for v in acc) if p else tuple(acc))
        return Matrix(f, self.nrows, n, tuple(rows))

    def _elementwise(self, other: "Matrix", op) -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")
        p = self.field.characteristic
        rows = tuple(
            tuple((op(x, y) % p if p else op(x, y)) for x, y in zip(r, s))
            for r, s in zip(self.rows, other.rows)
        )
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._elementwise(other, lambda x, y: x + y)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._elementwise(other, lambda x, y: x - y)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        p = self.field.characteristic
        rows = tuple(tuple((c * x % p if p else c * x) for x in r) for r in self.rows)
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def __pow__(self, k: int) -> "Matrix":
        if self.nrows != self.ncols or k < 0:
            raise LinAlgError("only nonnegative powers of square matrices")
        out = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def rank(self) -> int:
        return rref(self)[2]

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise LinAlgError("inverse of a non-square matrix")
        f = self.field
        ident = Matrix.identity(f, n).rows
        rows = [list(r) + list(e) for r, e in zip(self.rows, ident)]
        pivots = _rref_rows(f, rows, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise LinAlgError("matrix is singular")
        return Matrix(f, n, n, tuple(tuple(r[n:]) for r in rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(rows), len(cols),
                      tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def __str__(self):
        if not self.nrows or not self.ncols:
            return "[]"
        return "[" + ";".join(",".join(self.field.format(x) for x in r) for r in self.rows) + "]"


def block_diag(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    z = field.zero
    rows = []
    c0 = 0
    for b in blocks:
        for r in b.rows:
            rows.append((z,) * c0 + r + (z,) * (nc - c0 - b.ncols))
        c0 += b.ncols
    return Matrix(field, nr, nc, tuple(rows))


def hstack(mats: Sequence[Matrix]) -> Matrix:
    f = mats[0].field
    n = mats[0].nrows
    if any(m.nrows != n for m in mats):
        raise LinAlgError("hstack needs equal row counts")
    rows = tuple(sum((m.rows[i] for m in mats), ()) for i in range(n))
    return Matrix(f, n, sum(m.ncols for m in mats), rows)


def vstack(mats: Sequence[Matrix]) -> Matrix:
    f = mats[0].field
    n = mats[0].ncols
    if any(m.ncols != n for m in mats):
        raise LinAlgError("vstack needs equal column counts")
    rows = sum((m.rows for m in mats), ())
    return Matrix(f, len(rows), n, rows)


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank of ``m``."""
    rows = [list(r) for r in m.rows]
    pivots = _rref_rows(m.field, rows, m.ncols)
    out = Matrix(m.field, m.nrows, m.ncols, tuple(tuple(r) for r in rows))
    return out, pivots, len(pivots)


# -- subspaces ----------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of ``field**ambient_dim`` held by its RREF row basis."""

    field: Field
    ambient_dim: int
    basis: tuple[tuple, ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = [[field(x) for x in v] for v in vectors]
        if any(len(r) != ambient_dim for r in rows):
            raise LinAlgError(f"spanning vectors must have length {ambient_dim}")
        return cls._from_rows(field, ambient_dim, rows)

    @classmethod
    def _from_rows(cls, field: Field, n: int, rows: list[list]) -> "Subspace":
        # rows must already hold normalized elements
        pivots = _rref_rows(field, rows, n)
        k = len(pivots)
        return cls(field, n, tuple(tuple(r) for r in rows[:k]), tuple(pivots))

    @classmethod
    def zero(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, (), ())

    @classmethod
    def full(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, Matrix.identity(field, n).rows, tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def basis_matrix(self) -> Matrix:
        """``dim x ambient_dim`` matrix whose rows are the stored basis."""
        return Matrix(self.field, self.dim, self.ambient_dim, self.basis)

    def _check(self, other: "Subspace"):
        if other.field != self.field or other.ambient_dim != self.ambient_dim:
            raise LinAlgError(
                f"subspaces live in different spaces: {self.field}^{self.ambient_dim}"
                f" vs {other.field}^{other.ambient_dim}")

    def reduce(self, v: Sequence) -> tuple:
        """Canonical representative of ``v`` modulo this subspace.

        The result vanishes on every pivot column, and equals zero iff ``v``
        lies in the subspace.
        """
        p = self.field.characteristic
        v = list(v)
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                if p:
                    v = [(x - f * y) % p for x, y in zip(v, row)]
                else:
                    v = [x - f * y for x, y in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence) -> tuple:
        """Coefficients of ``v`` in the stored basis."""
        if any(self.reduce(v)):
            raise LinAlgError("vector is not in the subspace")
        return tuple(v[c] for c in self.pivots)

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(b in other for b in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def annihilator(self) -> "Subspace":
        """``{y : y . w = 0 for all w}`` under the standard bilinear form."""
        return kernel(self.basis_matrix)

    @property
    def free_columns(self) -> tuple[int, ...]:
        """Non-pivot columns; the matching unit vectors span a complement."""
        piv = set(self.pivots)
        return tuple(c for c in range(self.ambient_dim) if c not in piv)

    def __str__(self):
        return "span{" + ", ".join("(" + ",".join(map(str, b)) + ")" for b in self.basis) + "}"


def image(m: Matrix) -> Subspace:
    """Column span of ``m`` inside ``field**m.nrows``."""
    return Subspace._from_rows(m.field, m.nrows, [list(c) for c in m.columns])


def kernel(m: Matrix) -> Subspace:
    """Solutions of ``m x = 0`` inside ``field**m.ncols``."""
    f = m.field
    rows = [list(r) for r in m.rows]
    pivots = _rref_rows(f, rows, m.ncols)
    p = f.characteristic
    piv = set(pivots)
    free = [c for c in range(m.ncols) if c not in piv]
    vecs = []
    for c in free:
        v = [f.zero] * m.ncols
        v[c] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][c]) % p if p else -rows[i][c]
        vecs.append(v)
    return Subspace._from_rows(f, m.ncols, vecs)


def _zassenhaus(s: Subspace, t: Subspace) -> tuple[Subspace, Subspace]:
    s._check(t)
    f, n = s.field, s.ambient_dim
    z = [f.zero] * n
    rows = [list(b) + list(b) for b in s.basis] + [list(b) + z for b in t.basis]
    _rref_rows(f, rows, 2 * n)
    sum_rows, meet_rows = [], []
    for r in rows:
        if any(r[:n]):
            sum_rows.append(r[:n])
        elif any(r[n:]):
            meet_rows.append(r[n:])
    return Subspace._from_rows(f, n, sum_rows), Subspace._from_rows(f, n, meet_rows)


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    s._check(t)
    return Subspace._from_rows(s.field, s.ambient_dim, [list(b) for b in s.basis + t.basis])


def intersect(s: Subspace, t: Subspace) -> Subspace:
    """``s & t`` by row-reducing the stacked system ``[[S, S], [T, 0]]``."""
    if s.is_full():
        s._check(t)
        return t
    if t.is_full():
        s._check(t)
        return s
    return _zassenhaus(s, t)[1]


def intersect_by_annihilators(s: Subspace, t: Subspace) -> Subspace:
    """Same result as :func:`intersect`, via ``(S^perp + T^perp)^perp``."""
    s._check(t)
    return (s.annihilator() + t.annihilator()).annihilator()


def preimage(m: Matrix, t: Subspace) -> Subspace:
    """``{x : m x in t}``."""
    if t.field != m.field or t.ambient_dim != m.nrows:
        raise LinAlgError(f"cannot pull back a subspace of {t.field}^{t.ambient_dim} "
                          f"along a {m.nrows}x{m.ncols} matrix")
    if t.is_full():
        return Subspace.full(m.field, m.ncols)
    return kernel(t.annihilator().basis_matrix @ m)


def map_subspace(m: Matrix, s: Subspace) -> Subspace:
    """Image ``m(s)``."""
    if s.field != m.field or s.ambient_dim != m.ncols:
        raise LinAlgError("subspace does not live in the source of the matrix")
    return Subspace._from_rows(m.field, m.nrows, [list(m.apply(b)) for b in s.basis])


def rank_through(s: Subspace, u: Subspace) -> int:
    """Rank of the composite ``s -> V -> V/u``."""
    return s.dim - intersect(s, u).dim


def induced_matrix(m: Matrix, s: Subspace, t: Subspace) -> Matrix:
    """Matrix of ``m`` restricted to ``s`` and corestricted to ``t`` in their stored bases."""
    if m.ncols != s.ambient_dim or m.nrows != t.ambient_dim:
        raise LinAlgError("subspaces do not match the matrix shape")
    cols = []
    for b in s.basis:
        try:
            cols.append(t.coordinates(m.apply(b)))
        except LinAlgError:
            raise LinAlgError("m(s) is not contained in t") from None
    return Matrix.from_columns(m.field, cols, t.dim)


def quotient_matrix(m: Matrix, s: Subspace, t: Subspace) -> Matrix:
    """Matrix of the induced map ``K^n/s -> K^m/t``.

    The quotient ``K^n/s`` is given the basis of unit vectors at the free
    columns of ``s``.
    """
    if m.ncols != s.ambient_dim or m.nrows != t.ambient_dim:
        raise LinAlgError("subspaces do not match the matrix shape")
    if any(any(t.reduce(m.apply(b))) for b in s.basis):
        raise LinAlgError("m(s) is not contained in t")
    src, dst = s.free_columns, t.free_columns
    mcols = m.columns
    cols = []
    for j in src:
        w = t.reduce(mcols[j])
        cols.append(tuple(w[i] for i in dst))
    return Matrix.from_columns(m.field, cols, len(dst))
