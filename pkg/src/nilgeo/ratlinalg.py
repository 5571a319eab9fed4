"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  :class:`RatMatrix` is a small immutable dense matrix
over those scalars.  Vectors are plain tuples of fractions.

Nothing in this module rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or rational string to a Fraction.

    Floats are refused: a float literal would silently carry binary rounding
    into an exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational scalars")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def vec(values: Iterable) -> Vector:
    return tuple(to_rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def vadd(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    if len(x) != len(y):
        raise DimensionError(f"vector lengths {len(x)} and {len(y)} differ")
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    if len(x) != len(y):
        raise DimensionError(f"vector lengths {len(x)} and {len(y)} differ")
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x: Sequence[Fraction]) -> Vector:
    c = to_rational(c)
    return tuple(c * a for a in x)


def dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    if len(x) != len(y):
        raise DimensionError(f"vector lengths {len(x)} and {len(y)} differ")
    return sum((a * b for a, b in zip(x, y) if a and b), ZERO)


def is_zero_vector(x: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in x)


def rational_str(q: Fraction) -> str:
    """Canonical text form ``INT`` or ``INT/POSINT`` (lowest terms)."""
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    """Dense matrix of Fractions stored row-major as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError(
                f"entries do not form a {self.rows}x{self.cols} array"
            )

    # construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RatMatrix":
        data = tuple(vec(r) for r in rows)
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "RatMatrix":
        columns = [vec(c) for c in columns]
        if not columns:
            return cls.zeros(nrows or 0, 0)
        n = len(columns[0])
        return cls(n, len(columns), tuple(tuple(c[i] for c in columns) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "RatMatrix":
        """The matrix unit with a single 1 in row ``i``, column ``j`` (0-based)."""
        return cls(n, n, tuple(
            tuple(ONE if (r, c) == (i, j) else ZERO for c in range(n)) for r in range(n)
        ))

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        values = vec(values)
        n = len(values)
        return cls(n, n, tuple(
            tuple(values[i] if i == j else ZERO for j in range(n)) for i in range(n)
        ))

    # access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def to_float(self):
        import numpy as np

        return np.array([[float(a) for a in r] for r in self.entries], dtype=float).reshape(
            self.rows, self.cols
        )

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    # arithmetic -------------------------------------------------------

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RatMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        ))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return RatMatrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        ))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.entries))

    def scale(self, c) -> "RatMatrix":
        c = to_rational(c)
        return RatMatrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def __rmul__(self, c) -> "RatMatrix":
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            return RatMatrix(self.rows, other.cols, tuple(
                tuple(dot(r, c) for c in ocols) for r in self.entries
            ))
        return self.apply(other)

    def apply(self, x: Sequence) -> Vector:
        if len(x) != self.cols:
            raise DimensionError(f"cannot apply {self.shape} matrix to a length-{len(x)} vector")
        x = vec(x)
        return tuple(dot(r, x) for r in self.entries)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                         tuple(() for _ in range(self.cols)))

    @property
    def T(self) -> "RatMatrix":
        return self.transpose()

    def commutator(self, other: "RatMatrix") -> "RatMatrix":
        return self @ other - other @ self

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.rows != other.rows:
            raise DimensionError("row counts differ")
        return RatMatrix(self.rows, self.cols + other.cols, tuple(
            r + s for r, s in zip(self.entries, other.entries)
        ))

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.cols:
            raise DimensionError("column counts differ")
        return RatMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix(len(rows), len(cols), tuple(
            tuple(self.entries[i][j] for j in cols) for i in rows
        ))

    def flatten(self) -> Vector:
        return tuple(a for r in self.entries for a in r)

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        m = self.to_lists()
        n = self.rows
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
            if p is None:
                return ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            piv = m[c][c]
            d *= piv
            for r in range(c + 1, n):
                f = m[r][c]
                if f:
                    f = f / piv
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return d

    def inverse(self) -> "RatMatrix":
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        red, pivots, rank = rref(self.hstack(RatMatrix.identity(n)))
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return red.submatrix(range(n), range(n, 2 * n))

    def rank(self) -> int:
        return rref(self)[2]


def rref(m: RatMatrix) -> tuple[RatMatrix, list[int], int]:
    """Reduced row-echelon form with first-nonzero pivoting.

    Returns ``(reduced, pivot_columns, rank)``.
    """
    a = m.to_lists()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            a[r] = [x / piv for x in a[r]]
        prow = a[r]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return RatMatrix(nrows, ncols, tuple(tuple(row) for row in a)), pivots, len(pivots)


@dataclass(frozen=True)
class SolutionSet:
    """Affine solution set ``particular + span(nullspace_basis)``.

    ``kind`` is ``"empty"``, ``"unique"`` or ``"family"``.
    """

    kind: str
    particular: Vector | None = None
    nullspace_basis: tuple = ()
    rank: int | None = None  # rank of the coefficient matrix, when known

    def __post_init__(self):
        if self.kind == "empty":
            assert self.particular is None and not self.nullspace_basis
        elif self.kind == "unique":
            assert self.particular is not None and not self.nullspace_basis
        elif self.kind == "family":
            assert self.particular is not None and self.nullspace_basis
        else:
            raise ValueError(f"unknown solution kind {self.kind!r}")

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def dimension(self) -> int:
        """Affine dimension (``-1`` for the empty set)."""
        return -1 if self.kind == "empty" else len(self.nullspace_basis)

    def member(self, coefficients: Sequence = ()) -> Vector:
        """The solution ``particular + sum(c_i * basis_i)``."""
        if self.particular is None:
            raise ValueError("empty solution set has no members")
        x = self.particular
        for c, b in zip(coefficients, self.nullspace_basis):
            x = vadd(x, vscale(c, b))
        return x


def _nullspace_from_rref(red: RatMatrix, pivots: list[int]) -> list[Vector]:
    ncols = red.cols
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -red[r, f]
        basis.append(tuple(v))
    return basis


def nullspace(a: RatMatrix) -> list[Vector]:
    """Basis of ``{x : a x = 0}``, one vector per free column in column order."""
    red, pivots, _ = rref(a)
    return _nullspace_from_rref(red, pivots)


def solve_affine(a: RatMatrix, b: Sequence) -> SolutionSet:
    """Full solution set of ``a x = b``.

    Free variables are set to zero in the particular solution; the null-space
    basis has one vector per free column, ordered by column.
    """
    b = vec(b)
    if len(b) != a.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {a.rows}")
    aug = a.hstack(RatMatrix.from_columns([b], a.rows)) if a.rows else RatMatrix.zeros(0, a.cols + 1)
    red, pivots, _ = rref(aug)
    rank = sum(1 for p in pivots if p < a.cols)
    if a.cols in pivots:
        return SolutionSet("empty", rank=rank)
    x = [ZERO] * a.cols
    for r, p in enumerate(pivots):
        x[p] = red[r, a.cols]
    coeff = red.submatrix(range(red.rows), range(a.cols))
    basis = _nullspace_from_rref(coeff, pivots)
    if basis:
        return SolutionSet("family", tuple(x), tuple(basis), rank)
    return SolutionSet("unique", tuple(x), rank=rank)


def row_space_basis(vectors: Sequence[Sequence]) -> list[Vector]:
    """Canonical (reduced echelon) basis of the span of ``vectors``."""
    vectors = [vec(v) for v in vectors]
    if not vectors:
        return []
    red, _, rank = rref(RatMatrix.from_rows(vectors))
    return [red.row(i) for i in range(rank)]


def coordinates_in(basis: Sequence[Sequence], target: Sequence) -> Vector | None:
    """Coordinates of ``target`` in a linearly independent ``basis``; ``None`` if outside the span."""
    n = len(target)
    if not basis:
        return () if is_zero_vector(target) else None
    sol = solve_affine(RatMatrix.from_columns(basis, n), target)
    if sol.is_empty:
        return None
    if sol.kind != "unique":
        raise ValueError("basis vectors are linearly dependent")
    return sol.particular
