"""Nilpotent Lie algebras with a pseudo-Riemannian metric on a fixed basis.

Brackets are given by structure constants ``[e_i, e_j] = sum_k c(i, j, k) e_k``
and the metric by its Gram matrix.  Everything here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Mapping, Sequence

from .ratlinalg import (
    ZERO,
    RatMatrix,
    Vector,
    dot,
    nullspace,
    row_space_basis,
    to_rational,
    unit_vector,
    vec,
)


class DegenerateCenter(ValueError):
    """The metric restricted to the center is degenerate, so no orthogonal v + z split exists."""


class InvalidAlgebra(ValueError):
    """Raised when an operation needs a valid metric nilpotent algebra and did not get one."""


@dataclass(frozen=True)
class MetricNilAlgebra:
    """Structure constants plus metric on a fixed basis.

    ``structure`` is a sparse tuple of ``(i, j, k, c)`` entries, each meaning a
    contribution ``c e_k`` to ``[e_i, e_j]``.  Entries are summed as given; use
    :meth:`from_brackets` to have antisymmetry filled in.
    """

    name: str
    basis_names: tuple
    structure: tuple
    metric: RatMatrix
    attributes: Mapping = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_brackets(
        cls,
        name: str,
        basis_names: Sequence[str],
        brackets: Mapping[tuple[int, int], Mapping[int, object]],
        metric: RatMatrix | Mapping[tuple[int, int], object],
        attributes: Mapping | None = None,
    ) -> "MetricNilAlgebra":
        """Build from ``{(i, j): {k: c}}`` with ``i < j``; ``[e_j, e_i]`` is implied.

        ``metric`` is either a full Gram matrix or a sparse ``{(i, j): value}``
        map that is symmetrised.
        """
        n = len(basis_names)
        entries = []
        for (i, j), coeffs in sorted(brackets.items()):
            if not i < j:
                raise ValueError(f"bracket ({i}, {j}) must be listed with i < j")
            for k, c in sorted(coeffs.items()):
                c = to_rational(c)
                if c:
                    entries.append((i, j, k, c))
                    entries.append((j, i, k, -c))
        if not isinstance(metric, RatMatrix):
            g = [[ZERO] * n for _ in range(n)]
            for (i, j), value in metric.items():
                value = to_rational(value)
                g[i][j] = value
                g[j][i] = value
            metric = RatMatrix.from_rows(g)
        return cls(name, tuple(basis_names), tuple(entries), metric, dict(attributes or {}))

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    @cached_property
    def tensor(self) -> list:
        """Dense ``c[i][j][k]``."""
        n = self.dim
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for i, j, k, value in self.structure:
            c[i][j][k] += to_rational(value)
        return c

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        x, y = vec(x), vec(y)
        n = self.dim
        out = [ZERO] * n
        c = self.tensor
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                xy = x[i] * y[j]
                row = c[i][j]
                for k in range(n):
                    if row[k]:
                        out[k] += xy * row[k]
        return tuple(out)

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        return dot(vec(x), self.metric.apply(y))

    def norm2(self, x: Sequence) -> Fraction:
        return self.inner(x, x)

    def ad(self, x: Sequence) -> RatMatrix:
        """Matrix of ``y -> [x, y]``."""
        n = self.dim
        return RatMatrix.from_columns([self.bracket(x, unit_vector(n, j)) for j in range(n)], n)

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def change_basis(self, p: RatMatrix, name: str | None = None,
                     basis_names: Sequence[str] | None = None) -> "MetricNilAlgebra":
        """Re-express in the basis ``f_j = sum_i p[i, j] e_i`` (columns of ``p``)."""
        n = self.dim
        if p.shape != (n, n):
            raise ValueError("change of basis must be a square matrix of the algebra's size")
        pinv = p.inverse()
        cols = p.columns()
        entries = []
        for a in range(n):
            for b in range(a + 1, n):
                coords = pinv.apply(self.bracket(cols[a], cols[b]))
                for k, c in enumerate(coords):
                    if c:
                        entries.append((a, b, k, c))
                        entries.append((b, a, k, -c))
        metric = p.T @ self.metric @ p
        names = tuple(basis_names) if basis_names else tuple(f"f{i + 1}" for i in range(n))
        return MetricNilAlgebra(name or f"{self.name}'", names, tuple(entries), metric,
                                dict(self.attributes))

    def same_structure(self, other: "MetricNilAlgebra") -> bool:
        """Equal dense structure constants and metric (names ignored)."""
        return self.dim == other.dim and self.tensor == other.tensor and self.metric == other.metric


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> RatMatrix:
        """Basis vectors as columns."""
        return RatMatrix.from_columns(self.basis, self.ambient_dim)

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        return len(row_space_basis(list(self.basis) + [x])) == self.dim


@dataclass(frozen=True)
class CenterSplit:
    """Orthogonal decomposition ``n = v + z`` with ``z`` the center."""

    v: Subspace
    z: Subspace
    metric_on_v: RatMatrix
    metric_on_z: RatMatrix

    @cached_property
    def adapted_basis(self) -> RatMatrix:
        """Columns: the v basis followed by the z basis."""
        return RatMatrix.from_columns(list(self.v.basis) + list(self.z.basis), self.v.ambient_dim)

    @cached_property
    def _adapted_inverse(self) -> RatMatrix:
        return self.adapted_basis.inverse()

    def decompose(self, y: Sequence) -> tuple[Vector, Vector]:
        """Split ``y`` into (v-coordinates, z-coordinates)."""
        c = self._adapted_inverse.apply(vec(y))
        return c[: self.v.dim], c[self.v.dim:]

    def embed_v(self, xc: Sequence) -> Vector:
        return self.v.matrix().apply(xc) if self.v.dim else (ZERO,) * self.v.ambient_dim

    def embed_z(self, zc: Sequence) -> Vector:
        return self.z.matrix().apply(zc) if self.z.dim else (ZERO,) * self.z.ambient_dim

    def compose(self, xc: Sequence, zc: Sequence) -> Vector:
        return self.adapted_basis.apply(tuple(vec(xc)) + tuple(vec(zc)))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple
    nilpotency_class: int | None

    @property
    def ok(self) -> bool:
        return not self.violations


def lower_central_series(alg: MetricNilAlgebra, max_terms: int | None = None) -> list[list[Vector]]:
    """Bases of n = C^1 > C^2 = [n, n] > ... until zero or stabilised."""
    n = alg.dim
    current = [unit_vector(n, i) for i in range(n)]
    series = [current]
    limit = max_terms or n + 2
    while current and len(series) <= limit:
        nxt = row_space_basis(
            [alg.bracket(unit_vector(n, i), v) for i in range(n) for v in current]
        )
        if len(nxt) == len(current):
            break
        series.append(nxt)
        current = nxt
    return series


def nilpotency_class(alg: MetricNilAlgebra) -> int | None:
    """Smallest ``c`` with ``C^{c+1} = 0``; ``None`` if not nilpotent."""
    series = lower_central_series(alg)
    if series[-1]:
        return None
    return len(series) - 1 if alg.dim else 0


def validate(alg: MetricNilAlgebra) -> ValidationReport:
    """Check antisymmetry, Jacobi, metric symmetry / nondegeneracy and nilpotency.

    Never raises for mathematical failures; every problem is listed with the
    offending basis indices.
    """
    n = alg.dim
    out: list[Violation] = []
    if alg.metric.shape != (n, n):
        out.append(Violation("metric_shape", (), f"metric is {alg.metric.shape}, expected {(n, n)}"))
        return ValidationReport(tuple(out), None)
    for i, j, k, _ in alg.structure:
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            out.append(Violation("index_range", (i, j, k)))
    if out:
        return ValidationReport(tuple(out), None)

    c = alg.tensor
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    out.append(Violation("antisymmetry", (i, j, k),
                                         f"c({i},{j},{k})={c[i][j][k]} but c({j},{i},{k})={c[j][i][k]}"))
    e = [unit_vector(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = [a + b + d for a, b, d in zip(
                    alg.bracket(e[i], alg.bracket(e[j], e[k])),
                    alg.bracket(e[j], alg.bracket(e[k], e[i])),
                    alg.bracket(e[k], alg.bracket(e[i], e[j])),
                )]
                if any(s):
                    out.append(Violation("jacobi", (i, j, k)))
    g = alg.metric
    for i in range(n):
        for j in range(i + 1, n):
            if g[i, j] != g[j, i]:
                out.append(Violation("metric_symmetry", (i, j)))
    if g.det() == 0:
        out.append(Violation("metric_degenerate", (), "metric determinant is zero"))
    cls = nilpotency_class(alg)
    if cls is None:
        out.append(Violation("not_nilpotent", (), "lower central series does not reach zero"))
    return ValidationReport(tuple(out), cls)


def require_valid(alg: MetricNilAlgebra) -> None:
    report = validate(alg)
    if not report.ok:
        first = report.violations[0]
        raise InvalidAlgebra(f"{alg.name}: {first.kind} at {first.where} {first.detail}".strip())


# ---------------------------------------------------------------------------
# structure


def center(alg: MetricNilAlgebra) -> Subspace:
    n = alg.dim
    rows = []
    for i in range(n):
        rows.extend(alg.ad(unit_vector(n, i)).entries)
    basis = nullspace(RatMatrix.from_rows(rows)) if rows else []
    return Subspace(n, tuple(row_space_basis(basis)))


def restricted_metric(alg: MetricNilAlgebra, sub: Subspace) -> RatMatrix:
    b = sub.matrix()
    return b.T @ alg.metric @ b


def split_v_z(alg: MetricNilAlgebra) -> CenterSplit:
    """Metric-orthogonal complement v of the center z.

    Raises :class:`DegenerateCenter` if the metric on z is degenerate.
    """
    z = center(alg)
    gz = restricted_metric(alg, z)
    if z.dim and gz.det() == 0:
        raise DegenerateCenter(f"{alg.name}: metric restricted to the center is degenerate")
    n = alg.dim
    if z.dim:
        constraints = RatMatrix.from_rows([alg.metric.apply(zb) for zb in z.basis])
        vbasis = row_space_basis(nullspace(constraints))
    else:
        vbasis = [unit_vector(n, i) for i in range(n)]
    v = Subspace(n, tuple(vbasis))
    gv = restricted_metric(alg, v)
    return CenterSplit(v, z, gv, gz)


def j_map(alg: MetricNilAlgebra, split: CenterSplit, zc: Sequence) -> RatMatrix:
    """Operator j(Z) on v-coordinates, defined by <j(Z)X, X'> = <Z, [X, X']>."""
    zc = vec(zc)
    if len(zc) != split.z.dim:
        raise ValueError(f"expected {split.z.dim} z-coordinates, got {len(zc)}")
    m = split.v.dim
    if m == 0:
        return RatMatrix.zeros(0, 0)
    zvec = split.embed_z(zc)
    gz_vec = alg.metric.apply(zvec)
    vb = split.v.basis
    form = RatMatrix.from_rows([
        [dot(gz_vec, alg.bracket(vb[a], vb[b])) for b in range(m)] for a in range(m)
    ])
    return -(split.metric_on_v.inverse() @ form)


def is_ad_invariant(alg: MetricNilAlgebra) -> tuple[bool, tuple | None]:
    """Whether <ad_X Y, Z> + <Y, ad_X Z> = 0 on all basis triples.

    Returns ``(True, None)`` or ``(False, (a, b, c))`` for the first violating
    triple in lexicographic order.
    """
    n = alg.dim
    e = [unit_vector(n, i) for i in range(n)]
    for a, b, c in product(range(n), repeat=3):
        value = alg.inner(alg.bracket(e[a], e[b]), e[c]) + alg.inner(e[b], alg.bracket(e[a], e[c]))
        if value:
            return False, (a, b, c)
    return True, None


def is_pseudo_H_type(alg: MetricNilAlgebra, split: CenterSplit) -> bool:
    """Polarised pseudo-H-type test: j(Zi)j(Zj) + j(Zj)j(Zi) = -2<Zi, Zj> Id."""
    q = split.z.dim
    m = split.v.dim
    if q == 0 or m == 0:
        return False
    js = [j_map(alg, split, unit_vector(q, i)) for i in range(q)]
    ident = RatMatrix.identity(m)
    gz = split.metric_on_z
    for i in range(q):
        for k in range(i, q):
            lhs = js[i] @ js[k] + js[k] @ js[i]
            if lhs != ident.scale(-2 * gz[i, k]):
                return False
    return True


def metric_signature(metric: RatMatrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by exact symmetric elimination."""
    a = metric.to_lists()
    n = metric.rows
    pos = neg = 0
    active = list(range(n))
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence e_i -> e_i + e_j makes the diagonal entry 2 a_ij
            for r in range(n):
                a[r][i] += a[r][j]
            for c in range(n):
                a[i][c] += a[j][c]
            continue
        d = a[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in active:
            if i != p and a[i][p]:
                f = a[i][p] / d
                for c in range(n):
                    a[i][c] -= f * a[p][c]
                for r in range(n):
                    a[r][i] -= f * a[r][p]
        active.remove(p)
    return pos, neg, n - pos - neg


def is_definite(metric: RatMatrix) -> bool:
    pos, neg, zero = metric_signature(metric)
    return zero == 0 and (pos == 0 or neg == 0)


def is_automorphism(alg: MetricNilAlgebra, a: RatMatrix) -> bool:
    """A[x, y] = [Ax, Ay] on basis pairs and A invertible."""
    n = alg.dim
    if a.shape != (n, n) or a.det() == 0:
        return False
    cols = a.columns()
    for i in range(n):
        for j in range(i + 1, n):
            if a.apply(alg.bracket(unit_vector(n, i), unit_vector(n, j))) != alg.bracket(cols[i], cols[j]):
                return False
    return True


def is_isometry(alg: MetricNilAlgebra, a: RatMatrix) -> bool:
    return a.T @ alg.metric @ a == alg.metric
