"""Derivations and skew-symmetric derivations of a metric Lie algebra.

Der(n) is the null space of the Leibniz system in the n*n matrix entries;
Der^a(n) adds the metric-skewness rows.  Both are computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import CenterSplit, MetricNilAlgebra
from .ratlinalg import (
    ZERO,
    RatMatrix,
    coordinates_in,
    nullspace,
    row_space_basis,
    unit_vector,
)


@dataclass(frozen=True)
class Derivation:
    matrix: RatMatrix
    skew: bool = False


@dataclass(frozen=True)
class DerivationAlgebra:
    """A basis of derivations and its bracket table.

    ``structure_constants[a][b]`` holds the coordinates of the commutator
    ``[D_a, D_b]`` in the same basis.
    """

    algebra: MetricNilAlgebra
    basis: tuple
    structure_constants: tuple
    labels: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrices(self) -> list[RatMatrix]:
        return [d.matrix for d in self.basis]

    def combine(self, xi: Sequence) -> RatMatrix:
        """The operator sum_i xi_i D_i."""
        n = self.algebra.dim
        out = RatMatrix.zeros(n, n)
        for c, d in zip(xi, self.basis):
            if c:
                out = out + d.matrix.scale(c)
        return out

    def coordinates(self, m: RatMatrix):
        """Coordinates of ``m`` in the basis, or ``None`` if outside the span."""
        return coordinates_in([d.matrix.flatten() for d in self.basis], m.flatten())

    def bracket_coords(self, a: int, b: int):
        return self.structure_constants[a][b]


def _leibniz_rows(alg: MetricNilAlgebra) -> list[list]:
    n = alg.dim
    c = alg.tensor
    rows = []
    # unknown D[p][q] sits at column p*n + q; D e_q = sum_p D[p][q] e_p
    for i in range(n):
        for j in range(i + 1, n):
            for m in range(n):
                row = [ZERO] * (n * n)
                for k in range(n):
                    if c[i][j][k]:
                        row[m * n + k] += c[i][j][k]
                for p in range(n):
                    if c[p][j][m]:
                        row[p * n + i] -= c[p][j][m]
                    if c[i][p][m]:
                        row[p * n + j] -= c[i][p][m]
                if any(row):
                    rows.append(row)
    return rows


def _skew_rows(alg: MetricNilAlgebra) -> list[list]:
    n = alg.dim
    g = alg.metric
    rows = []
    # (G D)[a][b] + (G D)[b][a] = 0
    for a in range(n):
        for b in range(a, n):
            row = [ZERO] * (n * n)
            for k in range(n):
                if g[a, k]:
                    row[k * n + b] += g[a, k]
                if g[b, k]:
                    row[k * n + a] += g[b, k]
            if any(row):
                rows.append(row)
    return rows


def _as_matrix(flat, n: int) -> RatMatrix:
    return RatMatrix(n, n, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))


def _solve_space(alg: MetricNilAlgebra, rows: list[list]) -> list[RatMatrix]:
    n = alg.dim
    if not rows:
        return [_as_matrix(unit_vector(n * n, i), n) for i in range(n * n)]
    basis = row_space_basis(nullspace(RatMatrix.from_rows(rows)))
    return [_as_matrix(v, n) for v in basis]


def is_derivation(alg: MetricNilAlgebra, m: RatMatrix) -> bool:
    n = alg.dim
    e = [unit_vector(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = m.apply(alg.bracket(e[i], e[j]))
            rhs = tuple(a + b for a, b in zip(alg.bracket(m.apply(e[i]), e[j]),
                                              alg.bracket(e[i], m.apply(e[j]))))
            if lhs != rhs:
                return False
    return True


def is_skew(alg: MetricNilAlgebra, m: RatMatrix) -> bool:
    gm = alg.metric @ m
    return (gm + gm.T).is_zero()


def derivation_space(alg: MetricNilAlgebra) -> list[Derivation]:
    """Basis of Der(n), echelon-canonical in the flattened matrix entries."""
    return [Derivation(m, skew=is_skew(alg, m)) for m in _solve_space(alg, _leibniz_rows(alg))]


def _structure_constants(basis: Sequence[RatMatrix]) -> tuple:
    flats = [m.flatten() for m in basis]
    table = []
    for a in basis:
        row = []
        for b in basis:
            coords = coordinates_in(flats, a.commutator(b).flatten())
            if coords is None:
                raise ArithmeticError("derivation span is not closed under commutators")
            row.append(coords)
        table.append(tuple(row))
    return tuple(table)


def skew_derivation_space(alg: MetricNilAlgebra) -> DerivationAlgebra:
    """Der^a(n) with its exactly computed bracket table."""
    mats = _solve_space(alg, _leibniz_rows(alg) + _skew_rows(alg))
    return DerivationAlgebra(
        alg,
        tuple(Derivation(m, skew=True) for m in mats),
        _structure_constants(mats),
        tuple(f"D{i + 1}" for i in range(len(mats))),
    )


def rebase(dera: DerivationAlgebra, matrices: Sequence[RatMatrix],
           labels: Sequence[str] | None = None) -> DerivationAlgebra:
    """Re-express a derivation algebra in another basis of the same span.

    Every new basis element must lie in the span and they must be independent
    and complete; the bracket table is recomputed from commutators.
    """
    matrices = list(matrices)
    if len(matrices) != dera.dim:
        raise ValueError(f"need {dera.dim} basis elements, got {len(matrices)}")
    for m in matrices:
        if dera.coordinates(m) is None:
            raise ValueError("proposed basis element is not in the derivation span")
    if len(row_space_basis([m.flatten() for m in matrices])) != dera.dim:
        raise ValueError("proposed basis elements are linearly dependent")
    return DerivationAlgebra(
        dera.algebra,
        tuple(Derivation(m, skew=dera.basis[0].skew if dera.basis else True) for m in matrices),
        _structure_constants(matrices),
        tuple(labels) if labels else tuple(f"D{i + 1}" for i in range(len(matrices))),
    )


def check_preserves_split(d: Derivation | RatMatrix, split: CenterSplit) -> bool:
    """True iff D maps z into z and v into v."""
    m = d.matrix if isinstance(d, Derivation) else d
    return all(split.z.contains(m.apply(b)) for b in split.z.basis) and all(
        split.v.contains(m.apply(b)) for b in split.v.basis
    )
