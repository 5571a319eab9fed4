"""Built-in algebras and automorphism fixtures.

``paper6_X`` / ``paper6_e`` are the six-dimensional 2-step algebra
(H3 x H3 as a Lie algebra, with a non-product neutral metric) in its two
presentations.  The change of basis between them is :data:`X_TO_E`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .algebra import MetricNilAlgebra, is_ad_invariant, require_valid
from .ratlinalg import RatMatrix, to_rational

F = Fraction


def _E(n: int, i: int, j: int) -> RatMatrix:
    """1-based matrix unit E_ij of size n."""
    return RatMatrix.unit(n, i - 1, j - 1)


def _sum_units(n: int, terms: Sequence[tuple[int, int, int]]) -> RatMatrix:
    out = RatMatrix.zeros(n, n)
    for c, i, j in terms:
        out = out + _E(n, i, j).scale(c)
    return out


def paper6_X() -> MetricNilAlgebra:
    return MetricNilAlgebra.from_brackets(
        "paper6_X",
        ["X1", "X2", "X3", "X4", "X5", "X6"],
        {(0, 2): {4: 1}, (1, 3): {5: 1}},
        {(0, 3): -1, (1, 2): 1, (4, 5): 2},
        {"nilpotency_class": 2},
    )


def paper6_e() -> MetricNilAlgebra:
    return MetricNilAlgebra.from_brackets(
        "paper6_e",
        ["e1", "e2", "e3", "e4", "e5", "e6"],
        {(0, 2): {4: F(1, 2), 5: F(-1, 2)}, (1, 3): {4: 2, 5: 2}},
        {(0, 3): -1, (1, 2): 1, (4, 4): 1, (5, 5): -1},
        {"nilpotency_class": 2},
    )


# columns: e_j written in the X basis
X_TO_E = RatMatrix.from_columns([
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, F(1, 4)),
    (0, 0, 0, 0, -1, F(1, 4)),
])


def heis3_riem() -> MetricNilAlgebra:
    return MetricNilAlgebra.from_brackets(
        "heis3_riem", ["x", "y", "z"], {(0, 1): {2: 1}},
        {(0, 0): 1, (1, 1): 1, (2, 2): 1}, {"nilpotency_class": 2},
    )


def heis3_lorentz_degenerate() -> MetricNilAlgebra:
    # <z, z> = 0: the center is a null line
    return MetricNilAlgebra.from_brackets(
        "heis3_lorentz_degenerate", ["x", "y", "z"], {(0, 1): {2: 1}},
        {(0, 0): 1, (1, 2): 1}, {"nilpotency_class": 2},
    )


def abelian_rpq(p: int = 2, q: int = 1) -> MetricNilAlgebra:
    n = p + q
    return MetricNilAlgebra.from_brackets(
        "abelian_rpq" if (p, q) == (2, 1) else f"abelian_r{p}{q}",
        [f"a{i + 1}" for i in range(n)],
        {},
        {(i, i): (1 if i < p else -1) for i in range(n)},
        {"nilpotency_class": 1, "p": p, "q": q},
    )


def cotangent_h3() -> MetricNilAlgebra:
    """T*h3 = h3 + h3* with the coadjoint bracket and the canonical pairing.

    Built from the generic construction and then checked, not typed in.
    """
    n = 3
    h3 = {(0, 1): {2: F(1)}}

    def h3_bracket(i: int, j: int) -> dict:
        if (i, j) in h3:
            return h3[(i, j)]
        if (j, i) in h3:
            return {k: -c for k, c in h3[(j, i)].items()}
        return {}

    brackets: dict = {}

    def add(i: int, j: int, k: int, c: Fraction) -> None:
        if i > j:
            i, j, c = j, i, -c
        brackets.setdefault((i, j), {})
        brackets[(i, j)][k] = brackets[(i, j)].get(k, F(0)) + c

    for i in range(n):
        for j in range(i + 1, n):
            for k, c in h3_bracket(i, j).items():
                add(i, j, k, c)
    # [x, xi] = ad*_x xi with (ad*_x xi)(w) = -xi([x, w]); dual vector f_l sits at index n + l
    for i in range(n):
        for l in range(n):
            for w in range(n):
                c = h3_bracket(i, w).get(l, F(0))
                if c:
                    add(i, n + l, n + w, -c)
    metric = {(i, n + i): 1 for i in range(n)}
    alg = MetricNilAlgebra.from_brackets(
        "cotangent_h3",
        ["x", "y", "z", "x*", "y*", "z*"],
        brackets,
        metric,
        {"nilpotency_class": 2},
    )
    require_valid(alg)
    if not is_ad_invariant(alg)[0]:
        raise AssertionError("cotangent construction lost ad-invariance")
    return alg


CATALOG: dict[str, Callable[[], MetricNilAlgebra]] = {
    "paper6_X": paper6_X,
    "paper6_e": paper6_e,
    "heis3_riem": heis3_riem,
    "heis3_lorentz_degenerate": heis3_lorentz_degenerate,
    "abelian_rpq": abelian_rpq,
    "cotangent_h3": cotangent_h3,
}

ALIASES = {"paper6": "paper6_e"}


def get(name: str) -> MetricNilAlgebra:
    name = ALIASES.get(name, name)
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None


def names() -> list[str]:
    return list(CATALOG)


# ---------------------------------------------------------------------------
# automorphism fixtures for paper6 (X basis)


def A_tau(tau: Sequence[Sequence]) -> RatMatrix:
    """The isometric automorphism A_tau of paper6_X for an invertible 2x2 ``tau``."""
    (t11, t12), (t21, t22) = [[to_rational(a) for a in r] for r in tau]
    d = t11 * t22 - t12 * t21
    if d == 0:
        raise ValueError("tau must be invertible")
    cols = [
        (t11, 0, t21, 0, 0, 0),
        (0, t11 / d, 0, t21 / d, 0, 0),
        (t12, 0, t22, 0, 0, 0),
        (0, t12 / d, 0, t22 / d, 0, 0),
        (0, 0, 0, 0, d, 0),
        (0, 0, 0, 0, 0, 1 / d),
    ]
    return RatMatrix.from_columns(cols)


B1 = _sum_units(6, [(1, 1, 3), (1, 2, 4), (-1, 3, 1), (-1, 4, 2), (1, 5, 5), (1, 6, 6)])
B2 = _sum_units(6, [(1, 1, 2), (1, 1, 4), (1, 2, 1), (1, 2, 3), (1, 3, 2), (1, 4, 1),
                    (-1, 5, 6), (-1, 6, 5)])
# The printed third generator also carries E34 + E44, which breaks [X3, X4] = 0;
# B3_PRINTED keeps that form for reference, B3 is the isometric automorphism.
B3_PRINTED = _sum_units(6, [(1, 1, 4), (1, 2, 3), (1, 3, 2), (1, 3, 4), (1, 4, 1), (1, 4, 4),
                            (-1, 5, 6), (-1, 6, 5)])
B3 = _sum_units(6, [(1, 1, 4), (1, 2, 3), (1, 3, 2), (1, 4, 1), (-1, 5, 6), (-1, 6, 5)])


# ---------------------------------------------------------------------------
# the skew-derivation basis {T, H, E, F} of paper6 (e basis)

PAPER6_DERA_LABELS = ("T", "H", "E", "F")


def paper6_dera_basis_e() -> list[RatMatrix]:
    T = _sum_units(6, [(1, 1, 1), (-1, 2, 2), (1, 3, 3), (-1, 4, 4), (-2, 5, 6), (-2, 6, 5)])
    H = _sum_units(6, [(1, 1, 1), (1, 2, 2), (-1, 3, 3), (-1, 4, 4)])
    E = _sum_units(6, [(1, 1, 3), (1, 2, 4)])
    Fm = _sum_units(6, [(1, 3, 1), (1, 4, 2)])
    return [T, H, E, Fm]


def paper6_dera_basis_X() -> list[RatMatrix]:
    inv = X_TO_E.inverse()
    return [X_TO_E @ m @ inv for m in paper6_dera_basis_e()]


def preferred_dera_basis(alg: MetricNilAlgebra):
    """The human-readable {T, H, E, F} basis when ``alg`` is one of the paper6 presentations."""
    if alg.same_structure(paper6_e()):
        return paper6_dera_basis_e(), PAPER6_DERA_LABELS
    if alg.same_structure(paper6_X()):
        return paper6_dera_basis_X(), PAPER6_DERA_LABELS
    return None
