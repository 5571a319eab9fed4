"""Closed forms for the six-dimensional example in the e basis.

Coordinates are ``y = (x1, x2, x3, x4, z5, z6)`` with ``X = sum x_i e_i`` in v
and ``Z = z5 e5 + z6 e6`` in the center; derivation coordinates refer to the
basis {T, H, E, F}.  These formulas are independent of the generic solver and
serve as its oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .geodesics import UNIQUE, GeodesicSolution
from .ratlinalg import ZERO, vec


class ZeroDenominator(ZeroDivisionError):
    """<X, X> = 0: the rational geodesic graph is not defined here."""


def _unpack(y: Sequence):
    y = vec(y)
    if len(y) != 6:
        raise ValueError("expected six e-basis coordinates")
    return y


def norm_X(y: Sequence) -> Fraction:
    x1, x2, x3, x4, _, _ = _unpack(y)
    return 2 * (x3 * x2 - x1 * x4)


def norm_Z(y: Sequence) -> Fraction:
    *_, z5, z6 = _unpack(y)
    return z5 * z5 - z6 * z6


def closed_form_graph(y: Sequence) -> GeodesicSolution:
    """The rational geodesic graph on U = {<X, X> != 0}, with k = 0."""
    x1, x2, x3, x4, z5, z6 = _unpack(y)
    nx = norm_X(y)
    if nx == 0:
        raise ZeroDenominator("<X, X> = 0; use the generic solver")
    xi2 = (z5 * (4 * x4 * x2 + x1 * x3) + z6 * (x1 * x3 - 4 * x4 * x2)) / nx
    xi3 = -(z5 * (4 * x2 * x2 + x1 * x1) + z6 * (x1 * x1 - 4 * x2 * x2)) / nx
    xi4 = (z5 * (4 * x4 * x4 + x3 * x3) + z6 * (x3 * x3 - 4 * x4 * x4)) / nx
    return GeodesicSolution(UNIQUE, (ZERO, xi2, xi3, xi4), ZERO)


def rank_conditions(y: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    """The three polynomials whose simultaneous vanishing makes the reduced system consistent."""
    x1, x2, x3, x4, z5, z6 = _unpack(y)
    return (
        z6 * (x3 * x3 - 4 * x4 * x4) + z5 * (4 * x4 * x4 + x3 * x3),
        z6 * (x1 * x1 - 4 * x2 * x2) + z5 * (4 * x2 * x2 + x1 * x1),
        z6 * (x3 * x1 - 4 * x2 * x4) + z5 * (x3 * x1 + 4 * x2 * x4),
    )


def in_W(y: Sequence) -> bool:
    x1, x2, _, _, z5, z6 = _unpack(y)
    return norm_X(y) == 0 and z5 == z6 and z5 != 0 and x1 * x2 != 0


def classify_V_membership(y: Sequence) -> str:
    """One of ``U``, ``V0``, ``V1``, ``V2_W``, ``V2_other``."""
    if norm_X(y) != 0:
        return "U"
    if norm_Z(y) != 0:
        return "V1" if not any(rank_conditions(y)) else "V0"
    return "V2_W" if in_W(y) else "V2_other"


def w_solution(y: Sequence, xi3=0) -> tuple[tuple, Fraction]:
    """(xi, k) for Y in W: k = -x1 z5 / x2 with xi3 free."""
    if not in_W(y):
        raise ValueError("vector is not in W")
    x1, x2, x3, _, z5, _ = _unpack(y)
    xi3 = Fraction(xi3)
    k = -x1 * z5 / x2
    xi1 = k / 2
    xi2 = Fraction(3, 2) * x1 * z5 / x2 - x3 / x1 * xi3
    xi4 = 3 * x3 * z5 / x2 - x3 * x3 / (x1 * x1) * xi3
    return (xi1, xi2, xi3, xi4), k


def v1_solution(y: Sequence, free=0) -> tuple:
    """xi for Y in V1 (k = 0), parametrised by the free coordinate as in the three cases.

    ``free`` is xi4 when x1 = 0 or all x_i != 0, and xi3 when x3 = 0.
    """
    if classify_V_membership(y) != "V1":
        raise ValueError("vector is not in V1")
    x1, x2, x3, x4, z5, z6 = _unpack(y)
    free = Fraction(free)
    if x1 == 0 and x3 == 0:
        raise ValueError("X = 0: every derivation with D(Z) = 0 works; no parametrisation")
    if x1 == 0:
        return (ZERO, 2 * (z5 - z6) * x4 / x3, ZERO, free)
    if x3 == 0:
        return (ZERO, -2 * (z5 - z6) * x2 / x1, free, ZERO)
    xi2 = 2 * (z5 - z6) * x2 / x1 + x2 / x4 * free
    xi3 = -4 * (z5 - z6) * x2 / x3 - x1 * x2 / (x3 * x4) * free
    return (ZERO, xi2, xi3, free)


def xi3_along_curve(y: Sequence, t: float) -> float:
    """xi3 of the geodesic graph at (x1 + t^2, x2, x3, x4 + t^4, z5 + t, z6) for Y in V.

    Float evaluation of the simplified closed form; valid only when <X, X> = 0.
    """
    y1, y2, _, y4, y5, y6 = (float(c) for c in _unpack(y))
    num = (y1 + t * t) ** 2 * (y5 + t + y6) + 4 * y2 * y2 * (y5 + t - y6)
    den = t ** 6 + t ** 4 * y1 + t * t * y4
    return 0.5 * num / den


def curve_point(y: Sequence, t) -> tuple:
    x1, x2, x3, x4, z5, z6 = _unpack(y)
    t = Fraction(t)
    return (x1 + t * t, x2, x3, x4 + t ** 4, z5 + t, z6)
