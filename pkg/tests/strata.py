"""Samplers for the strata of the six-dimensional example (e basis)."""

import random
from fractions import Fraction

from nilgeo.geodesics import random_rational


def nonzero(rng: random.Random, bound: int = 9) -> Fraction:
    while True:
        q = random_rational(rng, bound)
        if q:
            return q


def null_x(rng: random.Random, zero: str | None = None) -> tuple:
    """(x1, x2, x3, x4) with x3 x2 = x1 x4; ``zero`` forces x1 = 0 or x3 = 0."""
    if zero == "x1":
        return (Fraction(0), Fraction(0), nonzero(rng), nonzero(rng))
    if zero == "x3":
        return (nonzero(rng), nonzero(rng), Fraction(0), Fraction(0))
    x1, x2, x3 = nonzero(rng), nonzero(rng), nonzero(rng)
    return (x1, x2, x3, x2 * x3 / x1)


def generic_U(rng: random.Random) -> tuple:
    while True:
        y = tuple(random_rational(rng) for _ in range(6))
        if 2 * (y[2] * y[1] - y[0] * y[3]) != 0 and (y[4] or y[5]):
            return y


def v1_vector(rng: random.Random, case: str) -> tuple:
    """case in {"x1", "x3", "generic"}: the three parametrised shapes."""
    s = nonzero(rng)
    if case == "x1":
        x = null_x(rng, "x1")
        a, b = x[2], x[3]
        return x + ((4 * b * b - a * a) * s, (4 * b * b + a * a) * s)
    x = null_x(rng, "x3" if case == "x3" else None)
    a, b = x[0], x[1]
    return x + ((4 * b * b - a * a) * s, (4 * b * b + a * a) * s)


def v0_vector(rng: random.Random) -> tuple:
    from nilgeo.h3xh3 import classify_V_membership

    while True:
        x = null_x(rng, rng.choice([None, None, "x1", "x3"]))
        z5, z6 = nonzero(rng), nonzero(rng)
        y = x + (z5, z6)
        if classify_V_membership(y) == "V0":
            return y


def w_vector(rng: random.Random) -> tuple:
    x1, x2 = nonzero(rng), nonzero(rng)
    x3 = random_rational(rng)
    z = nonzero(rng)
    return (x1, x2, x3, x2 * x3 / x1, z, z)


def mixed(rng: random.Random) -> tuple:
    kind = rng.randrange(6)
    if kind == 0:
        return generic_U(rng)
    if kind == 1:
        return v0_vector(rng)
    if kind == 2:
        return v1_vector(rng, rng.choice(["x1", "x3", "generic"]))
    if kind == 3:
        return w_vector(rng)
    z = nonzero(rng)
    x = null_x(rng, rng.choice([None, "x1", "x3"]))
    return x + (z, -z if kind == 4 else z)
