from fractions import Fraction

import pytest

from nilgeo import catalog
from nilgeo.algebra import split_v_z
from nilgeo.derivations import rebase, skew_derivation_space
from nilgeo.geodesics import FAMILY, NOT_GEODESIC, IsoSystem
from nilgeo.h3xh3 import (
    ZeroDenominator,
    classify_V_membership,
    closed_form_graph,
    curve_point,
    in_W,
    norm_X,
    norm_Z,
    v1_solution,
    w_solution,
    xi3_along_curve,
)
from nilgeo.ratlinalg import RatMatrix, solve_affine

import strata

F = Fraction


@pytest.fixture(scope="module")
def system():
    alg = catalog.paper6_e()
    dera = rebase(skew_derivation_space(alg), catalog.paper6_dera_basis_e(), catalog.PAPER6_DERA_LABELS)
    return IsoSystem(alg, split_v_z(alg), dera)


def in_solution_set(sol, xi, k) -> bool:
    target = [a - b for a, b in zip(tuple(xi) + (k,), tuple(sol.xi) + (sol.k,))]
    if not sol.family_basis:
        return not any(target)
    return not solve_affine(RatMatrix.from_columns(sol.family_basis, len(target)), target).is_empty


def test_closed_form_examples():
    assert closed_form_graph((0, 1, 1, 0, 1, 0)).xi == (0, 0, -2, F(1, 2))
    assert closed_form_graph((1, 0, 0, 1, 0, 1)).xi == (0, 0, F(1, 2), 2)
    assert closed_form_graph((1, 2, 3, 4, 0, 0)).xi == (0, 0, 0, 0)
    with pytest.raises(ZeroDenominator):
        closed_form_graph((1, 1, 0, 0, 1, 0))


def test_closed_form_matches_solver_on_examples(system):
    for y in [(0, 1, 1, 0, 1, 0), (1, 0, 0, 1, 0, 1)]:
        sol = system.solve(y)
        assert sol.xi == closed_form_graph(y).xi and sol.k == 0


def test_membership_examples():
    assert classify_V_membership((0, 1, 1, 0, 1, 0)) == "U"
    assert classify_V_membership((1, 1, 0, 0, 1, 0)) == "V0"
    assert classify_V_membership((1, 1, 0, 0, 1, 1)) == "V2_W"
    assert classify_V_membership((0, 1, 0, 0, 1, -1)) == "V2_other"


def test_norms():
    assert norm_X((1, 0, 0, 1, 0, 0)) == -2
    assert norm_Z((0, 0, 0, 0, 2, 1)) == 3


@pytest.mark.parametrize("case", ["x1", "x3", "generic"])
def test_v1_families(case, rng, system):
    for _ in range(25):
        y = strata.v1_vector(rng, case)
        assert classify_V_membership(y) == "V1"
        sol = system.solve(y)
        assert sol.status == FAMILY and sol.k == 0 and sol.k_forced
        assert len(sol.family_basis) == 1
        for free in (0, 1, F(-7, 3)):
            xi = v1_solution(y, free)
            assert in_solution_set(sol, xi, 0)
        if case == "x1":
            x3, x4, z5, z6 = y[2], y[3], y[4], y[5]
            for member in (sol.member(), sol.member([2])):
                xi, _ = member
                assert xi[0] == 0 and xi[2] == 0 and xi[1] == 2 * (z5 - z6) * x4 / x3


def test_w_vectors(rng, system):
    for _ in range(40):
        y = strata.w_vector(rng)
        assert in_W(y)
        sol = system.solve(y)
        k = -y[0] * y[4] / y[1]
        assert sol.solvable and sol.k == k and sol.xi[0] == k / 2
        for xi3 in (0, 1, F(5, 2)):
            assert in_solution_set(sol, *w_solution(y, xi3))


def test_v0_vectors_are_not_geodesic(rng, system):
    for _ in range(40):
        assert system.solve(strata.v0_vector(rng)).status == NOT_GEODESIC


def test_curve_enters_U():
    y = (0, 1, 0, 1, 1, -1)
    for t in (F(1, 10), F(1, 100), F(1, 1000)):
        p = curve_point(y, t)
        assert norm_X(p) != 0
        exact = closed_form_graph(p).xi[2]
        assert abs(float(exact) - xi3_along_curve(y, float(t))) <= 1e-10 * abs(float(exact))
