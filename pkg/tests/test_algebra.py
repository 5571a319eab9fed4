import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilgeo import catalog
from nilgeo.algebra import (
    DegenerateCenter,
    InvalidAlgebra,
    MetricNilAlgebra,
    center,
    is_ad_invariant,
    is_automorphism,
    is_definite,
    is_isometry,
    is_pseudo_H_type,
    j_map,
    metric_signature,
    nilpotency_class,
    require_valid,
    split_v_z,
    validate,
)
from nilgeo.ratlinalg import RatMatrix

from conftest import rationals
from randalg import invertible, random_two_step

E = catalog._E


def test_catalog_entries_are_valid():
    for name in catalog.names():
        rep = validate(catalog.get(name))
        assert rep.ok, (name, rep.violations)


def test_jacobi_violation_is_reported():
    alg = MetricNilAlgebra.from_brackets(
        "bad", ["a", "b", "c"], {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: 1}},
        {(0, 0): 1, (1, 1): 1, (2, 2): 1})
    kinds = {v.kind for v in validate(alg).violations}
    assert "jacobi" in kinds or "not_nilpotent" in kinds
    with pytest.raises(InvalidAlgebra):
        require_valid(alg)


def test_non_nilpotent_is_reported():
    alg = MetricNilAlgebra.from_brackets("affine", ["a", "b"], {(0, 1): {1: 1}},
                                         {(0, 0): 1, (1, 1): 1})
    rep = validate(alg)
    assert not rep.ok and rep.nilpotency_class is None


def test_degenerate_metric_is_reported():
    alg = MetricNilAlgebra.from_brackets("flat", ["a", "b"], {}, {(0, 0): 1})
    assert not validate(alg).ok


def test_nilpotency_classes():
    assert nilpotency_class(catalog.paper6_X()) == 2
    assert nilpotency_class(catalog.abelian_rpq()) == 1
    fil = MetricNilAlgebra.from_brackets("fil", ["a", "b", "c", "d"],
                                         {(0, 1): {2: 1}, (0, 2): {3: 1}},
                                         {(i, i): 1 for i in range(4)})
    assert nilpotency_class(fil) == 3


def test_paper6_center_and_signature():
    alg = catalog.paper6_X()
    z = center(alg)
    assert z.dim == 2
    assert z.contains((0, 0, 0, 0, 1, 0)) and z.contains((0, 0, 0, 0, 0, 1))
    assert metric_signature(alg.metric) == (3, 3, 0)
    assert not is_definite(alg.metric)
    assert is_definite(catalog.heis3_riem().metric)


def test_presentations_are_isometric():
    moved = catalog.paper6_X().change_basis(catalog.X_TO_E)
    assert moved.same_structure(catalog.paper6_e())


def test_j_maps_in_X_basis():
    alg = catalog.paper6_X()
    split = split_v_z(alg)
    assert split.z.basis == ((0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1))
    assert j_map(alg, split, (1, 0)) == (E(4, 1, 2) + E(4, 3, 4)).scale(-2)
    assert j_map(alg, split, (0, 1)) == (E(4, 2, 1) + E(4, 4, 3)).scale(2)


@given(rationals, rationals)
def test_pseudo_H_type_identity(z5, z6):
    alg = catalog.paper6_X()
    split = split_v_z(alg)
    j = j_map(alg, split, (z5, z6))
    assert j @ j == RatMatrix.identity(4).scale(-4 * z5 * z6)


def test_pseudo_H_type_flags():
    assert is_pseudo_H_type(catalog.paper6_e(), split_v_z(catalog.paper6_e()))
    assert is_pseudo_H_type(catalog.heis3_riem(), split_v_z(catalog.heis3_riem()))


def test_degenerate_centers():
    for name in ("heis3_lorentz_degenerate", "cotangent_h3"):
        with pytest.raises(DegenerateCenter):
            split_v_z(catalog.get(name))


def test_ad_invariance():
    assert is_ad_invariant(catalog.cotangent_h3())[0]
    assert is_ad_invariant(catalog.abelian_rpq())[0]
    ok, witness = is_ad_invariant(catalog.paper6_X())
    assert not ok and witness is not None


@pytest.mark.parametrize("tau", [((1, 0), (0, 1)), ((2, 1), (1, 1)), ((Fraction(1, 3), 5), (-2, 7))])
def test_A_tau_is_isometric_automorphism(tau):
    alg = catalog.paper6_X()
    a = catalog.A_tau(tau)
    assert is_automorphism(alg, a) and is_isometry(alg, a)


def test_B_fixtures():
    alg = catalog.paper6_X()
    for b in (catalog.B1, catalog.B2, catalog.B3):
        assert is_automorphism(alg, b) and is_isometry(alg, b)
    assert not is_automorphism(alg, catalog.B3_PRINTED)


def test_split_is_orthogonal_and_covers(rng):
    for _ in range(10):
        alg = random_two_step(rng)
        try:
            split = split_v_z(alg)
        except DegenerateCenter:
            continue
        assert split.v.dim + split.z.dim == alg.dim
        for v in split.v.basis:
            for z in split.z.basis:
                assert alg.inner(v, z) == 0


def test_validity_survives_basis_change(rng):
    for _ in range(5):
        alg = random_two_step(rng)
        moved = alg.change_basis(invertible(rng, alg.dim))
        assert validate(moved).ok
        assert nilpotency_class(moved) == nilpotency_class(alg)
        assert metric_signature(moved.metric) == metric_signature(alg.metric)
