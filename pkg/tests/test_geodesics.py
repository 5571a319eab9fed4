from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilgeo import catalog
from nilgeo.algebra import split_v_z
from nilgeo.derivations import rebase, skew_derivation_space
from nilgeo.geodesics import (
    FAMILY,
    NOT_GEODESIC,
    UNIQUE,
    GeodesicCandidate,
    IsoSystem,
    SamplerConfig,
    augment_check,
    classify_space,
    geodesic_lemma_check,
    go_lie_group_check,
    null_vector_in,
    probe_vectors,
    random_vector,
    solve_geodesic_system,
    trivial_geodesic_constant,
    trivial_isotropy_check,
)
from nilgeo.ratlinalg import RatMatrix

from conftest import rationals
from randalg import random_two_step

F = Fraction


def paper6(basis="e"):
    if basis == "e":
        alg, mats = catalog.paper6_e(), catalog.paper6_dera_basis_e()
    else:
        alg, mats = catalog.paper6_X(), catalog.paper6_dera_basis_X()
    dera = rebase(skew_derivation_space(alg), mats, catalog.PAPER6_DERA_LABELS)
    return alg, split_v_z(alg), dera


def test_lemma_check_examples():
    alg, _, dera = paper6()
    d = dera.combine((0, 0, -2, F(1, 2)))
    assert geodesic_lemma_check(alg, (0, 1, 1, 0, 1, 0), d, 0)
    assert geodesic_lemma_check(alg, (0, 0, 0, 0, 3, -2), None, 0)
    x = catalog.paper6_X()
    # <X5, X5> = 0 kills j(X5)X1, so X1 + X5 is geodesic; X1 + X6 is not
    assert geodesic_lemma_check(x, (1, 0, 0, 0, 1, 0), None, 0)
    assert not geodesic_lemma_check(x, (1, 0, 0, 0, 0, 1), None, 0)


def test_solver_examples():
    alg, split, dera = paper6()
    sol = solve_geodesic_system(alg, split, dera, (0, 1, 1, 0, 1, 0))
    assert sol.status == UNIQUE and sol.xi == (0, 0, -2, F(1, 2)) and sol.k == 0

    sol = solve_geodesic_system(alg, split, dera, (1, 1, 0, 0, 1, 1))
    assert sol.status == FAMILY and sol.k == -1 and sol.k_forced
    assert sol.xi[0] == F(-1, 2) and sol.xi[1] == F(3, 2) and sol.xi[3] == 0
    assert sol.family_basis == ((0, 0, 1, 0, 0),)

    assert solve_geodesic_system(alg, split, dera, (0, 1, 0, 0, 1, -1)).status == NOT_GEODESIC


def _random_algebras(rng):
    out = [paper6(), paper6("X")]
    for _ in range(6):
        alg = random_two_step(rng)
        try:
            out.append((alg, split_v_z(alg), skew_derivation_space(alg)))
        except ValueError:
            pass
    return out


def test_soundness_and_nonnull_k(rng):
    for alg, split, dera in _random_algebras(rng):
        system = IsoSystem(alg, split, dera)
        vectors = [random_vector(rng, alg.dim, 4) for _ in range(40)]
        vectors += probe_vectors(alg.dim, 2)
        for y in vectors:
            sol = system.solve(y)
            if not sol.solvable:
                continue
            members = [sol.member()] + [sol.member([1] * i + [F(-3, 2)]) for i in range(len(sol.family_basis))]
            for xi, k in members:
                assert geodesic_lemma_check(alg, y, dera.combine(xi), k)
                if alg.norm2(y) != 0:
                    assert k == 0


@given(st.lists(rationals, min_size=6, max_size=6), rationals.filter(bool))
def test_scaling_law(y, eta):
    alg, split, dera = paper6()
    sol = solve_geodesic_system(alg, split, dera, y)
    scaled = solve_geodesic_system(alg, split, dera, [eta * c for c in y])
    assert scaled.solvable == sol.solvable
    if sol.solvable:
        d = dera.combine(sol.xi).scale(eta)
        assert geodesic_lemma_check(alg, [eta * c for c in y], d, eta * sol.k)
        if sol.k_forced:
            assert scaled.k == eta * sol.k


AUTOMORPHISMS = [catalog.A_tau(((2, 1), (1, 1))), catalog.A_tau(((F(1, 2), 0), (3, -1))),
                 catalog.B1, catalog.B2, catalog.B3]


@pytest.mark.parametrize("a", AUTOMORPHISMS, ids=["A_tau1", "A_tau2", "B1", "B2", "B3"])
def test_equivariance(a, rng):
    alg, split, dera = paper6("X")
    ainv = a.inverse()
    to_x = catalog.X_TO_E
    anchors = [to_x.apply(v) for v in [(0, 1, 1, 0, 1, 0), (1, 1, 0, 0, 1, 1), (0, 1, 0, 0, 1, -1)]]
    for y in anchors + [random_vector(rng, 6, 5) for _ in range(15)]:
        sol = solve_geodesic_system(alg, split, dera, y)
        moved = solve_geodesic_system(alg, split, dera, a.apply(y))
        assert moved.solvable == sol.solvable
        if sol.solvable:
            d = a @ dera.combine(sol.xi) @ ainv
            assert geodesic_lemma_check(alg, a.apply(y), d, sol.k)
            if sol.k_forced:
                assert moved.k == sol.k


def test_trivial_isotropy_examples():
    alg = catalog.paper6_X()
    split = split_v_z(alg)
    assert trivial_isotropy_check(alg, split, (0, 0, 0, 0, 1, 0)).geodesic
    assert trivial_isotropy_check(alg, split, (1, 0, 0, 0, 1, 0)).geodesic
    assert not trivial_isotropy_check(alg, split, (1, 0, 0, 0, 0, 1)).geodesic
    assert trivial_isotropy_check(alg, split, (1, 1, 0, 0, 0, 0)).geodesic


def test_trivial_checks_agree(rng):
    alg = catalog.paper6_X()
    split = split_v_z(alg)
    for _ in range(50):
        y = random_vector(rng, 6, 3)
        k = trivial_geodesic_constant(alg, y)
        assert trivial_isotropy_check(alg, split, y).geodesic == (k is not None)
        if k is not None:
            assert k == 0


def test_go_lie_group():
    assert not go_lie_group_check(catalog.paper6_e())
    assert go_lie_group_check(catalog.abelian_rpq())
    assert go_lie_group_check(catalog.cotangent_h3())


def test_augment_along_W_family():
    alg, split, dera = paper6()
    y = (1, 1, 0, 0, 1, 1)
    sol = solve_geodesic_system(alg, split, dera, y)
    xi_a, k_a = sol.member([0])
    xi_b, k_b = sol.member([5])
    cand = GeodesicCandidate(y, dera.combine(xi_a), k_a)
    a = dera.combine(xi_b) - dera.combine(xi_a)
    res = augment_check(alg, cand, a)
    assert res.geodesic and res.lam == 0 and res.k == k_b
    assert augment_check(alg, cand, RatMatrix.zeros(6, 6)).lam == 0
    # T moves Y off its own line
    assert not augment_check(alg, cand, dera.basis[0].matrix).geodesic


def test_augment_null_vector_eigenvalue():
    alg, split, dera = paper6()
    y = (1, 0, 0, 0, 0, 0)
    cand = GeodesicCandidate(y, RatMatrix.zeros(6, 6), 0)
    h = dera.basis[1].matrix
    res = augment_check(alg, cand, h)
    assert res.geodesic and res.lam == 1 and res.k == -1
    assert geodesic_lemma_check(alg, y, h, res.k)


def test_null_sampler_produces_null_vectors(rng):
    g = catalog.paper6_e().metric
    got = 0
    for _ in range(200):
        y = null_vector_in(rng, g, range(6))
        if y is not None:
            got += 1
            assert catalog.paper6_e().norm2(y) == 0 and any(y)
    assert got > 50


def test_classify_paper6():
    v = classify_space(catalog.paper6_e(), SamplerConfig(samples=300, null_samples=150, seed=7))
    assert (v.verdict, v.null_verdict, v.certified) == ("AlmostGO", "NotNGO", True)
    ys = {w.candidate.y for w in v.witnesses if not w.solvable}
    assert (0, 1, 0, 0, 1, -1) in ys


def test_classify_other_fixtures():
    cfg = SamplerConfig(samples=150, null_samples=60, seed=3)
    v = classify_space(catalog.heis3_riem(), cfg)
    assert v.verdict == "GO" and v.null_verdict == "EmptyNullCone"
    v = classify_space(catalog.abelian_rpq(), cfg)
    assert v.verdict == "GO" and v.null_verdict == "NGO"
    v = classify_space(catalog.cotangent_h3(), cfg, presentation="trivial")
    assert v.verdict == "GO_LieGroup" and v.bi_invariant
    with pytest.raises(ValueError):
        classify_space(catalog.cotangent_h3(), cfg)


def test_classify_is_deterministic():
    cfg = SamplerConfig(samples=100, null_samples=40, seed=11)
    a = classify_space(catalog.paper6_X(), cfg)
    b = classify_space(catalog.paper6_X(), cfg)
    assert a.witnesses == b.witnesses and a.sample_stats == b.sample_stats
