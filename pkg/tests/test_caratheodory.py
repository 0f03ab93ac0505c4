import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homcone import families
from homcone.caratheodory import (
    caratheodory_bounds,
    decompose,
    decompose_dual_orbit,
    dual_condition,
    dual_witness,
    find_witness,
    indecomposable_components,
    is_selfdual,
    operator_condition,
    primal_condition,
    primal_witness,
    witness_gap,
)
from homcone.exceptions import AxiomNotVerified, NotInClosure, NotInGroup, NotInSubspace, WitnessConditionFails
from homcone.geometry import (
    group_act,
    in_cone,
    is_dual_interior,
    minimal_face,
    random_group_element,
    random_interior_point,
    Membership,
)
from homcone.graphs import rank4_catalog

FRAME_NAMES = sorted(families.named_frames())
RANK4 = {e.name: e.frame for e in rank4_catalog()}


def test_conditions_on_rank_three_example(vinberg):
    assert primal_condition(vinberg).holds
    d = dual_condition(vinberg)
    assert not d.holds
    assert d.triples == [(1, 2, 3)]
    assert d.violations[0].dims == {"23": 1, "13": 1, "12": 0}


def test_conditions_on_other_frames(catalog):
    assert primal_condition(catalog["S3"]).holds and dual_condition(catalog["S3"]).holds
    assert primal_condition(RANK4["K4(7)"]).holds
    assert not dual_condition(RANK4["K4(9)"]).holds
    assert not primal_condition(catalog["vinberg_dual"]).holds and dual_condition(catalog["vinberg_dual"]).holds


def test_conditions_require_axioms():
    bad = families.sparse_frame(4, [(1, 2), (2, 3), (3, 4)])
    for fn in (primal_condition, dual_condition, is_selfdual):
        with pytest.raises(AxiomNotVerified):
            fn(bad)
    with pytest.raises(AxiomNotVerified):
        operator_condition(bad)


def test_operator_condition_examples(vinberg, catalog):
    assert operator_condition(vinberg, "primal").holds
    assert operator_condition(vinberg, "dual").triples == [(1, 2, 3)]
    assert operator_condition(catalog["S3"], "primal").holds
    assert operator_condition(catalog["S3"], "dual").holds


@pytest.mark.parametrize("name", FRAME_NAMES)
def test_operator_condition_matches_dimension_condition(name):
    f = families.named_frames()[name]
    assert operator_condition(f, "primal").triples == primal_condition(f).triples
    assert operator_condition(f, "dual").triples == dual_condition(f).triples


def test_operator_condition_matches_on_random_frames(rng):
    for _ in range(40):
        f = families.random_homogeneous_frame(rng)
        assert operator_condition(f, "primal").holds == primal_condition(f).holds
        assert operator_condition(f, "dual").holds == dual_condition(f).holds


def test_decompose_identity(vinberg):
    dec = decompose(vinberg, np.eye(3))
    assert dec.size == 3
    for i, t in enumerate(dec.terms):
        np.testing.assert_array_equal(t.generator, np.diag(np.eye(3)[i]))
    assert dec.residual == 0.0


def test_decompose_rank_one_point(vinberg):
    X = np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 1.0]])
    dec = decompose(vinberg, X)
    assert dec.size == 1
    np.testing.assert_allclose(dec.terms[0].generator, X)


def test_decompose_errors(vinberg):
    with pytest.raises(NotInClosure):
        decompose(vinberg, np.diag([1.0, -1.0, 1.0]))
    with pytest.raises(NotInClosure):
        decompose(vinberg, np.ones((3, 3)))


@pytest.mark.parametrize("name", FRAME_NAMES)
def test_decompositions_reconstruct_and_use_rays(name, rng):
    f = families.named_frames()[name]
    for _ in range(5):
        T = random_group_element(f, rng)
        B = [i for i in range(1, f.r + 1) if rng.random() < 0.7]
        X = T.T @ f.blocks.indicator(B) @ T
        dec = decompose(f, X)
        assert dec.size == len(B)
        assert dec.residual <= 1e-8 * (1 + np.linalg.norm(X))
        for t in dec.terms:
            assert len(minimal_face(f, t.generator).indices) == 1


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FRAME_NAMES), st.integers(0, 2**32 - 1))
def test_term_count_is_orbit_invariant(name, seed):
    f = families.named_frames()[name]
    rng = np.random.default_rng(seed)
    B = [i for i in range(1, f.r + 1) if rng.random() < 0.6]
    X = f.blocks.indicator(B)
    Y = group_act(f, random_group_element(f, rng), X)
    assert decompose(f, Y).size == decompose(f, X).size == len(B)
    assert caratheodory_bounds(f, Y).upper == caratheodory_bounds(f, X).upper


def test_decompose_dual_orbit(vinberg, witness_T):
    dec = decompose_dual_orbit(vinberg, np.eye(3))
    assert dec.size == 3
    dec = decompose_dual_orbit(vinberg, witness_T)
    np.testing.assert_allclose(dec.point, [[2.0, 0.0, 1.0], [0.0, 2.0, 1.0], [1.0, 1.0, 1.0]])
    np.testing.assert_allclose(dec.terms[0].generator, np.diag([1.0, 0.0, 0.0]))
    np.testing.assert_allclose(dec.terms[1].generator, np.diag([0.0, 1.0, 0.0]))
    np.testing.assert_allclose(dec.terms[2].generator, [[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 1.0]])
    assert dec.residual <= 1e-12
    dec = decompose_dual_orbit(vinberg, np.diag([2.0, 1.0, 3.0]))
    for t, c in zip(dec.terms, [4.0, 1.0, 9.0]):
        np.testing.assert_allclose(t.generator * 1.0, np.diag(np.eye(3)[t.block - 1]) * c)


def test_decompose_dual_orbit_with_zero_blocks(vinberg):
    T = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    dec = decompose_dual_orbit(vinberg, T)
    assert dec.face == (1, 2) and dec.size == 2
    with pytest.raises(NotInGroup):
        decompose_dual_orbit(vinberg, np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]))
    with pytest.raises(NotInGroup):
        decompose_dual_orbit(vinberg, np.diag([1.0, -1.0, 1.0]))


def test_dual_witness_reproduces_two_ray_decomposition(vinberg):
    dec = dual_witness(vinberg, (1, 2, 3), [[1.0]], [[1.0]])
    np.testing.assert_allclose(dec.point, np.eye(3))
    assert dec.size == 2
    assert [t.weight for t in dec.terms] == [0.5, 0.5]
    np.testing.assert_allclose(dec.terms[0].generator, [[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 1.0]])
    np.testing.assert_allclose(dec.terms[1].generator, [[1.0, 0.0, -1.0], [0.0, 1.0, -1.0], [-1.0, -1.0, 1.0]])
    assert dec.residual <= 1e-12


def test_dual_witness_fails_on_full_frame(catalog):
    with pytest.raises(WitnessConditionFails) as err:
        dual_witness(catalog["S3"], (1, 2, 3), [[1.0]], [[1.0]])
    assert not err.value.vacuous


def test_dual_witness_on_diamond():
    f = RANK4["K4(9)"]
    dec = dual_witness(f, (1, 2, 3), [[1.0]], [[1.0]])
    assert dec.size == 3
    assert dec.residual <= 1e-12
    assert is_dual_interior(f, dec.point)


def test_primal_witness_examples(vinberg, catalog):
    with pytest.raises(WitnessConditionFails):
        primal_witness(catalog["S3"], (1, 2, 3), [[1.0]], [[1.0]])
    with pytest.raises(WitnessConditionFails) as err:
        primal_witness(vinberg, (1, 2, 3))
    assert err.value.vacuous


def test_primal_witness_on_constructed_frame(catalog):
    f = catalog["primal_witness"]
    A = np.array([[1.0], [0.0]])
    B = np.array([[0.0], [1.0]])
    assert witness_gap(f, "primal", (1, 2, 3), A, B) == pytest.approx(1.0)
    dec = primal_witness(f, (1, 2, 3), A, B)
    assert dec.size == 2
    assert dec.residual <= 1e-12
    assert in_cone(f, dec.point) is Membership.INTERIOR
    # A and B parallel leaves no gap
    with pytest.raises(WitnessConditionFails):
        primal_witness(f, (1, 2, 3), A, A)


def test_witness_input_validation(vinberg):
    with pytest.raises(NotInSubspace):
        dual_witness(vinberg, (1, 2, 3), [[1.0]], [[1.0, 0.0]])
    with pytest.raises(ValueError):
        dual_witness(vinberg, (2, 1, 3), [[1.0]], [[1.0]])
    with pytest.raises(WitnessConditionFails):
        dual_witness(vinberg, (1, 2, 3), [[0.0]], [[1.0]])


def test_find_witness(catalog):
    assert find_witness(catalog["vinberg"], "primal") is None
    cand = find_witness(catalog["vinberg"], "dual")
    assert cand.triple == (1, 2, 3) and cand.gap == pytest.approx(1.0)
    assert find_witness(catalog["S4"], "dual") is None
    assert find_witness(catalog["primal_witness"], "primal").triple == (1, 2, 3)


@pytest.mark.parametrize("name", FRAME_NAMES)
def test_witness_exists_exactly_when_condition_fails(name):
    f = families.named_frames()[name]
    assert (find_witness(f, "primal") is None) == primal_condition(f).holds
    assert (find_witness(f, "dual") is None) == dual_condition(f).holds


def test_bounds_examples(vinberg, catalog):
    assert caratheodory_bounds(catalog["S3"], np.eye(3)).as_tuple() == (3, 3)
    b = caratheodory_bounds(vinberg, np.eye(3), "dual")
    assert b.as_tuple() == (1, 2)
    assert b.decomposition.residual <= 1e-10
    assert caratheodory_bounds(vinberg, np.diag([1.0, 0.0, 0.0])).as_tuple() == (1, 1)
    assert caratheodory_bounds(vinberg, np.zeros((3, 3))).as_tuple() == (0, 0)


def test_bounds_with_dual_factor(vinberg):
    T = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    b = caratheodory_bounds(vinberg, np.diag([1.0, 1.0, 0.0]), "dual", factor=T)
    assert b.as_tuple() == (1, 2)
    with pytest.raises(ValueError):
        caratheodory_bounds(vinberg, np.eye(3), "dual", factor=T)


@pytest.mark.parametrize("name", FRAME_NAMES)
def test_bounds_are_coherent_and_reconstruct(name, rng):
    f = families.named_frames()[name]
    for _ in range(5):
        X = random_interior_point(f, rng)
        b = caratheodory_bounds(f, X)
        assert b.lower <= b.upper
        assert b.decomposition.residual <= 1e-8 * (1 + np.linalg.norm(X))
        expected = f.r - (0 if primal_condition(f).holds else 1)
        assert b.upper == expected
        Y = group_act(f, random_group_element(f, rng), np.eye(f.n), "dual")
        bd = caratheodory_bounds(f, Y, "dual")
        assert bd.decomposition.residual <= 1e-8 * (1 + np.linalg.norm(Y))
        assert bd.upper == f.r - (0 if dual_condition(f).holds else 1)


def test_bounds_on_faces_use_face_witness(catalog, rng):
    # a face of the constructed frame that contains the failing triple
    f = families.direct_sum(catalog["primal_witness"], families.full_frame(1))
    T = random_group_element(f, rng)
    X = T.T @ f.blocks.indicator([1, 2, 3]) @ T
    b = caratheodory_bounds(f, X)
    assert b.as_tuple() == (2, 2)
    assert b.decomposition.residual <= 1e-8 * (1 + np.linalg.norm(X))
    X = T.T @ f.blocks.indicator([1, 2]) @ T
    assert caratheodory_bounds(f, X).upper == 2


def test_witness_frame_pins_interior_caratheodory_number(catalog, rng):
    # lower bound ceil(rank 4 / max block 2) meets the witness upper bound
    b = caratheodory_bounds(catalog["primal_witness"], random_interior_point(catalog["primal_witness"], rng))
    assert b.as_tuple() == (2, 2)


def test_indecomposable_components(vinberg, catalog):
    assert indecomposable_components(vinberg) == [[1, 2, 3]]
    assert indecomposable_components(families.direct_sum(catalog["S2"], catalog["S3"])) == [[1, 2], [3, 4, 5]]
    assert indecomposable_components(families.diagonal_frame(3)) == [[1], [2], [3]]
    assert indecomposable_components(catalog["sum_vinberg_S2"]) == [[1, 3, 5], [2, 4]]


def test_is_selfdual(vinberg, catalog):
    assert is_selfdual(catalog["S4"]).selfdual
    assert not is_selfdual(vinberg)
    assert not is_selfdual(RANK4["K4(8)"])
    assert is_selfdual(catalog["lorentz3"])
    assert is_selfdual(families.direct_sum(catalog["S3"], catalog["lorentz3"]))
    assert is_selfdual(catalog["complex_K4(8)"]).selfdual is False


def test_selfduality_criteria_agree_on_random_frames(rng):
    for _ in range(40):
        f = families.random_homogeneous_frame(rng)
        rep = is_selfdual(f)
        assert rep.selfdual == all(ok for _, ok, _ in rep.components)
