import random

import pytest
from hypothesis import given, settings, strategies as st

from svo.cones import (
    Cone,
    DimensionMismatch,
    EmptyInterior,
    GeneratorOutsideHCone,
    PointSet,
    RepresentationMismatch,
    cone_membership,
    dual_generators,
    hull_plus_cone_weights,
    interior_of_hull_plus_cone,
    min_k_bound,
    set_plus_cone_membership,
    validate_cone,
)
from svo.rational import q

# cone over the square [-1,1]^2 at height 1, not simplicial
PYRAMID = Cone(
    3,
    normals=[(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)],
    generators=[(1, 1, 1), (-1, 1, 1), (1, -1, 1), (-1, -1, 1)],
    interior_witness=(0, 0, 1),
)


def test_orthant_is_self_dual():
    K = Cone.orthant(2)
    rep = validate_cone(K)
    assert rep.simplicial and rep.reverse_inclusion == "exact"
    assert dual_generators(K) == ((1, 0), (0, 1))


def test_generated_cone_normals():
    K = Cone.from_generators([(1, 0), (1, 1)])
    assert set(K.normals) == {(0, 1), (1, -1)}
    assert set(dual_generators(K)) == {(0, 1), (1, -1)}
    validate_cone(K)
    for g in K.generators:
        assert K.contains(g)


def test_generator_outside():
    bad = Cone(2, [(1, 0), (0, 1)], [(-1, 0), (0, 1)], (1, 1))
    with pytest.raises(GeneratorOutsideHCone):
        validate_cone(bad)


def test_normals_too_loose():
    # normals cut out the orthant, the generators span a thinner cone
    bad = Cone(2, [(1, 0), (0, 1)], [(1, 0), (1, 1)], (2, 1))
    with pytest.raises(RepresentationMismatch):
        validate_cone(bad)


def test_empty_interior():
    with pytest.raises(EmptyInterior):
        validate_cone(Cone(2, [(1, 0), (-1, 0)], [(0, 1)], (0, 1)))
    with pytest.raises(EmptyInterior):
        Cone.from_generators([(1, 0), (2, 0)])


def test_bad_witness():
    with pytest.raises(EmptyInterior):
        validate_cone(Cone(2, [(1, 0), (0, 1)], [(1, 0), (0, 1)], (0, 1)))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        validate_cone(Cone(2, [(1, 0, 0), (0, 1)], [(1, 0), (0, 1)], (1, 1)))
    with pytest.raises(DimensionMismatch):
        cone_membership((1, 2, 3), Cone.orthant(2))


def test_pyramid_sampled_validation():
    rep = validate_cone(PYRAMID, samples=12)
    assert not rep.simplicial
    assert rep.reverse_inclusion == "sampled"
    assert rep.samples >= 1


def test_pyramid_missing_generator():
    thin = Cone(3, PYRAMID.normals, PYRAMID.generators[:3], (0, 0, 1))
    with pytest.raises(RepresentationMismatch):
        validate_cone(thin, samples=40)


def test_membership_examples():
    K = Cone.orthant(2)
    assert cone_membership((2, 3), K, interior=True)
    assert not cone_membership((0, 1), K, interior=True)
    assert cone_membership((0, 1), K)
    assert not cone_membership((-1, 0), K)


def test_set_plus_cone_examples():
    K = Cone.orthant(2)
    seg = PointSet([(0, 0), (2, 0)], "hull")
    assert set_plus_cone_membership((1, 1), seg, K)
    assert not set_plus_cone_membership((-1, 0), PointSet([(0, 0)]), K, interior=True)
    assert set_plus_cone_membership((1, 2), seg, K, interior=True)
    # (1, 0) is on the boundary of the hull plus the cone
    assert set_plus_cone_membership((1, 0), seg, K)
    assert not set_plus_cone_membership((1, 0), seg, K, interior=True)


def test_union_vs_hull():
    K = Cone.orthant(2)
    pts = [(0, 2), (2, 0)]
    assert not set_plus_cone_membership((1, 1), PointSet(pts, "union"), K)
    assert set_plus_cone_membership((1, 1), PointSet(pts, "hull"), K)


def test_weights_reproduce_query():
    K = Cone.orthant(2)
    pts = [(0, 2), (2, 0)]
    lam = hull_plus_cone_weights((3, 3), pts, K, interior=True)
    assert sum(lam) == 1
    base = tuple(sum(l * p[i] for l, p in zip(lam, pts)) for i in range(2))
    assert cone_membership((3 - base[0], 3 - base[1]), K, interior=True)


def test_interior_oracle_examples():
    K = Cone.orthant(2)
    assert interior_of_hull_plus_cone((1, 2), [(0, 0), (2, 0)], K)
    assert not interior_of_hull_plus_cone((1, 0), [(0, 0), (2, 0)], K)
    assert not interior_of_hull_plus_cone((-1, 5), [(0, 0)], K)
    assert interior_of_hull_plus_cone((0, 0, 2), [(0, 0, 0)], PYRAMID)
    assert not interior_of_hull_plus_cone((1, 0, 1), [(0, 0, 0)], PYRAMID)


def test_min_k_bound_examples():
    K = Cone.orthant(2)
    assert min_k_bound([(-2, 3)], (1, 1), K).t == 2
    assert min_k_bound([(0, 0)], (1, 1), K).t == 0
    kb = min_k_bound([(1, -1), (0, 0)], (1, 1), K)
    assert kb.t == 1 and kb.point_index == 0 and kb.normal_index == 1


def test_min_k_bound_needs_interior_direction():
    with pytest.raises(ValueError):
        min_k_bound([(0, 0)], (0, 1), Cone.orthant(2))


coords = st.fractions(min_value=-3, max_value=3, max_denominator=4)
point2 = st.tuples(coords, coords)


@settings(max_examples=80, deadline=None)
@given(st.lists(point2, min_size=1, max_size=4), point2, st.sampled_from([0, 1, 2]))
def test_interior_identity_property(points, query, which):
    K = [Cone.orthant(2), Cone.from_generators([(1, 0), (1, 1)]), Cone.from_generators([(2, -1), (-1, 2)])][which]
    lhs = set_plus_cone_membership(query, PointSet(points, "hull"), K, interior=True)
    assert lhs == interior_of_hull_plus_cone(query, points, K)


@settings(max_examples=60, deadline=None)
@given(st.lists(point2, min_size=1, max_size=4), point2)
def test_interior_implies_weak(points, query):
    K = Cone.orthant(2)
    A = PointSet(points, "hull")
    if set_plus_cone_membership(query, A, K, interior=True):
        assert set_plus_cone_membership(query, A, K)


def test_k_bound_is_tight():
    rng = random.Random(5)
    K = Cone.from_generators([(1, 0), (1, 1)])
    e = (2, 1)
    for _ in range(30):
        pts = [(q(rng.randint(-6, 6)) / 3, q(rng.randint(-6, 6)) / 3) for _ in range(3)]
        t = min_k_bound(pts, e, K).t
        shifted = [tuple(p[i] + t * e[i] for i in range(2)) for p in pts]
        assert all(cone_membership(s, K) for s in shifted)
        if t > 0:
            shrunk = [tuple(p[i] + t * q("99/100") * e[i] for i in range(2)) for p in pts]
            assert not all(cone_membership(s, K) for s in shrunk)
