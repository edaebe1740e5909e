"""Invariants over hypothesis-generated instances."""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from svo.cones import Cone
from svo.criteria import check_v_wmin
from svo.harness import ASSERTED_FAIL, verify_suite
from svo.instance import Instance, build_Q, feasible_labels
from svo.lagrange import find_multiplier
from svo.rational import dot, fmt, q

coord = st.fractions(min_value=-2, max_value=2, max_denominator=4)


@st.composite
def instances(draw, mode=None):
    m = draw(st.integers(1, 2))
    p = draw(st.integers(1, 2))
    n = draw(st.integers(1, 3))
    labels = tuple("abc"[:n])
    f = {x: draw(st.lists(st.tuples(*[coord] * m), min_size=1, max_size=2)) for x in labels}
    g = {x: draw(st.lists(st.tuples(*[coord] * p), min_size=1, max_size=2)) for x in labels}
    K = draw(st.sampled_from([Cone.orthant(m)] + ([Cone.from_generators([(1, 0), (1, 1)])] if m == 2 else [])))
    e = tuple(sum(gen[j] for gen in K.generators) for j in range(m))
    mode = mode or draw(st.sampled_from(["discrete", "convexified"]))
    return Instance(m, p, K, Cone.orthant(p), e, labels, f, g, mode)


slow = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@slow
@given(instances())
def test_suite_never_fails(inst):
    res = verify_suite(inst, [0, Fraction(1, 2)], geometry_queries=2)
    bad = [r for r in res if r.status == ASSERTED_FAIL]
    assert not bad, bad


@slow
@given(instances(), st.sampled_from([0, Fraction(1, 4), 1]), st.sampled_from([Fraction(1, 4), 1, 2]))
def test_epsilon_monotone(inst, eps, bump):
    for x0 in feasible_labels(inst):
        if check_v_wmin(inst, x0, eps).holds:
            assert check_v_wmin(inst, x0, q(eps) + bump).holds


@slow
@given(instances("convexified"))
def test_convexified_verdict_implies_discrete(inst):
    disc = inst.with_mode("discrete")
    for x0 in feasible_labels(disc):
        if check_v_wmin(inst, x0).holds:
            assert check_v_wmin(disc, x0).holds


@slow
@given(instances())
def test_certificate_inequality_rechecked(inst):
    Q = build_Q(inst)
    for x0 in feasible_labels(inst):
        cert = find_multiplier(inst, x0)
        if cert is None:
            continue
        assert all(dot(cert.y_star, g) >= 0 for g in inst.K.generators)
        assert all(dot(cert.z_star, c) >= 0 for c in inst.C.generators)
        assert any(cert.y_star) or any(cert.z_star)
        inf = Q.inf_scalarization_lp(cert.y_star, cert.z_star)
        assert inf == cert.inf_Q_value
        assert dot(cert.y_star, cert.y0) <= inf


@slow
@given(st.fractions(max_denominator=50))
def test_canonical_rationals_round_trip(x):
    assert q(fmt(q(x))) == q(x)
    assume(x.denominator > 1)
    assert "/" in fmt(q(x))


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "one", "1.5"])
def test_q_rejects(bad):
    with pytest.raises((TypeError, ValueError, ZeroDivisionError)):
        q(bad)
