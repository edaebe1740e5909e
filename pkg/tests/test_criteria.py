import itertools
import random

import pytest

from svo.cones import Cone
from svo.criteria import (
    check_l_wmin,
    check_v_wmin,
    compute_B,
    image_diagnostics,
    in_image_plus_cone,
    random_simplex_probes,
    targeted_lattice_probe,
)
from svo.harness import FuzzConfig, generate_instance
from svo.instance import Instance, feasible, feasible_labels, reference_instance
from svo.rational import q, sub

HALF = q("1/2")


def one_label_pair(f0, f1, g0=((-1,),), g1=((-1,),)):
    return Instance(2, 1, Cone.orthant(2), Cone.orthant(1), (1, 1), ("x0", "x1"), {"x0": list(f0), "x1": list(f1)}, {"x0": list(g0), "x1": list(g1)})


@pytest.mark.parametrize("mode", ["discrete", "convexified"])
def test_w1_vector(mode):
    v = check_v_wmin(reference_instance("W1", mode), "a")
    assert v.holds and v.certifying_y0 == (0, 0)


def test_w2_vector_convexified():
    v = check_v_wmin(reference_instance("W2", "convexified"), "a")
    assert not v.holds
    assert v.violation.candidate == (HALF, HALF)
    assert v.violation.point == (-HALF, -HALF)


def test_w2_vector_discrete():
    assert check_v_wmin(reference_instance("W2"), "a").holds


def test_infeasible_label():
    v = check_v_wmin(reference_instance("W1"), "b")
    assert not v.holds and v.violation.reason == "x0 not in M"


def test_epsilon_rescues_w2():
    inst = reference_instance("W2", "convexified")
    # the best feasible image point is (-1/2, -1/2)
    assert not check_v_wmin(inst, "a", q("1/4")).holds
    assert check_v_wmin(inst, "a", HALF).holds


def test_lattice_singleton():
    inst = Instance(1, 1, Cone.orthant(1), Cone.orthant(1), (1,), ("a",), {"a": [(0,)]}, {"a": [(0,)]})
    assert check_l_wmin(inst, "a").holds


def test_lattice_w1():
    assert check_l_wmin(reference_instance("W1"), "a").holds
    assert check_l_wmin(reference_instance("W1", "convexified"), "a").holds


def test_lattice_refutation():
    inst = one_label_pair([(1, 1)], [(0, 0)])
    v = check_l_wmin(inst, "x0")
    assert not v.holds
    assert v.violation.candidate == "x1" and v.violation.point == (0, 0)


def test_lattice_convexified_targeted_probe_refutes_w2():
    inst = reference_instance("W2", "convexified")
    v = check_l_wmin(inst, "a", random_probes=0)
    assert not v.holds and v.exact
    lam, y = targeted_lattice_probe(inst, "a", 0)
    assert feasible(inst, lam).holds


def test_lattice_convexified_without_refutation_is_inexact():
    v = check_l_wmin(reference_instance("W1", "convexified"), "a", probes=[(HALF, HALF)])
    assert v.holds and not v.exact and v.probes_used >= 1


def test_random_probes_on_simplex():
    inst = reference_instance("W2", "convexified")
    for p in random_simplex_probes(inst, 20, seed=4):
        assert sum(p) == 1 and all(w >= 0 for w in p)
        assert sum(1 for w in p if w) <= 2


def test_compute_B():
    inst = one_label_pair([(0, 0), (1, -1)], [(5, 5)])
    B = compute_B(inst, "x0")
    assert B.offsets == (0, -1)
    assert B.contains((0, -1)) and not B.contains((0, 0))
    B1 = compute_B(one_label_pair([(0, 0)], [(5, 5)]), "x0")
    assert B1.offsets == (0, 0)


def test_diagnostics():
    d = image_diagnostics(one_label_pair([(0, 0), (1, -1)], [(5, 5)]), "x0")
    assert d.k_bound.t == 1
    assert set(d.minimal_elements) == {(0, 0), (1, -1)}
    assert not d.has_dominating_point
    assert image_diagnostics(one_label_pair([(0, 0), (1, 1)], [(5, 5)]), "x0").dominating_points == ((0, 0),)
    d0 = image_diagnostics(one_label_pair([(0, 0)], [(5, 5)]), "x0")
    assert d0.k_bound.t == 0 and d0.minimal_elements == ((0, 0),) and d0.dominating_points == ((0, 0),)


def test_image_plus_cone_weights():
    inst = reference_instance("W2", "convexified")
    assert in_image_plus_cone(inst, (HALF, HALF), (0, 0))
    assert not in_image_plus_cone(inst, (HALF, HALF), (-HALF, 0))
    assert in_image_plus_cone(inst, (HALF, HALF), (-HALF, 0), interior=False)


def _sampled_weights(n, rng, count):
    for _ in range(count):
        raw = [rng.randint(0, 6) for _ in range(n)]
        if sum(raw):
            yield tuple(q(r) / sum(raw) for r in raw)


@pytest.mark.parametrize("index", range(12))
def test_vector_verdicts_against_sampling(index):
    """Violations are re-verified; a positive verdict survives random competitors."""
    inst = generate_instance(FuzzConfig(seed=11, plant_slater=True), index, "convexified")
    rng = random.Random(index)
    for x0 in feasible_labels(inst):
        v = check_v_wmin(inst, x0)
        if not v.holds:
            for viol in v.violations:
                assert feasible(inst, viol.candidate).holds
                assert in_image_plus_cone(inst, viol.candidate, viol.point, interior=False)
                assert inst.K.contains(sub(viol.y0, viol.point), interior=True)
            continue
        y0 = v.certifying_y0
        for lam in _sampled_weights(len(inst.labels), rng, 40):
            if not feasible(inst, lam).holds:
                continue
            parts = [[tuple(w * c for c in p) for p in inst.f_images[x]] for x, w in zip(inst.labels, lam) if w]
            for combo in itertools.product(*parts):
                y = tuple(sum(c) for c in zip(*combo))
                assert not inst.K.contains(sub(y0, y), interior=True)
