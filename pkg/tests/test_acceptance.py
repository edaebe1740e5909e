"""Acceptance criteria 1-8, exact (zero tolerance).

Each criterion records one PASS/FAIL line.  Under pytest the lines are
printed in the terminal summary; ``python tests/test_acceptance.py`` runs
them directly.
"""

from __future__ import annotations

import os
import random
import sys
import tempfile
import time
from collections import Counter
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from oracles import brute_force_lp, random_lp  # noqa: E402

from svo.cones import Cone, PointSet, interior_of_hull_plus_cone, set_plus_cone_membership  # noqa: E402
from svo.harness import (  # noqa: E402
    ASSERTED_PASS,
    REPORTED_VIOLATED,
    FuzzConfig,
    emit_report,
    fuzz_instances,
    replay,
    verify_suite,
)
from svo.criteria import check_v_wmin  # noqa: E402
from svo.instance import reference_instance  # noqa: E402
from svo.lagrange import find_multiplier, slackness_report  # noqa: E402
from svo.lp import check_dual, check_primal, check_ray, solve_lp  # noqa: E402
from svo.rational import q  # noqa: E402

pytestmark = pytest.mark.acceptance

LP_COUNT = 1000
CORPUS = FuzzConfig(seed=2024, count=500, max_m=3, max_p=3, max_labels=5, max_points=3, plant_slater=True)
IDENTITY_PAIRS = 10_000

LINES: list[str] = []


def record(number: int, ok: bool, text: str, started: float) -> None:
    line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {text} [{time.perf_counter() - started:.1f}s]"
    LINES.append(line)
    print(line)


# ---------------------------------------------------------------------------
# shared fuzz corpus


class _Corpus:
    def __init__(self):
        self.started = time.perf_counter()
        self.dir = tempfile.mkdtemp(prefix="svo-acceptance-")
        self.bundles = list(fuzz_instances(CORPUS, self.dir))
        self.elapsed = time.perf_counter() - self.started
        self.results = [r for b in self.bundles for r in b.results]

    def of(self, mode, pid):
        return [r for r in self.results if r.mode == mode and r.property_id == pid]


_corpus = None


def corpus() -> _Corpus:
    global _corpus
    if _corpus is None:
        _corpus = _Corpus()
    return _corpus


# ---------------------------------------------------------------------------
# criteria


def criterion_1() -> bool:
    t0 = time.perf_counter()
    mismatches, gaps = 0, 0
    statuses = Counter()
    for i in range(LP_COUNT):
        problem, (c, rows, sense) = random_lp(random.Random(f"acceptance-lp:{i}"))
        out = solve_lp(problem)
        status, value = brute_force_lp(c, rows, sense)
        statuses[status] += 1
        if out.status.value != status:
            mismatches += 1
        elif status == "Optimal":
            if Fraction(out.value.numerator, out.value.denominator) != value or not check_primal(problem, out.primal_witness):
                mismatches += 1
            if not check_dual(problem, out):
                gaps += 1
        elif status == "Unbounded" and not check_ray(problem, out.ray):
            mismatches += 1
    ok = mismatches == 0 and gaps == 0
    record(1, ok, f"{LP_COUNT} LPs vs basic-point enumeration {dict(statuses)}, {mismatches} mismatches, {gaps} nonzero duality gaps", t0)
    return ok


def criterion_2() -> bool:
    t0 = time.perf_counter()
    c = corpus()
    nec = c.of("convexified", "multiplier_necessary")
    suff = c.of("convexified", "multiplier_sufficient")
    slack = c.of("convexified", "slackness")
    bridge = c.of("convexified", "lagrangian_bridge")
    agree = all(r.status == ASSERTED_PASS for r in nec + suff)
    certs_ok = (
        len(slack) == len(suff) == len(bridge)
        and all(r.status == ASSERTED_PASS for r in slack + bridge)
    )
    ok = agree and certs_ok and len(nec) > 0
    record(
        2, ok,
        f"convexified: {len(nec)} (x0, eps) pairs, v-wmin <=> multiplier on all; "
        f"{len(suff)} certificates, slackness and LP_T checks pass: {certs_ok} "
        f"(corpus of {CORPUS.count} instances verified in {c.elapsed:.1f}s)",
        t0,
    )
    return ok


def criterion_3() -> bool:
    t0 = time.perf_counter()
    suff = corpus().of("discrete", "multiplier_sufficient")
    ok = all(r.status == ASSERTED_PASS for r in suff)
    record(3, ok, f"discrete: {len(suff)} certificates, each implies v-wmin", t0)
    return ok


def criterion_4() -> bool:
    t0 = time.perf_counter()
    conv = corpus().of("convexified", "slater_iff_cq")
    disc = corpus().of("discrete", "slater_iff_cq")
    ok = len(conv) == len(disc) == CORPUS.count and all(r.status == ASSERTED_PASS for r in conv + disc)
    record(4, ok, f"Slater <=> CQ on {len(conv)} convexified, Slater => CQ on {len(disc)} discrete instances", t0)
    return ok


def criterion_5() -> bool:
    t0 = time.perf_counter()
    c = corpus()
    vl = [r for r in c.results if r.property_id == "vector_implies_lattice"]
    lv = c.of("discrete", "lattice_implies_vector")
    lv_checked = [r for r in lv if r.status != "skipped"]
    refuted = sum(r.status != ASSERTED_PASS for r in vl)
    ok = refuted == 0 and all(r.status == ASSERTED_PASS for r in lv_checked) and lv_checked
    record(
        5, bool(ok),
        f"{refuted} v-wmin-but-l-refuted events in {len(vl)} checks; "
        f"l <=> v on {len(lv_checked)} dominating-point cases",
        t0,
    )
    return bool(ok)


PYRAMID = Cone(
    3,
    normals=[(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)],
    generators=[(1, 1, 1), (-1, 1, 1), (1, -1, 1), (-1, -1, 1)],
    interior_witness=(0, 0, 1),
)


def _grid(rng, lo, hi, den=4):
    d = rng.randint(1, den)
    return q(rng.randint(lo * d, hi * d)) / d


def _identity_pair(rng):
    d = rng.randint(1, 3)
    kind = rng.random()
    if d == 3 and kind < 0.3:
        K = PYRAMID
    elif kind < 0.6:
        K = Cone.orthant(d)
    else:
        while True:
            gens = [tuple(q(1) if i == j else q(rng.choice((-1, 0, 1))) for j in range(d)) for i in range(d)]
            try:
                K = Cone.from_generators(gens)
                break
            except ValueError:
                continue
    pts = [tuple(_grid(rng, -2, 2) for _ in range(d)) for _ in range(rng.randint(1, 4))]
    # a random hull point plus a cone point with some coefficients zeroed, so boundary queries are common
    raw = [rng.randint(0, 3) for _ in pts]
    if not any(raw):
        raw[0] = 1
    lam = [q(r) / sum(raw) for r in raw]
    base = [sum(l * p[j] for l, p in zip(lam, pts)) for j in range(d)]
    mu = [rng.choice((0, 0, q(1), _grid(rng, 0, 2))) for _ in K.generators]
    query = [base[j] + sum(m * g[j] for m, g in zip(mu, K.generators)) for j in range(d)]
    if rng.random() < 0.3:
        query = [v + _grid(rng, -1, 1) for v in query]
    return tuple(pts), tuple(query), K


def criterion_6() -> bool:
    t0 = time.perf_counter()
    rng = random.Random("acceptance-identity")
    tally = Counter()
    disagreements = 0
    for _ in range(IDENTITY_PAIRS):
        pts, query, K = _identity_pair(rng)
        a = set_plus_cone_membership(query, PointSet(pts, "hull"), K, interior=True)
        b = interior_of_hull_plus_cone(query, pts, K)
        weak = set_plus_cone_membership(query, PointSet(pts, "hull"), K)
        tally["interior" if a else "boundary" if weak else "outside"] += 1
        disagreements += a != b
    ok = disagreements == 0
    record(6, ok, f"{IDENTITY_PAIRS} (A, query) pairs {dict(tally)}, {disagreements} disagreements", t0)
    return ok


def criterion_7() -> bool:
    t0 = time.perf_counter()
    half = q("1/2")
    checks = []
    for mode in ("discrete", "convexified"):
        cert = find_multiplier(reference_instance("W1", mode), "a", 0)
        checks.append(cert is not None and cert.y_star == (half, half) and cert.z_star == (0,) and cert.inf_Q_value == 0)
    w2c = reference_instance("W2", "convexified")
    checks.append(not check_v_wmin(w2c, "a", 0).holds and find_multiplier(w2c, "a", 0) is None)
    res = verify_suite(w2c, [0])
    checks.append(
        any(r.property_id == "bare_reverse" and r.status == REPORTED_VIOLATED and r.witness["z_star"] == ["1"] for r in res)
    )
    cert = find_multiplier(w2c, "a", 1)
    rep = slackness_report(cert, w2c, "a") if cert else None
    checks.append(cert is not None and cert.z_star == (0,) and rep.min_slack == 0 and rep.min_slack >= -1)
    ok = all(checks)
    record(7, ok, f"worked instances: {sum(checks)}/{len(checks)} expected values reproduced", t0)
    return ok


def criterion_8() -> bool:
    t0 = time.perf_counter()
    c = corpus()
    replayed = mismatched = 0
    for b in c.bundles:
        for path in b.archived:
            mode = path.rsplit("-", 1)[1][: -len(".json")]
            replayed += 1
            mismatched += replay(path, CORPUS.epsilons) != [r for r in b.results if r.mode == mode]
    first = emit_report(c.results, "machine")
    rerun = [r for b in fuzz_instances(CORPUS) for r in b.results]
    identical = emit_report(rerun, "machine") == first
    ok = mismatched == 0 and identical and replayed > 0
    record(8, ok, f"{replayed} archived counterexamples replayed ({mismatched} mismatches); rerun byte-identical: {identical}", t0)
    return ok


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    outcomes = [crit() for crit in CRITERIA]
    sys.exit(0 if all(outcomes) else 1)
