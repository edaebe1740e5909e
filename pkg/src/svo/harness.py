"""Executable verification of the multiplier rules on concrete and fuzzed instances.

Each check produces a :class:`PropertyResult`.  ``asserted-*`` statuses
belong to properties that must hold; ``reported-*`` statuses belong to
claims that are measured and recorded but never enforced.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .cones import Cone, PointSet, interior_of_hull_plus_cone, set_plus_cone_membership
from .criteria import check_l_wmin, check_v_wmin, image_diagnostics
from .instance import (
    Instance,
    RankOneOperator,
    build_Q,
    cq_check,
    dumps_instance,
    feasible,
    feasible_labels,
    lagrangian_points,
    slater_check,
)
from .lagrange import (
    PHASES,
    characterize_LPT,
    check_wmin_LPT,
    find_multiplier,
    l_wmin_separation,
    slackness_report,
)
from .model import Model
from .rational import ZERO, Scalar, dot, fmt, q, scale, vec

ASSERTED_PASS = "asserted-pass"
ASSERTED_FAIL = "asserted-fail"
REPORTED_HOLDS = "reported-holds"
REPORTED_VIOLATED = "reported-violated"
SKIPPED = "skipped"

STATUSES = (ASSERTED_PASS, ASSERTED_FAIL, REPORTED_HOLDS, REPORTED_VIOLATED, SKIPPED)

DEFAULT_EPSILONS = (q(0), q("1/4"), q(1))

PROPERTIES = {
    "slater_iff_cq": "Slater condition <=> CQ (convexified); Slater => CQ (discrete)",
    "vector_implies_lattice": "eps-v-wmin => eps-l-wmin is never refuted",
    "lattice_implies_vector": "with a dominating point, eps-l-wmin <=> eps-v-wmin (discrete)",
    "multiplier_sufficient": "certificate with y* != 0 => eps-v-wmin",
    "multiplier_necessary": "eps-v-wmin => certificate exists (asserted convexified)",
    "multiplier_nonzero_under_slater": "Slater and eps-v-wmin => certificate with y*(e) = 1",
    "lagrangian_bridge": "certificate => x0 solves (LP_T) for T = z*(.)e",
    "slackness": "certificate => z*(z) >= -eps y*(e) on g(x0)",
    "zero_slack_equality": "eps = 0: equality pair attains inf_Q and z* vanishes on g(x0) ∩ -C",
    "strong_zero_slack": "eps = 0: z*(z) = 0 on all of g(x0) (reported)",
    "refined_reverse": "LP_T witness with z*(z0) >= 0 => eps-v-wmin",
    "bare_reverse": "x0 solves (LP_T) for some z* => eps-v-wmin (reported)",
    "lattice_separation": "l-wmin on probes => B(x0)-separation exists (convexified)",
    "interior_identity": "conv(A) + int K agrees with int(conv(A) + K)",
    "scalarized_convexity": "scalarized image set membership agrees with Lagrangian hull + K",
    "epsilon_monotonicity": "eps-v-wmin => eps'-v-wmin for eps' >= eps",
    "mode_coherence": "convexified v-wmin => discrete v-wmin at a discrete-feasible label",
}


def canon(obj):
    """Recursively render rationals as canonical strings and tuples as lists."""
    if isinstance(obj, (int, Scalar)) and not isinstance(obj, bool):
        return fmt(obj)
    if isinstance(obj, (tuple, list)):
        return [canon(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): canon(v) for k, v in obj.items()}
    return obj


@dataclass(frozen=True)
class PropertyResult:
    property_id: str
    status: str
    instance_ref: str
    mode: str
    x0: str | None = None
    epsilon: str | None = None
    witness: dict | None = None

    def to_record(self) -> dict:
        return {
            "property_id": self.property_id,
            "status": self.status,
            "instance_ref": self.instance_ref,
            "mode": self.mode,
            "x0": self.x0,
            "epsilon": self.epsilon,
            "witness": self.witness,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PropertyResult":
        return cls(
            rec["property_id"], rec["status"], rec["instance_ref"], rec["mode"],
            rec.get("x0"), rec.get("epsilon"), rec.get("witness"),
        )

    @property
    def failed(self) -> bool:
        return self.status == ASSERTED_FAIL


class _Recorder:
    def __init__(self, inst: Instance, ref: str):
        self.inst = inst
        self.ref = ref
        self.results: list[PropertyResult] = []

    def _add(self, pid, status, x0, eps, witness):
        self.results.append(
            PropertyResult(
                pid, status, self.ref, self.inst.mode, x0,
                None if eps is None else fmt(eps),
                None if witness is None else canon(witness),
            )
        )

    def check(self, pid, ok: bool, x0=None, eps=None, witness=None, keep=False):
        self._add(pid, ASSERTED_PASS if ok else ASSERTED_FAIL, x0, eps, witness if keep or not ok else None)

    def report(self, pid, holds: bool, x0=None, eps=None, witness=None):
        self._add(pid, REPORTED_HOLDS if holds else REPORTED_VIOLATED, x0, eps, None if holds else witness)

    def skip(self, pid, x0=None, eps=None, why=""):
        self._add(pid, SKIPPED, x0, eps, {"reason": why} if why else None)


def instance_digest(inst: Instance) -> int:
    return int.from_bytes(hashlib.sha256(dumps_instance(inst).encode()).digest()[:8], "big")


def _rand_rational(rng: random.Random, lo: int, hi: int, max_den: int) -> Scalar:
    den = rng.randint(1, max_den)
    return q(rng.randint(lo * den, hi * den)) / den


def _z_star_candidates(inst: Instance, extra=()) -> list[tuple]:
    cands = list(extra) + list(inst.C.normals)
    cands.append(tuple(sum((b[j] for b in inst.C.normals), ZERO) for j in range(inst.z_dim)))
    out = []
    for z in cands:
        z = vec(z)
        if any(z) and z not in out:
            out.append(z)
    return out


def _verdict_witness(verdict) -> dict | None:
    v = verdict.violation
    if v is None:
        return None
    return {"y0": v.y0, "candidate": v.candidate, "point": v.point, "reason": v.reason}


# ---------------------------------------------------------------------------
# geometric oracles


def interior_queries(inst: Instance, count: int, rng: random.Random) -> list[tuple[tuple, tuple]]:
    """Seeded ``(points, query)`` pairs in ``Y`` built around the instance's f images."""
    pools = [inst.f_images[x] for x in inst.labels if inst.f_images[x]]
    out = []
    for _ in range(count):
        pts = list(rng.choice(pools))
        base = rng.choice(pts)
        query = tuple(c + _rand_rational(rng, -1, 1, 4) for c in base)
        out.append((tuple(pts), query))
    return out


def interior_identity_agrees(points, query, K: Cone) -> bool:
    lhs = set_plus_cone_membership(query, PointSet(points, "hull"), K, interior=True)
    rhs = interior_of_hull_plus_cone(query, points, K)
    return lhs == rhs


def scalarized_membership_Q(inst: Instance, z_star, w) -> bool:
    """``w ∈ {y + z*(z) e | (y, z) ∈ QSet}`` as an LP over the image-set generators."""
    Q = build_Q(inst)
    m = Model()
    lam = m.vars(len(Q.vertices))
    rho = m.vars(len(Q.rays))
    m.add({i: 1 for i in lam}, "=", 1)
    images = []
    for v in Q.vertices:
        y, z = Q.split(v)
        images.append(tuple(a + dot(z_star, z) * b for a, b in zip(y, inst.e)))
    ray_images = []
    for r in Q.rays:
        y, z = Q.split(r)
        ray_images.append(tuple(a + dot(z_star, z) * b for a, b in zip(y, inst.e)))
    for j in range(inst.y_dim):
        terms = {i: p[j] for i, p in zip(lam, images)}
        terms.update({i: p[j] for i, p in zip(rho, ray_images)})
        m.add(terms, "=", w[j])
    return m.solve().optimal


def scalarized_membership_L(inst: Instance, z_star, w) -> bool:
    """``w ∈ conv(∪ L(x, T)) + K`` through the normals of ``K``."""
    T = RankOneOperator(z_star, inst.e)
    pts = [p for x in inst.labels if inst.f_images[x] and inst.g_images[x] for p in lagrangian_points(inst, x, T)]
    return set_plus_cone_membership(w, PointSet(tuple(pts), "hull"), inst.K)


# ---------------------------------------------------------------------------
# the suite


def verify_suite(
    inst: Instance,
    epsilons: Sequence = DEFAULT_EPSILONS,
    instance_ref: str = "",
    geometry_queries: int = 3,
) -> list[PropertyResult]:
    eps_list = sorted({q(e) for e in epsilons})
    ref = instance_ref or inst.name or "instance"
    R = _Recorder(inst, ref)
    conv = inst.convexified
    rng = random.Random(instance_digest(inst))

    slater = slater_check(inst)
    cq = cq_check(inst)
    sc_witness = {"slater": slater.holds, "slater_witness": slater.witness, "cq_violator": cq.violating_z_star}
    if conv:
        R.check("slater_iff_cq", slater.holds == cq.holds, witness=sc_witness)
    else:
        R.check("slater_iff_cq", (not slater.holds) or cq.holds, witness=sc_witness)

    for points, query in interior_queries(inst, geometry_queries, rng):
        R.check(
            "interior_identity",
            interior_identity_agrees(points, query, inst.K),
            witness={"A": points, "query": query},
        )

    Q = build_Q(inst)
    z_pool = _z_star_candidates(inst, [(ZERO,) * inst.z_dim])
    for _ in range(geometry_queries if Q.vertices else 0):
        zs = rng.choice(z_pool)
        v = rng.choice(Q.vertices)
        y, z = Q.split(v)
        w = tuple(a + dot(zs, z) * b + _rand_rational(rng, -1, 1, 4) for a, b in zip(y, inst.e))
        ok = scalarized_membership_Q(inst, zs, w) == scalarized_membership_L(inst, zs, w)
        R.check("scalarized_convexity", ok, witness={"z_star": zs, "w": w})

    discrete_twin = inst.with_mode("discrete") if conv else None

    for x0 in feasible_labels(inst):
        verdicts = {}
        diag = image_diagnostics(inst, x0)
        for eps in eps_list:
            v = check_v_wmin(inst, x0, eps)
            verdicts[eps] = v
            cert = find_multiplier(inst, x0, eps)

            # vector => lattice
            if v.holds:
                lat = check_l_wmin(inst, x0, eps, seed=instance_digest(inst) % 1000)
                R.check("vector_implies_lattice", lat.holds, x0, eps, _verdict_witness(lat))
            else:
                lat = None
                R.check("vector_implies_lattice", True, x0, eps)

            if conv:
                R.skip("lattice_implies_vector", x0, eps, "convexified lattice verdict is probe-based")
            elif diag.has_dominating_point:
                lat = lat or check_l_wmin(inst, x0, eps)
                R.check(
                    "lattice_implies_vector", lat.holds == v.holds, x0, eps,
                    {"v": v.holds, "l": lat.holds, "dominating": diag.dominating_points},
                )
            else:
                R.skip("lattice_implies_vector", x0, eps, "no dominating point")

            cert_w = None
            if cert is not None:
                cert_w = {
                    "y0": cert.y0, "y_star": cert.y_star, "z_star": cert.z_star,
                    "normalization": cert.normalization, "inf_Q": cert.inf_Q_value,
                }
            # multiplier rule, direction by direction
            if cert is not None:
                if cert.y_star_nonzero:
                    R.check("multiplier_sufficient", v.holds, x0, eps, cert_w, keep=True)
                else:
                    R.report("multiplier_sufficient", v.holds, x0, eps, cert_w)
            if conv:
                R.check("multiplier_necessary", (not v.holds) or cert is not None, x0, eps, _verdict_witness(v))
            else:
                R.report("multiplier_necessary", (not v.holds) or cert is not None, x0, eps, {"y0": v.certifying_y0})
            if conv and slater.holds and v.holds:
                R.check(
                    "multiplier_nonzero_under_slater",
                    cert is not None and cert.normalization == PHASES[0],
                    x0, eps, cert_w,
                )

            if cert is not None:
                ye = dot(cert.y_star, inst.e)
                rep = slackness_report(cert, inst, x0)
                R.check("slackness", rep.min_slack >= -eps * ye, x0, eps, {**cert_w, "min_slack": rep.min_slack})
                if ye:
                    T = RankOneOperator(scale(1 / ye, cert.z_star), inst.e)
                    chi = characterize_LPT(inst, x0, T, eps)
                    lpt = check_wmin_LPT(inst, x0, T, eps)
                    R.check(
                        "lagrangian_bridge", chi is not None and lpt.holds, x0, eps,
                        {**cert_w, "characterized": chi is not None, "lpt": lpt.holds},
                    )
                if eps == 0:
                    zbar = feasible(inst, x0).witness
                    attained = dot(cert.y_star, cert.y0) == cert.inf_Q_value
                    ok = attained and dot(cert.z_star, zbar) == 0 and rep.zero_on_feasible_part
                    R.check("zero_slack_equality", ok, x0, eps, {**cert_w, "z_bar": zbar})
                    R.report("strong_zero_slack", rep.zero_everywhere, x0, eps, {**cert_w, "slack": [s for _, s, _ in rep.per_z]})

            extra = [cert.z_star] if cert is not None and any(cert.z_star) else []
            for zs in _z_star_candidates(inst, extra):
                T = RankOneOperator(zs, inst.e)
                refined = characterize_LPT(inst, x0, T, eps, require_nonneg_slack=True)
                if refined is not None:
                    R.check(
                        "refined_reverse", v.holds, x0, eps,
                        {"z_star": zs, "y0": refined.y0, "z0": refined.z0, "y_star": refined.y_star},
                    )
                if not v.holds:
                    lpt = check_wmin_LPT(inst, x0, T, eps)
                    R.report(
                        "bare_reverse", not lpt.holds, x0, eps,
                        {"z_star": zs, "lagrangian_point": lpt.certifying_y0},
                    )

            if eps == 0:
                if conv:
                    lat0 = lat if lat is not None else check_l_wmin(inst, x0, 0, seed=instance_digest(inst) % 1000)
                    if lat0.holds:
                        sep = l_wmin_separation(inst, x0)
                        ok = sep is not None and (not slater.holds or sep.normalization == PHASES[0])
                        R.check("lattice_separation", ok, x0, eps, {"probes_used": lat0.probes_used})
                else:
                    R.skip("lattice_separation", x0, eps, "discrete image set is not convex")

            if discrete_twin is not None and feasible(discrete_twin, x0).holds and v.holds:
                dv = check_v_wmin(discrete_twin, x0, eps)
                R.check("mode_coherence", dv.holds, x0, eps, {"convexified_y0": v.certifying_y0})

        for i, e1 in enumerate(eps_list):
            for e2 in eps_list[i + 1:]:
                if verdicts[e1].holds:
                    R.check(
                        "epsilon_monotonicity", verdicts[e2].holds, x0, e2,
                        {"holds_at": e1, "fails_at": e2},
                    )
    return R.results


# ---------------------------------------------------------------------------
# fuzzing


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 1
    count: int = 10
    max_m: int = 3
    max_p: int = 3
    max_labels: int = 5
    max_points: int = 3
    max_den: int = 8
    plant_slater: bool = False
    mode: str = "both"
    epsilons: tuple = DEFAULT_EPSILONS

    def __post_init__(self):
        bounds = {
            "max_m": (self.max_m, 4), "max_p": (self.max_p, 4), "max_labels": (self.max_labels, 6),
            "max_points": (self.max_points, 4), "max_den": (self.max_den, 8),
        }
        for name, (v, hi) in bounds.items():
            if not 1 <= v <= hi:
                raise ValueError(f"{name} must lie in [1, {hi}], got {v}")
        if self.count < 0:
            raise ValueError("count must be nonnegative")
        if self.mode not in ("discrete", "convexified", "both"):
            raise ValueError(f"unknown mode {self.mode!r}")


def _random_cone(rng: random.Random, d: int) -> Cone:
    if rng.random() < 0.5:
        return Cone.orthant(d)
    while True:
        gens = [
            tuple(q(1) if i == j else q(rng.choice((-1, 0, 0, 1))) for j in range(d)) for i in range(d)
        ]
        try:
            return Cone.from_generators(gens)
        except ValueError:
            continue


def generate_instance(config: FuzzConfig, index: int, mode: str = "discrete") -> Instance:
    """Deterministic instance number ``index`` of the corpus for ``config.seed``."""
    rng = random.Random(f"svo-fuzz:{config.seed}:{index}")
    m = rng.randint(1, config.max_m)
    p = rng.randint(1, config.max_p)
    K = _random_cone(rng, m)
    C = _random_cone(rng, p)
    weights = [rng.randint(1, 3) for _ in range(m)]
    e = tuple(sum((w * g[j] for w, g in zip(weights, K.generators)), ZERO) for j in range(m))
    n = rng.randint(1, config.max_labels)
    labels = [chr(ord("a") + i) for i in range(n)]

    def point(d):
        return tuple(_rand_rational(rng, -2, 2, config.max_den) for _ in range(d))

    f = {x: [point(m) for _ in range(rng.randint(1, config.max_points))] for x in labels}
    g = {x: [point(p) for _ in range(rng.randint(1, config.max_points))] for x in labels}
    if config.plant_slater:
        x = rng.choice(labels)
        r = q(rng.randint(1, 8)) / rng.randint(1, config.max_den)
        inner = tuple(-r * sum((c[j] for c in C.generators), ZERO) for j in range(p))
        g[x][0] = inner
    name = f"fuzz:seed={config.seed}:index={index}"
    return Instance(m, p, K, C, e, tuple(labels), f, g, mode, name)


@dataclass(frozen=True)
class FuzzBundle:
    """Results of one generated instance, over every requested mode."""

    index: int
    instances: tuple[Instance, ...]
    results: tuple[PropertyResult, ...]
    archived: tuple[str, ...] = ()

    @property
    def failed(self) -> bool:
        return any(r.failed for r in self.results)

    @property
    def counterexample(self) -> bool:
        return any(r.status in (ASSERTED_FAIL, REPORTED_VIOLATED) for r in self.results)


def instance_ref(inst: Instance) -> str:
    return f"{inst.name}:mode={inst.mode}"


def fuzz_instances(config: FuzzConfig, out_dir: str | None = None) -> Iterator[FuzzBundle]:
    """One bundle per index; instances with a failure or a reported violation are archived."""
    modes = ("discrete", "convexified") if config.mode == "both" else (config.mode,)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    for index in range(config.count):
        base = generate_instance(config, index)
        insts, results, archived = [], [], []
        for mode in modes:
            inst = base.with_mode(mode)
            res = verify_suite(inst, config.epsilons, instance_ref(inst))
            if out_dir and any(r.status in (ASSERTED_FAIL, REPORTED_VIOLATED) for r in res):
                path = os.path.join(out_dir, f"seed{config.seed}-{index:05d}-{mode}.json")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(dumps_instance(inst))
                archived.append(path)
            insts.append(inst)
            results.extend(res)
        yield FuzzBundle(index, tuple(insts), tuple(results), tuple(archived))


def replay(path: str, epsilons: Sequence = DEFAULT_EPSILONS) -> list[PropertyResult]:
    """Reload an archived instance and rerun the suite under its fuzz reference."""
    from .instance import load_instance

    with open(path, encoding="utf-8") as fh:
        doc = fh.read()
    name = os.path.basename(path)
    seed, index, mode = name[len("seed"):-len(".json")].rsplit("-", 2)
    inst = load_instance(doc, name=f"fuzz:seed={seed}:index={int(index)}")
    return verify_suite(inst, epsilons, instance_ref(inst))


# ---------------------------------------------------------------------------
# reports


def summarize(results: Iterable[PropertyResult]) -> dict[str, dict[str, int]]:
    table: dict[str, dict[str, int]] = {}
    for r in results:
        row = table.setdefault(r.property_id, {s: 0 for s in STATUSES})
        row[r.status] += 1
    return dict(sorted(table.items()))


def exit_status(results: Iterable[PropertyResult]) -> int:
    return 1 if any(r.failed for r in results) else 0


def emit_report(results: Sequence[PropertyResult], format: str = "human") -> str:
    results = list(results)
    summary = summarize(results)
    if format == "machine":
        doc = {
            "format": "svo-report/1",
            "summary": summary,
            "results": [r.to_record() for r in results],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if format != "human":
        raise ValueError(f"unknown format {format!r}")
    cols = ("pass", "FAIL", "holds", "violated", "skipped")
    width = max([len(p) for p in summary] + [8])
    lines = [f"{'property':<{width}}  " + "  ".join(f"{c:>8}" for c in cols)]
    for pid, row in summary.items():
        counts = [row[s] for s in STATUSES]
        lines.append(f"{pid:<{width}}  " + "  ".join(f"{c:>8}" for c in counts))
    failed = [r for r in results if r.failed]
    lines.append("")
    lines.append(f"{len(results)} checks, {len(failed)} asserted failures")
    for r in failed:
        lines.append(f"FAIL {r.property_id} [{r.instance_ref}] x0={r.x0} eps={r.epsilon} witness={json.dumps(r.witness, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def load_report(text: str) -> list[PropertyResult]:
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("format") != "svo-report/1":
        raise ValueError("not an svo machine report")
    return [PropertyResult.from_record(r) for r in doc["results"]]
