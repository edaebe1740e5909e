"""Weak minimality of a feasible label under the vector and lattice criteria.

``x0`` is an ε-v-wmin solution when some ``y0 ∈ f(x0)`` has no feasible
image point in the open set ``y0 - εe - int K``.  It is an ε-l-wmin
solution when, for every feasible ``x``,
``f(x0) ⊆ int(f(x)+K) + εe`` forces ``f(x) ⊆ int(f(x0)+K) + εe``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .cones import KBound, PointSet, cone_membership, min_k_bound, set_plus_cone_membership
from .instance import Candidate, ImageVars, Instance, feasible, feasible_labels
from .lp import Status
from .model import Model
from .rational import ZERO, Scalar, Vector, dot, q, scale, sub, vec


@dataclass(frozen=True)
class Violation:
    y0: Vector | None
    candidate: Candidate | None
    point: Vector | None
    reason: str = ""


@dataclass(frozen=True)
class SolutionVerdict:
    holds: bool
    certifying_y0: Vector | None = None
    violations: tuple[Violation, ...] = ()
    exact: bool = True
    probes_used: int = 0

    @property
    def violation(self) -> Violation | None:
        return self.violations[0] if self.violations else None


def _not_in_M(x0: str) -> SolutionVerdict:
    return SolutionVerdict(False, violations=(Violation(None, x0, None, "x0 not in M"),))


def _shift(inst: Instance, y: Sequence, eps: Scalar) -> Vector:
    return sub(y, scale(eps, inst.e))


def dominating_feasible_point(inst: Instance, target: Sequence) -> tuple[Candidate, Vector] | None:
    """A feasible candidate with an image point in ``target - int K``, if any."""
    if not inst.convexified:
        for x in feasible_labels(inst):
            for y in inst.f_images[x]:
                if cone_membership(sub(target, y), inst.K, interior=True):
                    return x, y
        return None
    m = Model()
    iv = ImageVars(m, inst)
    iv.add_feasibility(inst.C)
    for a in inst.K.normals:
        # a·(target - y) > 0
        m.add({i: -c for i, c in iv.y_terms(a).items()}, ">", -dot(a, target))
    out = m.strict()
    if out.status is not Status.STRICTLY_FEASIBLE:
        return None
    sol = out.primal_witness
    return iv.weights(sol), iv.y_point(sol)


def check_v_wmin(inst: Instance, x0: str, eps=0) -> SolutionVerdict:
    eps = q(eps)
    f0 = inst.f(x0)
    if not feasible(inst, x0).holds:
        return _not_in_M(x0)
    violations = []
    for y0 in f0:
        hit = dominating_feasible_point(inst, _shift(inst, y0, eps))
        if hit is None:
            return SolutionVerdict(True, certifying_y0=y0)
        violations.append(Violation(y0, hit[0], hit[1], "feasible point in y0 - εe - int K"))
    return SolutionVerdict(False, violations=tuple(violations))


# ---------------------------------------------------------------------------
# lattice criterion


def in_image_plus_cone(inst: Instance, candidate: Candidate, query: Sequence, interior: bool = True) -> bool:
    """``query ∈ f(candidate) + K`` (``+ int K`` when ``interior``) in the mode's semantics."""
    if isinstance(candidate, str):
        A = PointSet(inst.f(candidate), "hull" if inst.convexified else "union")
        return set_plus_cone_membership(query, A, inst.K, interior)
    m = Model()
    iv = ImageVars(m, inst, lam=inst.weights(candidate), use_g=False)
    rel = ">" if interior else ">="
    for a in inst.K.normals:
        m.add({i: -c for i, c in iv.y_terms(a).items()}, rel, -dot(a, query))
    out = m.strict() if interior else m.solve()
    return out.status in (Status.STRICTLY_FEASIBLE, Status.OPTIMAL)


def image_points(inst: Instance, candidate: Candidate):
    """Generating points of ``f(candidate)`` (Minkowski combinations for weights)."""
    if isinstance(candidate, str):
        yield from inst.f(candidate)
        return
    parts = [[scale(w, p) for p in inst.f_images[x]] for x, w in inst.support(candidate)]
    for combo in itertools.product(*parts):
        yield tuple(sum(c, ZERO) for c in zip(*combo))


def lattice_antecedent(inst: Instance, x0: str, candidate: Candidate, eps: Scalar) -> bool:
    """``f(x0) ⊆ int(f(candidate) + K) + εe``."""
    return all(in_image_plus_cone(inst, candidate, _shift(inst, p, eps)) for p in inst.f(x0))


def lattice_consequent_failure(
    inst: Instance, x0: str, candidate: Candidate, eps: Scalar, hint: Sequence | None = None
) -> Vector | None:
    """A point of ``f(candidate)`` outside ``int(f(x0) + K) + εe``, or ``None``."""
    points = image_points(inst, candidate)
    if hint is not None:
        points = itertools.chain([vec(hint)], points)
    for y in points:
        if not in_image_plus_cone(inst, x0, _shift(inst, y, eps)):
            return y
    return None


def random_simplex_probes(inst: Instance, count: int, seed: int = 0, max_support: int = 2) -> list[tuple]:
    """Seeded rational simplex points supported on at most ``max_support`` labels."""
    rng = random.Random(seed)
    n = len(inst.labels)
    probes = []
    for _ in range(count):
        k = rng.randint(1, min(max_support, n))
        idx = rng.sample(range(n), k)
        raw = [rng.randint(1, 8) for _ in idx]
        total = sum(raw)
        lam = [ZERO] * n
        for i, r in zip(idx, raw):
            lam[i] = q(r) / total
        probes.append(tuple(lam))
    return probes


def targeted_lattice_probe(inst: Instance, x0: str, eps) -> tuple[tuple, Vector] | None:
    """Feasible weights whose image enters ``B(x0) - εe - int K``.

    Any such candidate satisfies the lattice antecedent, and the returned
    image point fails the consequent.
    """
    eps = q(eps)
    B = compute_B(inst, x0)
    m = Model()
    iv = ImageVars(m, inst)
    iv.add_feasibility(inst.C)
    ytil = m.vars(inst.y_dim, nonneg=False)
    for a, off in zip(B.normals, B.offsets):
        m.add(dict(zip(ytil, a)), "<=", off)
    for a in inst.K.normals:
        # a·(ỹ - εe - y) > 0
        terms = {i: c for i, c in zip(ytil, a)}
        for i, c in iv.y_terms(a).items():
            terms[i] = -c
        m.add(terms, ">", eps * dot(a, inst.e))
    out = m.strict()
    if out.status is not Status.STRICTLY_FEASIBLE:
        return None
    sol = out.primal_witness
    return iv.weights(sol), iv.y_point(sol)


def check_l_wmin(
    inst: Instance,
    x0: str,
    eps=0,
    probes: Sequence[Sequence] = (),
    random_probes: int = 6,
    seed: int = 0,
) -> SolutionVerdict:
    eps = q(eps)
    inst.f(x0)
    if not feasible(inst, x0).holds:
        return _not_in_M(x0)
    if not inst.convexified:
        for x in feasible_labels(inst):
            if lattice_antecedent(inst, x0, x, eps):
                bad = lattice_consequent_failure(inst, x0, x, eps)
                if bad is not None:
                    return SolutionVerdict(
                        False, violations=(Violation(None, x, bad, "lattice consequent fails"),)
                    )
        return SolutionVerdict(True)

    candidates: list[tuple[Candidate, Vector | None]] = [(x, None) for x in inst.labels]
    candidates += [(tuple(vec(p)), None) for p in probes]
    candidates += [(p, None) for p in random_simplex_probes(inst, random_probes, seed)]
    target = targeted_lattice_probe(inst, x0, eps)
    if target is not None:
        candidates.insert(0, target)
    used = 0
    for cand, hint in candidates:
        if not feasible(inst, cand).holds:
            continue
        used += 1
        if lattice_antecedent(inst, x0, cand, eps):
            bad = lattice_consequent_failure(inst, x0, cand, eps, hint)
            if bad is not None:
                return SolutionVerdict(
                    False,
                    violations=(Violation(None, cand, bad, "lattice consequent fails"),),
                    exact=True,
                    probes_used=used,
                )
    return SolutionVerdict(True, exact=False, probes_used=used)


# ---------------------------------------------------------------------------
# auxiliary objects of the separation rules


@dataclass(frozen=True)
class LowerBoundPolyhedron:
    """``B(x0) = {ỹ | f(x0) ⊆ ỹ + K} = {ỹ | a_i·ỹ <= offset_i}``."""

    normals: tuple[Vector, ...]
    offsets: tuple[Scalar, ...]

    def contains(self, y: Sequence) -> bool:
        return all(dot(a, y) <= o for a, o in zip(self.normals, self.offsets))


def compute_B(inst: Instance, x0: str) -> LowerBoundPolyhedron:
    f0 = inst.f(x0)
    if not f0:
        raise ValueError(f"f({x0}) is empty")
    normals = inst.K.normals
    return LowerBoundPolyhedron(normals, tuple(min(dot(a, y) for y in f0) for a in normals))


@dataclass(frozen=True)
class DiagnosticsReport:
    k_bound: KBound
    minimal_elements: tuple[Vector, ...]
    dominating_points: tuple[Vector, ...]

    @property
    def has_dominating_point(self) -> bool:
        return bool(self.dominating_points)


def image_diagnostics(inst: Instance, x0: str) -> DiagnosticsReport:
    f0 = inst.f(x0)
    if not f0:
        raise ValueError(f"f({x0}) is empty")
    K = inst.K
    minimal = tuple(
        y0 for y0 in f0 if not any(cone_membership(sub(y0, y), K, interior=True) for y in f0)
    )
    dominating = tuple(y0 for y0 in f0 if all(cone_membership(sub(y, y0), K) for y in f0))
    return DiagnosticsReport(min_k_bound(f0, inst.e, K), minimal, dominating)
