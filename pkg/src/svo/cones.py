"""Polyhedral ordering cones with exact membership and interior oracles.

A :class:`Cone` carries both representations: inward normals
(``{y | a_i·y >= 0}``) and generators.  The normals double as generators of
the dual cone.  Interiors are decided by strict normal inequalities, which
is valid because every validated cone is full-dimensional.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .lp import (
    LPProblem,
    Status,
    eq,
    ge,
    gt,
    solve_lp,
    strict_feasibility,
)
from .rational import ONE, ZERO, Scalar, Vector, dot, inverse, rank, sub, transpose, unit, vec


class ConeError(ValueError):
    pass


class DimensionMismatch(ConeError):
    pass


class EmptyInterior(ConeError):
    pass


class GeneratorOutsideHCone(ConeError):
    pass


class RepresentationMismatch(ConeError):
    """The generated cone and the normal description disagree."""


@dataclass(frozen=True)
class Cone:
    dimension: int
    normals: tuple[Vector, ...]
    generators: tuple[Vector, ...]
    interior_witness: Vector

    def __post_init__(self):
        object.__setattr__(self, "normals", tuple(vec(a) for a in self.normals))
        object.__setattr__(self, "generators", tuple(vec(g) for g in self.generators))
        object.__setattr__(self, "interior_witness", vec(self.interior_witness))

    @classmethod
    def orthant(cls, dimension: int) -> "Cone":
        units = tuple(unit(dimension, i) for i in range(dimension))
        return cls(dimension, units, units, (ONE,) * dimension)

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence]) -> "Cone":
        """Simplicial cone spanned by ``dimension`` independent generators."""
        gens = [vec(g) for g in generators]
        d = len(gens)
        inv = inverse(transpose(gens))
        if inv is None or any(len(g) != d for g in gens):
            raise EmptyInterior("generators are not a basis")
        witness = tuple(sum((g[i] for g in gens), ZERO) for i in range(d))
        return cls(d, tuple(inv), tuple(gens), witness)

    @classmethod
    def from_normals(cls, normals: Sequence[Sequence]) -> "Cone":
        """Simplicial cone ``{y | N y >= 0}`` for an invertible ``N``."""
        rows = [vec(a) for a in normals]
        d = len(rows)
        inv = inverse(rows)
        if inv is None or any(len(a) != d for a in rows):
            raise EmptyInterior("normals are not a basis")
        gens = transpose(inv)
        witness = tuple(sum((g[i] for g in gens), ZERO) for i in range(d))
        return cls(d, tuple(rows), tuple(gens), witness)

    @property
    def simplicial(self) -> bool:
        return len(self.generators) == self.dimension and rank(self.generators) == self.dimension

    def contains(self, point: Sequence, interior: bool = False) -> bool:
        return cone_membership(point, self, interior)


@dataclass(frozen=True)
class ValidationReport:
    simplicial: bool
    reverse_inclusion: str  # "exact" or "sampled"
    samples: int = 0


@dataclass(frozen=True)
class PointSet:
    points: tuple[Vector, ...]
    hull_mode: str = "union"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(vec(p) for p in self.points))
        if self.hull_mode not in ("union", "hull"):
            raise ValueError(f"hull_mode must be 'union' or 'hull', got {self.hull_mode!r}")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class KBound:
    t: Scalar
    point_index: int | None
    normal_index: int | None
    bounded: bool = True  # finite sets are always K-bounded


def _check_dim(v: Sequence, d: int, what: str) -> None:
    if len(v) != d:
        raise DimensionMismatch(f"{what} has length {len(v)}, expected {d}")


def _in_cone_of(point: Sequence, generators: Sequence[Vector]) -> bool:
    d = len(point)
    k = len(generators)
    if k == 0:
        return all(x == 0 for x in point)
    rows = [eq([g[i] for g in generators], point[i]) for i in range(d)]
    out = solve_lp(LPProblem(k, (ZERO,) * k, "minimize", rows, range(k)))
    return out.status is Status.OPTIMAL


def validate_cone(cone: Cone, samples: int = 16, seed: int = 0) -> ValidationReport:
    d = cone.dimension
    for a in cone.normals:
        _check_dim(a, d, "normal")
    for g in cone.generators:
        _check_dim(g, d, "generator")
    _check_dim(cone.interior_witness, d, "interior witness")
    for g in cone.generators:
        if any(dot(a, g) < 0 for a in cone.normals):
            raise GeneratorOutsideHCone(f"generator {g} violates a normal inequality")
    if cone.normals:
        out = strict_feasibility([gt(a, 0) for a in cone.normals], d)
        if out.status is not Status.STRICTLY_FEASIBLE:
            raise EmptyInterior("normal inequalities have no strict solution")
    if not all(dot(a, cone.interior_witness) > 0 for a in cone.normals):
        raise EmptyInterior("interior witness is not strictly interior")

    if cone.simplicial:
        derived = inverse(transpose(cone.generators))
        for r in derived:
            # r is nonnegative on H iff r lies in cone(normals)
            if not _in_cone_of(r, cone.normals):
                raise RepresentationMismatch(
                    "normals describe a larger cone than the generators span"
                )
        return ValidationReport(True, "exact")

    checked = 0
    probes = [cone.interior_witness]
    rng = random.Random(seed)
    attempts = 0
    while len(probes) < samples + 1 and attempts < 50 * samples:
        attempts += 1
        y = vec(rng.randint(-4, 4) for _ in range(d))
        if all(dot(a, y) >= 0 for a in cone.normals):
            probes.append(y)
    for y in probes:
        if not _in_cone_of(y, cone.generators):
            raise RepresentationMismatch(f"H-cone point {y} is not generated")
        checked += 1
    return ValidationReport(False, "sampled", checked)


def dual_generators(cone: Cone) -> tuple[Vector, ...]:
    return cone.normals


def cone_membership(point: Sequence, cone: Cone, interior: bool = False) -> bool:
    _check_dim(point, cone.dimension, "point")
    if interior:
        return all(dot(a, point) > 0 for a in cone.normals)
    return all(dot(a, point) >= 0 for a in cone.normals)


def hull_plus_cone_weights(
    query: Sequence, points: Sequence[Vector], cone: Cone, interior: bool = False
) -> Vector | None:
    """Convex weights ``lam`` with ``query - sum lam_k a_k`` in the cone (interior if asked)."""
    k = len(points)
    rows = [eq((ONE,) * k, 1)]
    for a in cone.normals:
        coeffs = [-dot(a, p) for p in points]
        rhs = -dot(a, query)
        rows.append(gt(coeffs, rhs) if interior else ge(coeffs, rhs))
    if interior:
        out = strict_feasibility(rows, k, nonneg=range(k))
        return out.primal_witness if out.status is Status.STRICTLY_FEASIBLE else None
    out = solve_lp(LPProblem(k, (ZERO,) * k, "minimize", rows, range(k)))
    return out.primal_witness if out.optimal else None


def set_plus_cone_membership(query: Sequence, A: PointSet, cone: Cone, interior: bool = False) -> bool:
    """Decide ``query ∈ A + K`` (or ``A + int K`` when ``interior``)."""
    _check_dim(query, cone.dimension, "query")
    for p in A.points:
        _check_dim(p, cone.dimension, "point of A")
    if not A.points:
        return False
    if A.hull_mode == "union":
        return any(cone_membership(sub(query, p), cone, interior) for p in A.points)
    return hull_plus_cone_weights(query, A.points, cone, interior) is not None


def interior_of_hull_plus_cone(query: Sequence, points: Sequence[Vector], cone: Cone) -> bool:
    """Decide ``query ∈ int(conv(points) + K)`` from generators only.

    A point of a convex set is interior iff it can be pushed a positive
    distance along each vertex direction of a simplex around the origin.
    Each push length is one weak LP over the generator description.
    """
    d = cone.dimension
    _check_dim(query, d, "query")
    k, r = len(points), len(cone.generators)
    dirs = [unit(d, i) for i in range(d)] + [tuple(-ONE for _ in range(d))]
    n = k + r + 1  # weights, cone multipliers, push length
    for u in dirs:
        rows = [eq((ONE,) * k + (ZERO,) * (r + 1), 1)]
        for i in range(d):
            coeffs = [p[i] for p in points] + [g[i] for g in cone.generators] + [-u[i]]
            rows.append(eq(coeffs, query[i]))
        objective = (ZERO,) * (n - 1) + (ONE,)
        out = solve_lp(LPProblem(n, objective, "maximize", rows, range(n)))
        if out.status is Status.INFEASIBLE:
            return False
        if out.status is Status.OPTIMAL and out.value <= 0:
            return False
    return True


def min_k_bound(A: PointSet | Sequence[Vector], e: Sequence, cone: Cone) -> KBound:
    """Smallest ``t >= 0`` with ``A ⊆ -t e + K``."""
    points = A.points if isinstance(A, PointSet) else tuple(vec(p) for p in A)
    e = vec(e)
    if not cone_membership(e, cone, interior=True):
        raise ConeError("e is not interior to the cone")
    best, arg = ZERO, (None, None)
    for pi, y in enumerate(points):
        _check_dim(y, cone.dimension, "point")
        for ni, a in enumerate(cone.normals):
            t = -dot(a, y) / dot(a, e)
            if t > best:
                best, arg = t, (pi, ni)
    return KBound(best, *arg)
