"""Problem instances, feasibility, constraint qualifications and the image set.

An instance has a finite label set ``X``; each label carries finite point
images ``f(x) ⊆ Y`` and ``g(x) ⊆ Z``.  In ``discrete`` mode the feasible
family is the labels themselves.  In ``convexified`` mode the domain is the
probability simplex over the labels with ``f(λ) = Σ λ_i conv f(x_i)`` (and
likewise ``g``), which makes both maps convex and the image set ``Q`` a
polyhedron.

The feasible set is ``M = {x | 0 ∈ g(x) + C}`` and the Lagrangian is
``L(x, T) = f(x) + T(g(x))`` with ``T(z) = z*(z) e``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from typing import Mapping, NamedTuple, Sequence, Union

from .cones import Cone, ConeError, DimensionMismatch, PointSet, cone_membership, validate_cone
from .lp import Status
from .model import Model
from .rational import ONE, ZERO, Scalar, Vector, add, dot, fmt_vec, q, scale, vec

MODES = ("discrete", "convexified")

Candidate = Union[str, Sequence]


class InstanceError(ValueError):
    pass


class ParseError(InstanceError):
    pass


class ValidationError(InstanceError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class UnknownLabel(InstanceError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class WeightsNotOnSimplex(InstanceError):
    pass


class EmptyImage(InstanceError):
    pass


class Check(NamedTuple):
    holds: bool
    witness: object = None


@dataclass(frozen=True, eq=False)
class Instance:
    y_dim: int
    z_dim: int
    K: Cone
    C: Cone
    e: Vector
    labels: tuple[str, ...]
    f_images: Mapping[str, tuple[Vector, ...]]
    g_images: Mapping[str, tuple[Vector, ...]]
    mode: str = "discrete"
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "e", vec(self.e))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(
            self, "f_images", {x: tuple(vec(p) for p in self.f_images.get(x, ())) for x in self.labels}
        )
        object.__setattr__(
            self, "g_images", {x: tuple(vec(p) for p in self.g_images.get(x, ())) for x in self.labels}
        )
        _validate(self)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return dumps_instance(self) == dumps_instance(other)

    def __hash__(self):
        return hash(dumps_instance(self))

    @property
    def convexified(self) -> bool:
        return self.mode == "convexified"

    def f(self, label: str) -> tuple[Vector, ...]:
        self._known(label)
        return self.f_images[label]

    def g(self, label: str) -> tuple[Vector, ...]:
        self._known(label)
        return self.g_images[label]

    def _known(self, label: str) -> None:
        if label not in self.f_images:
            raise UnknownLabel(f"unknown label {label!r}")

    @property
    def dom_f(self) -> tuple[str, ...]:
        return tuple(x for x in self.labels if self.f_images[x])

    def with_mode(self, mode: str) -> "Instance":
        return replace(self, mode=mode)

    def weights(self, candidate: Candidate) -> tuple[Scalar, ...]:
        """Weight vector of a candidate; a label is a simplex vertex."""
        if isinstance(candidate, str):
            self._known(candidate)
            return tuple(ONE if x == candidate else ZERO for x in self.labels)
        lam = vec(candidate)
        if len(lam) != len(self.labels):
            raise WeightsNotOnSimplex(f"expected {len(self.labels)} weights, got {len(lam)}")
        if any(v < 0 for v in lam) or sum(lam, ZERO) != 1:
            raise WeightsNotOnSimplex(f"weights {fmt_vec(lam)} are not on the simplex")
        return lam

    def support(self, candidate: Candidate) -> list[tuple[str, Scalar]]:
        return [(x, w) for x, w in zip(self.labels, self.weights(candidate)) if w]

    def uses_hull(self, candidate: Candidate) -> bool:
        return self.convexified or not isinstance(candidate, str)


def _validate(inst: Instance) -> None:
    if inst.mode not in MODES:
        raise ValidationError("mode", f"unknown mode {inst.mode!r}")
    if inst.K.dimension != inst.y_dim:
        raise ValidationError("K", f"dimension {inst.K.dimension} != y_dim {inst.y_dim}")
    if inst.C.dimension != inst.z_dim:
        raise ValidationError("C", f"dimension {inst.C.dimension} != z_dim {inst.z_dim}")
    for path, cone in (("K", inst.K), ("C", inst.C)):
        try:
            validate_cone(cone)
        except ConeError as exc:
            raise ValidationError(path, str(exc)) from exc
        if any(not any(a) for a in cone.normals):
            raise ValidationError(f"{path}.normals", "zero normal")
    if len(inst.e) != inst.y_dim:
        raise ValidationError("e", "dimension mismatch")
    if not cone_membership(inst.e, inst.K, interior=True):
        raise ValidationError("e", "e not interior to K")
    if not inst.labels:
        raise ValidationError("labels", "label set is empty")
    if len(set(inst.labels)) != len(inst.labels):
        raise ValidationError("labels", "duplicate label")
    for x in inst.labels:
        for p in inst.f_images[x]:
            if len(p) != inst.y_dim:
                raise ValidationError(f"labels.{x}.f", "point dimension != y_dim")
        for p in inst.g_images[x]:
            if len(p) != inst.z_dim:
                raise ValidationError(f"labels.{x}.g", "point dimension != z_dim")
        if inst.convexified:
            if not inst.f_images[x]:
                raise ValidationError(f"labels.{x}.f", "convexified mode needs nonempty f images")
            if not inst.g_images[x]:
                raise ValidationError(f"labels.{x}.g", "convexified mode needs nonempty g images")
        elif not inst.f_images[x]:
            if any(cone_membership(tuple(-v for v in z), inst.C) for z in inst.g_images[x]):
                raise ValidationError(f"labels.{x}.f", "M ⊄ dom f: feasible label with empty f image")


# ---------------------------------------------------------------------------
# LP building blocks


class ImageVars:
    """Convex-combination variables for ``f`` and/or ``g`` images inside a :class:`Model`."""

    def __init__(self, model: Model, inst: Instance, lam=None, use_f=True, use_g=True):
        self.model = model
        self.alpha: dict[str, list[int]] = {}
        self.beta: dict[str, list[int]] = {}
        labels = inst.labels if lam is None else [x for x, w in zip(inst.labels, lam) if w]
        weight = dict(zip(inst.labels, lam)) if lam is not None else None
        self.inst = inst
        for x in labels:
            if use_f:
                self.alpha[x] = model.vars(len(inst.f_images[x]))
            if use_g:
                self.beta[x] = model.vars(len(inst.g_images[x]))
            if weight is not None:
                if use_f:
                    model.add({i: 1 for i in self.alpha[x]}, "=", weight[x])
                if use_g:
                    model.add({i: 1 for i in self.beta[x]}, "=", weight[x])
            elif use_f and use_g:
                terms = [(i, 1) for i in self.alpha[x]] + [(i, -1) for i in self.beta[x]]
                model.add(terms, "=", 0)
        if lam is None:
            block = self.alpha if use_f else self.beta
            model.add([(i, 1) for ids in block.values() for i in ids], "=", 1)

    def y_terms(self, direction: Sequence) -> dict[int, Scalar]:
        """Terms of ``direction · y`` with ``y`` the combined f point."""
        out = {}
        for x, ids in self.alpha.items():
            for i, p in zip(ids, self.inst.f_images[x]):
                out[i] = dot(direction, p)
        return out

    def z_terms(self, direction: Sequence) -> dict[int, Scalar]:
        out = {}
        for x, ids in self.beta.items():
            for i, p in zip(ids, self.inst.g_images[x]):
                out[i] = dot(direction, p)
        return out

    def add_feasibility(self, C: Cone) -> None:
        """``z ∈ -C``: every C normal is nonpositive on the combined g point."""
        for b in C.normals:
            self.model.add(self.z_terms(b), "<=", 0)

    def weights(self, solution: Sequence) -> tuple[Scalar, ...]:
        block = self.alpha if self.alpha else self.beta
        return tuple(sum((solution[i] for i in block.get(x, ())), ZERO) for x in self.inst.labels)

    def y_point(self, solution: Sequence) -> Vector:
        out = [ZERO] * self.inst.y_dim
        for x, ids in self.alpha.items():
            for i, p in zip(ids, self.inst.f_images[x]):
                if solution[i]:
                    for j, v in enumerate(p):
                        out[j] += solution[i] * v
        return tuple(out)

    def z_point(self, solution: Sequence) -> Vector:
        out = [ZERO] * self.inst.z_dim
        for x, ids in self.beta.items():
            for i, p in zip(ids, self.inst.g_images[x]):
                if solution[i]:
                    for j, v in enumerate(p):
                        out[j] += solution[i] * v
        return tuple(out)


def neg(v: Sequence) -> Vector:
    return tuple(-x for x in v)


def in_minus_cone(z: Sequence, cone: Cone, interior: bool = False) -> bool:
    return cone_membership(neg(z), cone, interior)


# ---------------------------------------------------------------------------
# feasibility and constraint qualifications


def feasible(inst: Instance, candidate: Candidate) -> Check:
    """Decide ``candidate ∈ M``; the witness is a point of ``g(candidate) ∩ -C``."""
    if isinstance(candidate, str) and not inst.convexified:
        for z in inst.g(candidate):
            if in_minus_cone(z, inst.C):
                return Check(True, z)
        return Check(False)
    lam = inst.weights(candidate)
    if any(not inst.g_images[x] for x, w in zip(inst.labels, lam) if w):
        return Check(False)
    m = Model()
    iv = ImageVars(m, inst, lam=lam, use_f=False)
    iv.add_feasibility(inst.C)
    out = m.solve()
    if not out.optimal:
        return Check(False)
    return Check(True, iv.z_point(out.primal_witness))


def feasible_labels(inst: Instance) -> list[str]:
    return [x for x in inst.labels if feasible(inst, x).holds]


def slater_check(inst: Instance) -> Check:
    """Some constraint image meets ``-int C``; witness ``(candidate, z)``."""
    if not inst.convexified:
        for x in inst.labels:
            for z in inst.g_images[x]:
                if in_minus_cone(z, inst.C, interior=True):
                    return Check(True, (x, z))
        return Check(False)
    m = Model()
    iv = ImageVars(m, inst, use_f=False)
    for b in inst.C.normals:
        m.add(iv.z_terms(b), "<", 0)
    out = m.strict()
    if out.status is not Status.STRICTLY_FEASIBLE:
        return Check(False)
    sol = out.primal_witness
    return Check(True, (iv.weights(sol), iv.z_point(sol)))


@dataclass(frozen=True)
class CQResult:
    holds: bool
    violating_z_star: Vector | None = None
    certificate: Vector | None = None


def cq_check(inst: Instance) -> CQResult:
    """Every nonzero ``z* ∈ C+`` is strictly negative somewhere on ``g(dom f)``.

    Fails iff a normalized combination of C+ generators is nonnegative on all
    constraint points of ``dom f``; that is one LP, and its Farkas
    certificate proves the qualification when it holds.
    """
    normals = inst.C.normals
    m = Model()
    mu = m.vars(len(normals))
    m.add({i: 1 for i in mu}, "=", 1)
    for x in inst.dom_f:
        for z in inst.g_images[x]:
            m.add({i: dot(b, z) for i, b in zip(mu, normals)}, ">=", 0)
    out = m.solve()
    if out.optimal:
        zs = tuple(
            sum((w * b[j] for w, b in zip(out.primal_witness, normals)), ZERO) for j in range(inst.z_dim)
        )
        return CQResult(False, violating_z_star=zs)
    return CQResult(True, certificate=out.dual_certificate)


# ---------------------------------------------------------------------------
# image set


@dataclass(frozen=True)
class QSet:
    y_dim: int
    z_dim: int
    vertices: tuple[Vector, ...]
    rays: tuple[Vector, ...]
    hull_of_Q: bool = False
    owners: tuple[str, ...] = ()

    def split(self, v: Sequence) -> tuple[Vector, Vector]:
        return tuple(v[: self.y_dim]), tuple(v[self.y_dim:])

    def scalarize(self, y_star: Sequence, z_star: Sequence, v: Sequence) -> Scalar:
        y, z = self.split(v)
        return dot(y_star, y) + dot(z_star, z)

    def inf_scalarization(self, y_star: Sequence, z_star: Sequence) -> Scalar | None:
        """``inf over Q of y*(y) + z*(z)``; ``None`` stands for minus infinity."""
        if not self.vertices:
            raise EmptyImage("image set is empty")
        if any(self.scalarize(y_star, z_star, r) < 0 for r in self.rays):
            return None
        return min(self.scalarize(y_star, z_star, v) for v in self.vertices)

    def _weights_model(self):
        m = Model()
        lam = m.vars(len(self.vertices))
        rho = m.vars(len(self.rays))
        m.add({i: 1 for i in lam}, "=", 1)
        return m, lam, rho

    def inf_scalarization_lp(self, y_star: Sequence, z_star: Sequence) -> Scalar | None:
        """Same value as :meth:`inf_scalarization`, decided by the LP kernel."""
        m, lam, rho = self._weights_model()
        obj = {i: self.scalarize(y_star, z_star, v) for i, v in zip(lam, self.vertices)}
        obj.update({i: self.scalarize(y_star, z_star, r) for i, r in zip(rho, self.rays)})
        out = m.solve(obj)
        if out.status is Status.UNBOUNDED:
            return None
        return out.value

    def contains(self, point: Sequence) -> bool:
        m, lam, rho = self._weights_model()
        for j in range(self.y_dim + self.z_dim):
            terms = {i: v[j] for i, v in zip(lam, self.vertices)}
            terms.update({i: r[j] for i, r in zip(rho, self.rays)})
            m.add(terms, "=", point[j])
        return m.solve().optimal


def _dedupe(seq):
    seen, out = set(), []
    for v in seq:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def build_Q(inst: Instance) -> QSet:
    verts, owners = [], []
    seen = set()
    for x in inst.labels:
        for y in inst.f_images[x]:
            for z in inst.g_images[x]:
                v = y + z
                if v not in seen:
                    seen.add(v)
                    verts.append(v)
                    owners.append(x)
    zy, zz = (ZERO,) * inst.y_dim, (ZERO,) * inst.z_dim
    rays = _dedupe([g + zz for g in inst.K.generators] + [zy + c for c in inst.C.generators])
    return QSet(inst.y_dim, inst.z_dim, tuple(verts), tuple(rays), not inst.convexified, tuple(owners))


# ---------------------------------------------------------------------------
# rank-one multipliers and the Lagrangian


@dataclass(frozen=True)
class RankOneOperator:
    z_star: Vector
    e: Vector
    coefficients: Vector | None = None

    def __post_init__(self):
        object.__setattr__(self, "z_star", vec(self.z_star))
        object.__setattr__(self, "e", vec(self.e))
        if self.coefficients is not None:
            object.__setattr__(self, "coefficients", vec(self.coefficients))

    @classmethod
    def from_coefficients(cls, C: Cone, coefficients: Sequence, e: Sequence) -> "RankOneOperator":
        mu = vec(coefficients)
        if any(v < 0 for v in mu):
            raise ValueError("coefficients over C+ generators must be nonnegative")
        dense = tuple(sum((w * b[j] for w, b in zip(mu, C.normals)), ZERO) for j in range(C.dimension))
        return cls(dense, e, mu)

    def in_dual_of(self, C: Cone) -> bool:
        return all(dot(self.z_star, g) >= 0 for g in C.generators)

    def __call__(self, z: Sequence) -> Vector:
        return apply_T(self, z)


def apply_T(T: RankOneOperator, z: Sequence) -> Vector:
    if len(z) != len(T.z_star):
        raise DimensionMismatch(f"z has length {len(z)}, expected {len(T.z_star)}")
    return scale(dot(T.z_star, z), T.e)


def lagrangian_points(inst: Instance, label: str, T: RankOneOperator) -> list[Vector]:
    """Generating points ``y + z*(z) e`` of ``L(label, T)``."""
    return _dedupe(add(y, apply_T(T, z)) for y in inst.f(label) for z in inst.g(label))


def lagrangian_image(inst: Instance, candidate: Candidate, T: RankOneOperator) -> PointSet:
    if isinstance(candidate, str):
        if not inst.f(candidate) or not inst.g(candidate):
            raise EmptyImage(f"label {candidate!r} has an empty image")
        return PointSet(tuple(lagrangian_points(inst, candidate, T)), "hull" if inst.convexified else "union")
    parts = []
    for x, w in inst.support(candidate):
        if not inst.f_images[x] or not inst.g_images[x]:
            raise EmptyImage(f"label {x!r} has an empty image")
        parts.append([scale(w, p) for p in lagrangian_points(inst, x, T)])
    points = []
    for combo in itertools.product(*parts):
        s = tuple(sum(c, ZERO) for c in zip(*combo))
        points.append(s)
    return PointSet(tuple(_dedupe(points)), "hull")


# ---------------------------------------------------------------------------
# file format


def _parse_rational(value, path: str) -> Scalar:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError(f"{path}: expected a rational string, got {value!r}")
    try:
        return q(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _parse_vector(value, path: str) -> Vector:
    if not isinstance(value, list):
        raise ParseError(f"{path}: expected a list")
    return tuple(_parse_rational(v, f"{path}[{i}]") for i, v in enumerate(value))


def _parse_vectors(value, path: str) -> tuple[Vector, ...]:
    if not isinstance(value, list):
        raise ParseError(f"{path}: expected a list of points")
    return tuple(_parse_vector(v, f"{path}[{i}]") for i, v in enumerate(value))


def _parse_cone(obj, path: str, dim: int) -> Cone:
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected an object")
    normals = _parse_vectors(obj.get("normals", []), f"{path}.normals")
    gens = _parse_vectors(obj.get("generators", []), f"{path}.generators")
    if "interior_witness" in obj:
        witness = _parse_vector(obj["interior_witness"], f"{path}.interior_witness")
    else:
        witness = tuple(sum((g[i] for g in gens), ZERO) for i in range(dim))
    return Cone(dim, normals, gens, witness)


def instance_from_dict(doc: Mapping, name: str = "") -> Instance:
    if not isinstance(doc, Mapping):
        raise ParseError("top level must be an object")
    for key in ("y_dim", "z_dim", "K", "C", "e", "labels"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    y_dim, z_dim = doc["y_dim"], doc["z_dim"]
    if not isinstance(y_dim, int) or not isinstance(z_dim, int) or y_dim < 1 or z_dim < 1:
        raise ParseError("y_dim and z_dim must be positive integers")
    K = _parse_cone(doc["K"], "K", y_dim)
    C = _parse_cone(doc["C"], "C", z_dim)
    e = _parse_vector(doc["e"], "e")
    labels_doc = doc["labels"]
    if not isinstance(labels_doc, dict):
        raise ParseError("labels must be an object")
    labels, f_images, g_images = [], {}, {}
    for x, images in labels_doc.items():
        if not isinstance(images, dict):
            raise ParseError(f"labels.{x}: expected an object")
        labels.append(x)
        f_images[x] = _parse_vectors(images.get("f", []), f"labels.{x}.f")
        g_images[x] = _parse_vectors(images.get("g", []), f"labels.{x}.g")
    mode = doc.get("mode", "discrete")
    return Instance(y_dim, z_dim, K, C, e, tuple(labels), f_images, g_images, mode, name)


def load_instance(text: str, name: str = "") -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(doc, name)


def instance_to_dict(inst: Instance) -> dict:
    def cone(c: Cone) -> dict:
        return {
            "normals": [fmt_vec(a) for a in c.normals],
            "generators": [fmt_vec(g) for g in c.generators],
            "interior_witness": fmt_vec(c.interior_witness),
        }

    return {
        "y_dim": inst.y_dim,
        "z_dim": inst.z_dim,
        "K": cone(inst.K),
        "C": cone(inst.C),
        "e": fmt_vec(inst.e),
        "mode": inst.mode,
        "labels": {
            x: {"f": [fmt_vec(p) for p in inst.f_images[x]], "g": [fmt_vec(p) for p in inst.g_images[x]]}
            for x in inst.labels
        },
    }


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2, sort_keys=False) + "\n"


def reference_instance(name: str, mode: str = "discrete") -> Instance:
    """The worked instances ``W1`` and ``W2``."""
    K, C = Cone.orthant(2), Cone.orthant(1)
    if name == "W1":
        f = {"a": [(0, 0)], "b": [(1, 1)]}
    elif name == "W2":
        f = {"a": [(0, 0)], "b": [(-1, -1)]}
    else:
        raise KeyError(name)
    g = {"a": [(-1,)], "b": [(1,)]}
    return Instance(2, 1, K, C, (1, 1), ("a", "b"), f, g, mode, name)
