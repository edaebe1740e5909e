"""Multiplier synthesis and verification for rank-one multipliers ``T(z) = z*(z) e``.

Separating functionals ``(y*, z*) ∈ K+ × C+`` are searched in coefficient
form over the dual-cone generators (the cone normals), so every search is
a linear feasibility problem.  The condition ``(y*, z*) ≠ (0, 0)`` is
imposed through two normalizations tried in order: ``y*(e) = 1`` and then
``y*(e) + Σ μ_j = 1``, where ``μ`` are the coefficients of ``z*``.  Among
feasible functionals the LP picks the one whose smallest ``y*`` coefficient
is largest and whose ``z*`` is smallest, which makes certificates
canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .criteria import SolutionVerdict, Violation, compute_B
from .instance import Instance, RankOneOperator, build_Q, in_minus_cone, lagrangian_points
from .lp import LPProblem, Status, le, solve_lp
from .model import Model
from .rational import ONE, ZERO, Scalar, Vector, dot, lincomb, q, scale, sub

PHASES = ("y_star_e_equals_1", "coefficient_sum_equals_1")


@dataclass(frozen=True)
class MultiplierCertificate:
    y0: Vector
    z0: Vector | None
    y_star: Vector
    y_coefficients: Vector
    z_star: Vector
    z_coefficients: Vector
    normalization: str
    inf_Q_value: Scalar
    epsilon: Scalar
    slackness: tuple[tuple[Vector, Scalar], ...]

    def operator(self, e: Sequence) -> RankOneOperator:
        return RankOneOperator(self.z_star, e, self.z_coefficients)

    def separation_holds(self, e: Sequence) -> bool:
        lhs = dot(self.y_star, sub(self.y0, scale(self.epsilon, e)))
        return lhs <= self.inf_Q_value

    @property
    def y_star_nonzero(self) -> bool:
        return any(self.y_star)


@dataclass(frozen=True)
class SlacknessReport:
    epsilon: Scalar
    per_z: tuple[tuple[Vector, Scalar, Vector], ...]
    min_slack: Scalar
    zero_on_feasible_part: bool
    zero_everywhere: bool

    def bound_holds(self, y_star_e=ONE) -> bool:
        """``z*(z) >= -ε y*(e)`` on every constraint point of ``x0``."""
        return self.min_slack >= -self.epsilon * y_star_e


def _functional_vars(m: Model, inst: Instance):
    eta = m.vars(len(inst.K.normals))
    mu = m.vars(len(inst.C.normals))
    t = m.var(nonneg=False)
    for i in eta:
        m.add({i: 1, t: -1}, ">=", 0)
    return eta, mu, t


def _normalize(m: Model, inst: Instance, eta, mu, phase: str, e=None) -> None:
    e = inst.e if e is None else e
    terms = {i: dot(a, e) for i, a in zip(eta, inst.K.normals)}
    if phase == PHASES[1]:
        terms.update({j: 1 for j in mu})
    m.add(terms, "=", 1)


def _canonical_objective(eta, mu, t) -> dict:
    obj = {t: 1}
    obj.update({j: -1 for j in mu})
    return obj


def _dense(coeffs: Sequence, normals: Sequence[Vector], dim: int) -> Vector:
    return lincomb(coeffs, normals, dim)


def find_multiplier(inst: Instance, x0: str, eps=0) -> MultiplierCertificate | None:
    """Search ``y0 ∈ f(x0)`` and ``(y*, z*)`` with ``y*(y0 - εe) <= inf_Q y*(y) + z*(z)``."""
    eps = q(eps)
    f0 = inst.f(x0)
    Q = build_Q(inst)
    if not f0 or not Q.vertices:
        return None
    Kn, Cn = inst.K.normals, inst.C.normals
    for phase in PHASES:
        for y0 in f0:
            target = sub(y0, scale(eps, inst.e))
            m = Model()
            eta, mu, t = _functional_vars(m, inst)
            for v in Q.vertices:
                vy, vz = Q.split(v)
                terms = {i: dot(a, sub(vy, target)) for i, a in zip(eta, Kn)}
                terms.update({j: dot(b, vz) for j, b in zip(mu, Cn)})
                m.add(terms, ">=", 0)
            _normalize(m, inst, eta, mu, phase)
            out = m.solve(_canonical_objective(eta, mu, t), "maximize")
            if not out.optimal:
                continue
            sol = out.primal_witness
            ec = tuple(sol[i] for i in eta)
            mc = tuple(sol[j] for j in mu)
            ys = _dense(ec, Kn, inst.y_dim)
            zs = _dense(mc, Cn, inst.z_dim)
            g0 = inst.g_images[x0]
            slack = tuple((z, dot(zs, z)) for z in g0)
            z0 = min(g0, key=lambda z: dot(zs, z)) if g0 else None
            return MultiplierCertificate(
                y0=y0,
                z0=z0,
                y_star=ys,
                y_coefficients=ec,
                z_star=zs,
                z_coefficients=mc,
                normalization=phase,
                inf_Q_value=Q.inf_scalarization(ys, zs),
                epsilon=eps,
                slackness=slack,
            )
    return None


def slackness_report(source, inst: Instance, x0: str, eps=None) -> SlacknessReport:
    """Per-point values ``z*(z)`` and ``T(z)`` over ``g(x0)``.

    ``source`` is a :class:`MultiplierCertificate` or a :class:`RankOneOperator`.
    """
    if isinstance(source, MultiplierCertificate):
        T = source.operator(inst.e)
        eps = source.epsilon if eps is None else q(eps)
    else:
        T = source
        eps = ZERO if eps is None else q(eps)
    per_z = tuple((z, dot(T.z_star, z), T(z)) for z in inst.g(x0))
    values = [s for _, s, _ in per_z]
    min_slack = min(values) if values else ZERO
    zero_feasible = all(s == 0 for z, s, _ in per_z if in_minus_cone(z, inst.C))
    return SlacknessReport(eps, per_z, min_slack, zero_feasible, all(s == 0 for s in values))


# ---------------------------------------------------------------------------
# the Lagrangian problem


def check_wmin_LPT(inst: Instance, x0: str, T: RankOneOperator, eps=0) -> SolutionVerdict:
    """Vector criterion for ``x0`` in ``Min L(x, T)`` over the whole domain."""
    eps = q(eps)
    inst.f(x0)
    if not inst.f_images[x0] or not inst.g_images[x0]:
        return SolutionVerdict(False, violations=(Violation(None, x0, None, "empty Lagrangian image"),))
    pts = {x: lagrangian_points(inst, x, T) for x in inst.labels if inst.f_images[x] and inst.g_images[x]}
    violations = []
    for w0 in pts[x0]:
        target = sub(w0, scale(eps, T.e))
        hit = None
        if not inst.convexified:
            for x, P in pts.items():
                p = next((p for p in P if inst.K.contains(sub(target, p), interior=True)), None)
                if p is not None:
                    hit = (x, p)
                    break
        else:
            flat = [(x, p) for x, P in pts.items() for p in P]
            m = Model()
            th = m.vars(len(flat))
            m.add({i: 1 for i in th}, "=", 1)
            for a in inst.K.normals:
                m.add({i: -dot(a, p) for i, (_, p) in zip(th, flat)}, ">", -dot(a, target))
            out = m.strict()
            if out.status is Status.STRICTLY_FEASIBLE:
                sol = out.primal_witness
                lam = tuple(
                    sum((sol[i] for i, (x, _) in zip(th, flat) if x == lab), ZERO) for lab in inst.labels
                )
                hit = (lam, lincomb([sol[i] for i in th], [p for _, p in flat], inst.y_dim))
        if hit is None:
            return SolutionVerdict(True, certifying_y0=w0)
        violations.append(Violation(w0, hit[0], hit[1], "Lagrangian point in w0 - εe - int K"))
    return SolutionVerdict(False, violations=tuple(violations))


@dataclass(frozen=True)
class LPTWitness:
    y0: Vector
    z0: Vector
    y_star: Vector
    inf_Q_value: Scalar


def characterize_LPT(
    inst: Instance, x0: str, T: RankOneOperator, eps=0, require_nonneg_slack: bool = False
) -> LPTWitness | None:
    """Search ``(y0, z0) ∈ f(x0) × g(x0)`` and ``y* ∈ K+``, ``y*(e) = 1`` with
    ``y*(y0) + z*(z0) - ε <= inf_Q y*(y) + z*(z)``."""
    eps = q(eps)
    zs = T.z_star
    if not T.in_dual_of(inst.C):
        raise ValueError("z* is not in the dual of C")
    Q = build_Q(inst)
    if not Q.vertices:
        return None
    Kn = inst.K.normals
    for y0 in inst.f(x0):
        for z0 in inst.g(x0):
            if require_nonneg_slack and dot(zs, z0) < 0:
                continue
            shift = dot(zs, z0) - eps
            m = Model()
            eta, mu, t = _functional_vars(m, inst)
            for v in Q.vertices:
                vy, vz = Q.split(v)
                m.add({i: dot(a, sub(vy, y0)) for i, a in zip(eta, Kn)}, ">=", shift - dot(zs, vz))
            _normalize(m, inst, eta, [], PHASES[0], e=T.e)
            out = m.solve({t: 1}, "maximize")
            if out.optimal:
                ys = _dense([out.primal_witness[i] for i in eta], Kn, inst.y_dim)
                return LPTWitness(y0, z0, ys, Q.inf_scalarization(ys, zs))
    return None


# ---------------------------------------------------------------------------
# lattice separation and the set H(x0)


@dataclass(frozen=True)
class LatticeSeparation:
    y_star: Vector
    z_star: Vector
    threshold: Scalar
    normalization: str


def l_wmin_separation(inst: Instance, x0: str, phases: Sequence[str] = PHASES) -> LatticeSeparation | None:
    """``(y*, z*)`` with ``sup over B(x0) of y* <= inf_Q y*(y) + z*(z)``.

    The supremum over the polyhedron ``B`` is dualized: it is at most ``s``
    iff some ``ν >= 0`` has ``Σ ν_i a_i = y*`` and ``Σ ν_i offset_i <= s``.
    """
    B = compute_B(inst, x0)
    Q = build_Q(inst)
    if not Q.vertices:
        return None
    Kn, Cn = inst.K.normals, inst.C.normals
    for phase in phases:
        m = Model()
        eta, mu, t = _functional_vars(m, inst)
        nu = m.vars(len(B.normals))
        s = m.var(nonneg=False)
        for j in range(inst.y_dim):
            terms = {i: a[j] for i, a in zip(nu, B.normals)}
            for i, a in zip(eta, Kn):
                terms[i] = terms.get(i, ZERO) - a[j]
            m.add(terms, "=", 0)
        terms = {i: o for i, o in zip(nu, B.offsets)}
        terms[s] = -1
        m.add(terms, "<=", 0)
        for v in Q.vertices:
            vy, vz = Q.split(v)
            terms = {i: dot(a, vy) for i, a in zip(eta, Kn)}
            terms.update({j: dot(b, vz) for j, b in zip(mu, Cn)})
            terms[s] = -1
            m.add(terms, ">=", 0)
        _normalize(m, inst, eta, mu, phase)
        out = m.solve(_canonical_objective(eta, mu, t), "maximize")
        if out.optimal:
            sol = out.primal_witness
            ys = _dense([sol[i] for i in eta], Kn, inst.y_dim)
            zs = _dense([sol[j] for j in mu], Cn, inst.z_dim)
            return LatticeSeparation(ys, zs, sol[s], phase)
    return None


def sup_over_B(inst: Instance, x0: str, y_star: Sequence) -> Scalar | None:
    """``sup over B(x0) of y*``; ``None`` stands for plus infinity."""
    B = compute_B(inst, x0)
    rows = [le(a, o) for a, o in zip(B.normals, B.offsets)]
    out = solve_lp(LPProblem(inst.y_dim, y_star, "maximize", rows))
    if out.status is Status.UNBOUNDED:
        return None
    return out.value


@dataclass(frozen=True)
class HReport:
    admissible: bool
    member: bool
    y_star: Vector | None = None
    z_star: Vector | None = None
    sup_B: Scalar | None = None
    inf_Q: Scalar | None = None
    attainment: tuple[Vector, Vector] | None = None


def H_analysis(inst: Instance, x0: str, probe: tuple[Sequence, Sequence] | None = None) -> HReport:
    """Membership of a functional in ``H(x0)``, or a search for one.

    ``H(x0)`` holds the pairs with ``y* ∈ K+ \\ {0}``, ``z* ∈ C+`` and
    ``sup over B(x0) of y* <= inf_Q y*(y) + z*(z)``.  For a member, the
    attainment scan looks for ``(y0, z0) ∈ f(x0) × g(x0)`` reaching the
    infimum exactly.
    """
    Q = build_Q(inst)
    if probe is None:
        sep = l_wmin_separation(inst, x0, phases=PHASES[:1])
        if sep is None:
            return HReport(admissible=True, member=False)
        ys, zs = sep.y_star, sep.z_star
    else:
        ys, zs = tuple(map(q, probe[0])), tuple(map(q, probe[1]))
        admissible = (
            any(ys)
            and all(dot(ys, g) >= 0 for g in inst.K.generators)
            and all(dot(zs, c) >= 0 for c in inst.C.generators)
        )
        if not admissible:
            return HReport(admissible=False, member=False, y_star=ys, z_star=zs)
    sup_b = sup_over_B(inst, x0, ys)
    inf_q = Q.inf_scalarization_lp(ys, zs)
    member = sup_b is not None and inf_q is not None and sup_b <= inf_q
    attain = None
    if member:
        attain = next(
            ((y, z) for y in inst.f(x0) for z in inst.g(x0) if dot(ys, y) + dot(zs, z) == inf_q),
            None,
        )
    return HReport(True, member, ys, zs, sup_b, inf_q, attain)
