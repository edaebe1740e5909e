"""Exact rational linear programming.

A dense two-phase simplex on ``mpq`` tableaux with Bland's rule.  Variables
are free unless listed in ``nonneg``.  Every outcome carries an exact
certificate:

* ``OPTIMAL``: a primal witness and dual multipliers with zero duality gap;
* ``INFEASIBLE``: Farkas multipliers;
* ``UNBOUNDED``: a feasible point and an improving recession ray.

Dual and Farkas multipliers are indexed like the constraint list and refer
to each constraint written in *canonical orientation*: ``a·x >= b`` for
``>=``/``>`` rows, ``-a·x >= -b`` for ``<=``/``<`` rows, ``a·x = b`` for
equalities.  Multipliers of inequality rows are nonnegative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .rational import ONE, ZERO, Scalar, Vector, dot, q, vec


class LPError(Exception):
    pass


class MalformedProblem(LPError, ValueError):
    pass


class StrictRelationPresent(LPError, ValueError):
    pass


class SystemFeasible(LPError):
    """Raised when a Farkas certificate is requested for a feasible system."""


class Relation(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="
    LT = "<"
    GT = ">"

    @property
    def strict(self) -> bool:
        return self in (Relation.LT, Relation.GT)


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    STRICTLY_FEASIBLE = "StrictlyFeasible"
    STRICTLY_INFEASIBLE = "StrictlyInfeasible"


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: Vector
    relation: Relation
    rhs: Scalar

    def __post_init__(self):
        object.__setattr__(self, "coefficients", vec(self.coefficients))
        object.__setattr__(self, "relation", Relation(self.relation))
        object.__setattr__(self, "rhs", q(self.rhs))

    def slack(self, x: Sequence) -> Scalar:
        """``a·x - b`` in canonical orientation (nonnegative iff satisfied weakly)."""
        v = dot(self.coefficients, x) - self.rhs
        return -v if self.relation in (Relation.LE, Relation.LT) else v

    def satisfied_by(self, x: Sequence) -> bool:
        s = self.slack(x)
        if self.relation is Relation.EQ:
            return s == 0
        if self.relation.strict:
            return s > 0
        return s >= 0

    def canonical(self) -> tuple[Vector, Scalar]:
        if self.relation in (Relation.LE, Relation.LT):
            return tuple(-a for a in self.coefficients), -self.rhs
        return self.coefficients, self.rhs


def ge(coefficients, rhs=0) -> LinearConstraint:
    return LinearConstraint(coefficients, Relation.GE, rhs)


def le(coefficients, rhs=0) -> LinearConstraint:
    return LinearConstraint(coefficients, Relation.LE, rhs)


def eq(coefficients, rhs=0) -> LinearConstraint:
    return LinearConstraint(coefficients, Relation.EQ, rhs)


def gt(coefficients, rhs=0) -> LinearConstraint:
    return LinearConstraint(coefficients, Relation.GT, rhs)


def lt(coefficients, rhs=0) -> LinearConstraint:
    return LinearConstraint(coefficients, Relation.LT, rhs)


@dataclass(frozen=True)
class LPProblem:
    dimension: int
    objective: Vector
    sense: str = "minimize"
    constraints: tuple[LinearConstraint, ...] = ()
    nonneg: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "objective", vec(self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "nonneg", frozenset(self.nonneg))
        if self.sense not in ("minimize", "maximize"):
            raise MalformedProblem(f"unknown sense {self.sense!r}")


@dataclass(frozen=True)
class LPOutcome:
    status: Status
    primal_witness: Vector | None = None
    value: Scalar | None = None
    dual_certificate: Vector | None = None
    ray: Vector | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    @property
    def feasible(self) -> bool:
        return self.status in (Status.OPTIMAL, Status.UNBOUNDED, Status.STRICTLY_FEASIBLE)


# ---------------------------------------------------------------------------
# tableau kernel


@dataclass
class _Result:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None = None
    duals: list | None = None
    ray: list | None = None


def _check_dims(constraints: Iterable[LinearConstraint], n: int) -> None:
    for i, c in enumerate(constraints):
        if len(c.coefficients) != n:
            raise MalformedProblem(
                f"constraint {i} has {len(c.coefficients)} coefficients, expected {n}"
            )


class _Tableau:
    """Standard form ``min c·s, A s = b, s >= 0, b >= 0`` built from canonical rows."""

    def __init__(self, rows, n: int, nonneg: frozenset[int]):
        self.n = n
        m = len(rows)
        # structural columns: one per nonneg var, two per free var
        self.var_cols: list[tuple[int, int | None]] = []
        col = 0
        for j in range(n):
            if j in nonneg:
                self.var_cols.append((col, None))
                col += 1
            else:
                self.var_cols.append((col, col + 1))
                col += 2
        n_struct = col
        slack_of = {}
        for i, (_, kind, _) in enumerate(rows):
            if kind == "ge":
                slack_of[i] = col
                col += 1
        self.sign = [ONE if b >= 0 else -ONE for (_, _, b) in rows]
        self.init_col = [0] * m
        self.artificial: set[int] = set()
        need_art = []
        for i, (_, kind, _) in enumerate(rows):
            if kind == "ge" and self.sign[i] < 0:
                self.init_col[i] = slack_of[i]
            else:
                need_art.append(i)
        for i in need_art:
            self.init_col[i] = col
            self.artificial.add(col)
            col += 1
        self.width = col
        self.n_struct = n_struct
        W = col
        T = []
        for i, (a, kind, b) in enumerate(rows):
            s = self.sign[i]
            row = [ZERO] * (W + 1)
            for j, aj in enumerate(a):
                if aj:
                    p, neg = self.var_cols[j]
                    row[p] = s * aj
                    if neg is not None:
                        row[neg] = -s * aj
            if i in slack_of:
                row[slack_of[i]] = -s
            if self.init_col[i] in self.artificial:
                row[self.init_col[i]] = ONE
            row[W] = s * b
            T.append(row)
        self.T = T
        self.basis = list(self.init_col)
        self.m = m

    def _pivot(self, r: int, j: int, d: list) -> None:
        T = self.T
        pr = T[r]
        p = pr[j]
        if p != 1:
            inv = 1 / p
            for k, v in enumerate(pr):
                if v:
                    pr[k] = v * inv
        nz = [k for k, v in enumerate(pr) if v]
        for i, row in enumerate(T):
            if i != r:
                f = row[j]
                if f:
                    for k in nz:
                        row[k] -= f * pr[k]
        f = d[j]
        if f:
            for k in nz:
                d[k] -= f * pr[k]
        self.basis[r] = j

    def _reduced(self, cost: list) -> list:
        d = list(cost) + [ZERO]
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.T[r]
                for k, v in enumerate(row):
                    if v:
                        d[k] -= cb * v
        return d

    def _bland(self, d: list, allowed) -> int | None:
        """Run Bland pivots; return ``None`` at optimality or the unbounded column."""
        W = self.width
        T = self.T
        while True:
            j = next((k for k in allowed if d[k] < 0), None)
            if j is None:
                return None
            best = None
            for r in range(self.m):
                a = T[r][j]
                if a > 0:
                    key = (T[r][W] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return j
            self._pivot(best[1], j, d)

    def _duals(self, cost: list) -> list:
        T = self.T
        y = []
        for r in range(self.m):
            c = self.init_col[r]
            s = ZERO
            for k, b in enumerate(self.basis):
                cb = cost[b]
                if cb:
                    v = T[k][c]
                    if v:
                        s += cb * v
            y.append(s * self.sign[r])
        return y

    def _values(self) -> list:
        vals = [ZERO] * self.width
        for r, b in enumerate(self.basis):
            vals[b] = self.T[r][self.width]
        return vals

    def _to_x(self, vals: list) -> list:
        x = []
        for p, neg in self.var_cols:
            v = vals[p]
            if neg is not None:
                v = v - vals[neg]
            x.append(v)
        return x

    def solve(self, cost_x: Sequence | None) -> _Result:
        W = self.width
        if self.artificial:
            c1 = [ONE if k in self.artificial else ZERO for k in range(W)]
            d = self._reduced(c1)
            self._bland(d, range(W))
            if -d[W] > 0:
                return _Result("infeasible", duals=self._duals(c1))
            for r in range(self.m):
                if self.basis[r] in self.artificial:
                    row = self.T[r]
                    j = next((k for k in range(W) if k not in self.artificial and row[k]), None)
                    if j is not None:
                        self._pivot(r, j, d)
        if cost_x is None:
            return _Result("optimal", x=self._to_x(self._values()))
        cost = [ZERO] * W
        for j, cj in enumerate(cost_x):
            p, neg = self.var_cols[j]
            cost[p] = cj
            if neg is not None:
                cost[neg] = -cj
        d = self._reduced(cost)
        allowed = [k for k in range(W) if k not in self.artificial]
        j = self._bland(d, allowed)
        vals = self._values()
        if j is not None:
            ray = [ZERO] * W
            ray[j] = ONE
            for r, b in enumerate(self.basis):
                ray[b] = -self.T[r][j]
            return _Result("unbounded", x=self._to_x(vals), ray=self._to_x(ray))
        return _Result("optimal", x=self._to_x(vals), duals=self._duals(cost))


def _canonical_rows(constraints: Sequence[LinearConstraint]):
    rows = []
    for c in constraints:
        a, b = c.canonical()
        rows.append((a, "eq" if c.relation is Relation.EQ else "ge", b))
    return rows


# ---------------------------------------------------------------------------
# public operations


def solve_lp(problem: LPProblem) -> LPOutcome:
    """Optimize a linear objective over weak linear constraints, exactly.

    For ``OPTIMAL`` the dual certificate ``u`` satisfies, with ``c`` the
    objective negated when maximizing, ``sum u_i a_i = c`` on free variables
    (``<=`` on nonnegative ones) and ``sum u_i b_i`` equal to the optimal
    value of ``min c·x``.
    """
    n = problem.dimension
    if n < 1:
        raise MalformedProblem("dimension must be at least 1")
    if len(problem.objective) != n:
        raise MalformedProblem(f"objective has {len(problem.objective)} entries, expected {n}")
    _check_dims(problem.constraints, n)
    if any(c.relation.strict for c in problem.constraints):
        raise StrictRelationPresent("strict relations belong in strict_feasibility")
    if any(not 0 <= j < n for j in problem.nonneg):
        raise MalformedProblem("nonneg index out of range")
    cost = problem.objective
    if problem.sense == "maximize":
        cost = tuple(-c for c in cost)
    tab = _Tableau(_canonical_rows(problem.constraints), n, problem.nonneg)
    res = tab.solve(cost)
    if res.status == "infeasible":
        return LPOutcome(Status.INFEASIBLE, dual_certificate=tuple(res.duals))
    x = tuple(res.x)
    if res.status == "unbounded":
        return LPOutcome(Status.UNBOUNDED, primal_witness=x, ray=tuple(res.ray))
    return LPOutcome(
        Status.OPTIMAL,
        primal_witness=x,
        value=dot(problem.objective, x),
        dual_certificate=tuple(res.duals),
    )


def feasible_point(
    constraints: Sequence[LinearConstraint], dimension: int, nonneg: Iterable[int] = ()
) -> Vector | None:
    """A point satisfying every weak constraint, or ``None``."""
    out = solve_lp(LPProblem(dimension, (ZERO,) * dimension, "minimize", constraints, nonneg))
    return out.primal_witness if out.optimal else None


def strict_feasibility(
    constraints: Sequence[LinearConstraint],
    dimension: int | None = None,
    nonneg: Iterable[int] = (),
) -> LPOutcome:
    """Decide a system that may mix strict and weak relations.

    Maximizes a shared slack ``t <= 1`` added to every strict row; the system
    is strictly feasible iff the optimum is positive.  ``value`` holds the
    optimal slack.  On failure ``dual_certificate`` is a Motzkin alternative:
    nonnegative multipliers (canonical orientation) whose combination of the
    left-hand sides vanishes while the right-hand sides combine to something
    positive, or to something nonnegative with positive weight on a strict row.
    """
    constraints = list(constraints)
    if dimension is None:
        if not constraints:
            raise MalformedProblem("cannot infer dimension of an empty system")
        dimension = len(constraints[0].coefficients)
    n = dimension
    _check_dims(constraints, n)
    nonneg = frozenset(nonneg)
    rows = []
    for c in constraints:
        a, b = c.canonical()
        tcoef = -ONE if c.relation.strict else ZERO
        rows.append((a + (tcoef,), "eq" if c.relation is Relation.EQ else "ge", b))
    rows.append(((ZERO,) * n + (-ONE,), "ge", -ONE))
    cost = (ZERO,) * n + (-ONE,)
    tab = _Tableau(rows, n + 1, nonneg)
    res = tab.solve(cost)
    if res.status == "infeasible":
        return LPOutcome(Status.STRICTLY_INFEASIBLE, dual_certificate=tuple(res.duals[:-1]))
    # t <= 1 keeps the maximization bounded
    assert res.status == "optimal"
    t = res.x[-1]
    x = tuple(res.x[:-1])
    if t > 0:
        return LPOutcome(Status.STRICTLY_FEASIBLE, primal_witness=x, value=t)
    return LPOutcome(
        Status.STRICTLY_INFEASIBLE, primal_witness=x, value=t, dual_certificate=tuple(res.duals[:-1])
    )


def farkas_certificate(
    constraints: Sequence[LinearConstraint],
    dimension: int | None = None,
    nonneg: Iterable[int] = (),
) -> Vector:
    """Nonnegative multipliers proving a weak system infeasible.

    The canonical rows combine to ``0 >= sum u_i b_i > 0`` (left-hand side
    identically zero on free variables, nonpositive on nonnegative ones).
    """
    constraints = list(constraints)
    if any(c.relation.strict for c in constraints):
        raise StrictRelationPresent("farkas_certificate takes weak relations only")
    if dimension is None:
        if not constraints:
            raise SystemFeasible("empty system is feasible")
        dimension = len(constraints[0].coefficients)
    _check_dims(constraints, dimension)
    tab = _Tableau(_canonical_rows(constraints), dimension, frozenset(nonneg))
    res = tab.solve(None)
    if res.status != "infeasible":
        raise SystemFeasible("system is feasible; no certificate exists")
    return tuple(res.duals)


# ---------------------------------------------------------------------------
# certificate checks


def _combined(constraints: Sequence[LinearConstraint], u: Sequence, n: int):
    lhs = [ZERO] * n
    rhs = ZERO
    for c, ui in zip(constraints, u):
        if ui:
            a, b = c.canonical()
            for j, aj in enumerate(a):
                lhs[j] += ui * aj
            rhs += ui * b
    return lhs, rhs


def _signs_ok(constraints, u) -> bool:
    return len(u) == len(constraints) and all(
        ui >= 0 for c, ui in zip(constraints, u) if c.relation is not Relation.EQ
    )


def check_farkas(
    constraints: Sequence[LinearConstraint], u: Sequence, dimension: int, nonneg: Iterable[int] = ()
) -> bool:
    """True iff ``u`` proves the (strict or weak) system infeasible."""
    if not _signs_ok(constraints, u):
        return False
    nonneg = frozenset(nonneg)
    lhs, rhs = _combined(constraints, u, dimension)
    if any(v > 0 if j in nonneg else v != 0 for j, v in enumerate(lhs)):
        return False
    if rhs > 0:
        return True
    strict_weight = sum((ui for c, ui in zip(constraints, u) if c.relation.strict), ZERO)
    return rhs >= 0 and strict_weight > 0


def check_dual(problem: LPProblem, outcome: LPOutcome) -> bool:
    """Exact strong-duality check of an ``OPTIMAL`` outcome."""
    u = outcome.dual_certificate
    if outcome.status is not Status.OPTIMAL or u is None:
        return False
    if not _signs_ok(problem.constraints, u):
        return False
    cost = problem.objective
    sign = ONE
    if problem.sense == "maximize":
        cost = tuple(-c for c in cost)
        sign = -ONE
    lhs, rhs = _combined(problem.constraints, u, problem.dimension)
    for j, (v, cj) in enumerate(zip(lhs, cost)):
        if j in problem.nonneg:
            if v > cj:
                return False
        elif v != cj:
            return False
    return rhs == sign * outcome.value


def check_primal(problem: LPProblem, x: Sequence) -> bool:
    return len(x) == problem.dimension and all(
        c.satisfied_by(x) for c in problem.constraints
    ) and all(x[j] >= 0 for j in problem.nonneg)


def check_ray(problem: LPProblem, ray: Sequence) -> bool:
    """``ray`` is a recession direction that strictly improves the objective."""
    for c in problem.constraints:
        a, _ = c.canonical()
        s = dot(a, ray)
        if c.relation is Relation.EQ and s != 0:
            return False
        if c.relation is not Relation.EQ and s < 0:
            return False
    if any(ray[j] < 0 for j in problem.nonneg):
        return False
    gain = dot(problem.objective, ray)
    return gain < 0 if problem.sense == "minimize" else gain > 0
