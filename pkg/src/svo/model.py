"""Small sparse builder on top of the exact LP kernel."""

from __future__ import annotations

from typing import Iterable, Mapping

from .lp import LinearConstraint, LPOutcome, LPProblem, Relation, solve_lp, strict_feasibility
from .rational import ZERO, q


class Model:
    def __init__(self):
        self.n = 0
        self.nonneg: set[int] = set()
        self._rows: list[tuple[dict, Relation, object]] = []

    def var(self, nonneg: bool = True) -> int:
        i = self.n
        self.n += 1
        if nonneg:
            self.nonneg.add(i)
        return i

    def vars(self, k: int, nonneg: bool = True) -> list[int]:
        return [self.var(nonneg) for _ in range(k)]

    def add(self, terms: Mapping[int, object] | Iterable[tuple[int, object]], relation, rhs=0) -> None:
        row: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for i, c in items:
            c = q(c)
            if c:
                row[i] = row.get(i, ZERO) + c
        self._rows.append((row, Relation(relation), q(rhs)))

    def constraints(self) -> list[LinearConstraint]:
        out = []
        for row, rel, rhs in self._rows:
            coeffs = [ZERO] * self.n
            for i, c in row.items():
                coeffs[i] = c
            out.append(LinearConstraint(coeffs, rel, rhs))
        return out

    def solve(self, objective: Mapping[int, object] | None = None, sense: str = "minimize") -> LPOutcome:
        c = [ZERO] * self.n
        for i, v in (objective or {}).items():
            c[i] = q(v)
        return solve_lp(LPProblem(self.n, c, sense, self.constraints(), self.nonneg))

    def strict(self) -> LPOutcome:
        return strict_feasibility(self.constraints(), self.n, self.nonneg)
