"""A small exact-rational linear-program solver.

Primal/dual simplex over ``fractions.Fraction`` with Bland-style index
rules, so runs terminate and are deterministic.  The tableau supports
appending inequality rows after a solve and re-optimizing with the dual
simplex, which is what the AnyPrice-share oracle's lazy constraint loop
needs.  Sized for tiny programs (tens of rows/columns).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None
    value: Fraction | None
    duals_ub: tuple[Fraction, ...] | None  # multipliers of the <= rows


class Tableau:
    """Dense simplex tableau for ``max c @ x`` with ``x >= 0``, any number
    of ``<=`` rows (non-negative right-hand sides) and optional equality
    rows.  The objective row is stored in ``z_j - c_j`` form, so every
    entry is non-negative at an optimum and the entries under slack
    columns are the duals of their rows.
    """

    def __init__(
        self,
        c: Sequence[Fraction],
        a_ub: Sequence[Sequence[Fraction]],
        b_ub: Sequence[Fraction],
        a_eq: Sequence[Sequence[Fraction]] = (),
        b_eq: Sequence[Fraction] = (),
    ):
        self.nv = len(c)
        self.c = [Fraction(v) for v in c]
        self.rows: list[list[Fraction]] = []
        self.basis: list[int] = []
        self.slack_cols: list[int] = []  # column of each ub row's slack
        self.obj: list[Fraction] = []
        self.width = 0
        self.status = "init"

        n_ub = len(a_ub)
        n_eq = len(a_eq)
        if any(b < 0 for b in b_ub):
            raise ValueError("b_ub must be non-negative")
        art_start = self.nv + n_ub
        self.width = self.nv + n_ub + n_eq + 1
        for r in range(n_ub):
            line = [ZERO] * self.width
            for j, v in enumerate(a_ub[r]):
                line[j] = Fraction(v)
            line[self.nv + r] = ONE
            line[-1] = Fraction(b_ub[r])
            self.rows.append(line)
            self.basis.append(self.nv + r)
            self.slack_cols.append(self.nv + r)
        for r in range(n_eq):
            line = [ZERO] * self.width
            b = Fraction(b_eq[r])
            sign = -1 if b < 0 else 1
            for j, v in enumerate(a_eq[r]):
                line[j] = sign * Fraction(v)
            line[art_start + r] = ONE
            line[-1] = sign * b
            self.rows.append(line)
            self.basis.append(art_start + r)
        self.art_start = art_start
        self.n_art = n_eq

        if n_eq:
            # phase 1: drive the artificials to zero
            obj1 = [ZERO] * self.width
            for j in range(art_start, art_start + n_eq):
                obj1[j] = ONE
            self._express(obj1)
            self.obj = obj1
            status = self._primal(allowed=art_start)
            if status != "optimal" or obj1[-1] != 0:
                self.status = "infeasible"
                return
            self._expel_artificials()

        obj2 = [ZERO] * self.width
        for j in range(self.nv):
            obj2[j] = -self.c[j]
        self._express(obj2)
        self.obj = obj2
        self.status = self._primal(allowed=art_start)

    # -- internals -----------------------------------------------------

    def _express(self, obj: list[Fraction]) -> None:
        """Eliminate basic columns from an objective row."""
        for r, bcol in enumerate(self.basis):
            coef = obj[bcol]
            if coef != 0:
                prow = self.rows[r]
                for k in range(self.width):
                    if prow[k] != 0:
                        obj[k] -= coef * prow[k]

    def _pivot(self, row: int, col: int) -> None:
        prow = self.rows[row]
        inv = ONE / prow[col]
        if inv != 1:
            prow = [v * inv for v in prow]
            self.rows[row] = prow
        for line in self.rows:
            if line is prow:
                continue
            factor = line[col]
            if factor != 0:
                for k in range(self.width):
                    if prow[k] != 0:
                        line[k] -= factor * prow[k]
        factor = self.obj[col]
        if factor != 0:
            obj = self.obj
            for k in range(self.width):
                if prow[k] != 0:
                    obj[k] -= factor * prow[k]
        self.basis[row] = col

    def _primal(self, allowed: int) -> str:
        obj = self.obj
        while True:
            enter = -1
            for j in range(allowed):  # Bland: lowest eligible index
                if obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best_num = best_den = None
            for r, line in enumerate(self.rows):
                a = line[enter]
                if a > 0:
                    num, den = line[-1], a
                    if leave < 0:
                        better = True
                    else:
                        cross = num * best_den - best_num * den
                        better = cross < 0 or (
                            cross == 0 and self.basis[r] < self.basis[leave]
                        )
                    if better:
                        best_num, best_den = num, den
                        leave = r
            if leave < 0:
                return "unbounded"
            self._pivot(leave, enter)

    def _dual(self) -> str:
        """Restore primal feasibility while keeping the reduced costs
        non-negative (used after appending a violated row)."""
        obj = self.obj
        while True:
            leave = -1
            for r, line in enumerate(self.rows):
                if line[-1] < 0 and (
                    leave < 0 or self.basis[r] < self.basis[leave]
                ):
                    leave = r
            if leave < 0:
                return "optimal"
            row = self.rows[leave]
            enter = -1
            best_num = best_den = None
            for j in range(self.art_start):
                a = row[j]
                if a < 0:
                    num, den = obj[j], -a  # ratio obj_j / -a_rj, minimized
                    if enter < 0:
                        better = True
                    else:
                        cross = num * best_den - best_num * den
                        better = cross < 0
                    if better:
                        best_num, best_den = num, den
                        enter = j
            if enter < 0:
                return "infeasible"
            self._pivot(leave, enter)

    def _expel_artificials(self) -> None:
        for r in range(len(self.rows)):
            if self.basis[r] >= self.art_start:
                line = self.rows[r]
                for j in range(self.art_start):
                    if line[j] != 0:
                        self._pivot(r, j)
                        break

    # -- public --------------------------------------------------------

    def add_ub_row(self, coeffs: Sequence[Fraction], b: Fraction) -> None:
        """Append a new <= constraint and re-optimize (dual simplex)."""
        if self.status != "optimal":
            raise ValueError(f"tableau is {self.status}")
        slack_col = self.art_start
        self.art_start += 1
        self.width += 1
        for line in self.rows:
            line.insert(slack_col, ZERO)
        self.obj.insert(slack_col, ZERO)
        for r, bcol in enumerate(self.basis):
            if bcol >= slack_col:
                self.basis[r] = bcol + 1
        self.slack_cols = [
            col + 1 if col >= slack_col else col for col in self.slack_cols
        ]

        line = [ZERO] * self.width
        for j, v in enumerate(coeffs):
            line[j] = Fraction(v)
        line[slack_col] = ONE
        line[-1] = Fraction(b)
        # express the new row in the current basis
        for r, bcol in enumerate(self.basis):
            coef = line[bcol]
            if coef != 0:
                prow = self.rows[r]
                for k in range(self.width):
                    if prow[k] != 0:
                        line[k] -= coef * prow[k]
        self.rows.append(line)
        self.basis.append(slack_col)
        self.slack_cols.append(slack_col)
        self.status = self._dual()
        if self.status == "optimal":
            self.status = self._primal(allowed=self.art_start)

    def solution(self) -> LpResult:
        if self.status != "optimal":
            return LpResult(self.status, None, None, None)
        x = [ZERO] * self.nv
        for r, bcol in enumerate(self.basis):
            if bcol < self.nv:
                x[bcol] = self.rows[r][-1]
        duals = tuple(self.obj[col] for col in self.slack_cols)
        return LpResult("optimal", tuple(x), self.obj[-1], duals)


def simplex_max(
    c: Sequence[Fraction],
    a_ub: Sequence[Sequence[Fraction]],
    b_ub: Sequence[Fraction],
    a_eq: Sequence[Sequence[Fraction]] = (),
    b_eq: Sequence[Fraction] = (),
) -> LpResult:
    """One-shot solve; see :class:`Tableau`."""
    return Tableau(c, a_ub, b_ub, a_eq, b_eq).solution()
