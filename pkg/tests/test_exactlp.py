"""Exact LP solver: hand programs, optimality certificates, incremental rows."""

import random
from fractions import Fraction

from choresolver.exactlp import Tableau, simplex_max

F = Fraction


class TestHandPrograms:
    def test_two_constraint_vertex(self):
        res = simplex_max([F(1), F(1)], [[F(1), F(2)], [F(3), F(1)]], [F(4), F(6)])
        assert res.status == "optimal"
        assert res.value == F(14, 5)
        assert res.x == (F(8, 5), F(6, 5))
        assert res.duals_ub == (F(2, 5), F(1, 5))

    def test_with_equality(self):
        res = simplex_max(
            [F(1), F(0)], [[F(1), F(0)]], [F(2)], [[F(1), F(1)]], [F(3)]
        )
        assert res.status == "optimal"
        assert res.value == 2
        assert res.x == (F(2), F(1))

    def test_unbounded(self):
        res = simplex_max([F(1), F(0)], [[F(-1), F(1)]], [F(1)])
        assert res.status == "unbounded"

    def test_infeasible_equalities(self):
        res = simplex_max(
            [F(1), F(1)], [], [],
            [[F(1), F(1)], [F(1), F(1)]], [F(1), F(2)],
        )
        assert res.status == "infeasible"

    def test_degenerate_zero_rhs(self):
        res = simplex_max([F(1)], [[F(1)], [F(2)]], [F(0), F(4)])
        assert res.status == "optimal"
        assert res.value == 0


def _random_program(rng):
    nv = rng.randint(1, 4)
    n_ub = rng.randint(1, 5)
    c = [F(rng.randint(-3, 5)) for _ in range(nv)]
    a = [[F(rng.randint(-2, 4)) for _ in range(nv)] for _ in range(n_ub)]
    b = [F(rng.randint(0, 8)) for _ in range(n_ub)]
    # cap every variable so the program is bounded
    for j in range(nv):
        row = [F(0)] * nv
        row[j] = F(1)
        a.append(row)
        b.append(F(rng.randint(1, 6)))
    return c, a, b


class TestOptimalityCertificates:
    def test_random_programs_satisfy_duality(self):
        # max c x, A x <= b, x >= 0: optimal iff x feasible, y >= 0,
        # y A >= c componentwise, and y b == c x (strong duality)
        rng = random.Random(99)
        for _ in range(120):
            c, a, b = _random_program(rng)
            res = simplex_max(c, a, b)
            assert res.status == "optimal"
            x, y = res.x, res.duals_ub
            for row, bound in zip(a, b):
                assert sum(v * xv for v, xv in zip(row, x)) <= bound
            assert all(xv >= 0 for xv in x)
            assert all(yv >= 0 for yv in y)
            for j in range(len(c)):
                reduced = sum(y[k] * a[k][j] for k in range(len(a)))
                assert reduced >= c[j]
            assert sum(yk * bk for yk, bk in zip(y, b)) == res.value
            assert sum(cj * xj for cj, xj in zip(c, x)) == res.value


class TestIncrementalRows:
    def test_matches_from_scratch(self):
        rng = random.Random(4)
        for _ in range(60):
            c, a, b = _random_program(rng)
            split = rng.randint(1, len(a))
            tab = Tableau(c, a[:split], b[:split])
            for row, bound in zip(a[split:], b[split:]):
                tab.add_ub_row(row, bound)
            incremental = tab.solution()
            scratch = simplex_max(c, a, b)
            assert incremental.status == scratch.status == "optimal"
            assert incremental.value == scratch.value

    def test_added_row_duals_still_certify(self):
        rng = random.Random(17)
        for _ in range(40):
            c, a, b = _random_program(rng)
            tab = Tableau(c, a[:1], b[:1])
            for row, bound in zip(a[1:], b[1:]):
                tab.add_ub_row(row, bound)
            res = tab.solution()
            assert res.status == "optimal"
            y = res.duals_ub
            for j in range(len(c)):
                assert sum(y[k] * a[k][j] for k in range(len(a))) >= c[j]
            assert sum(yk * bk for yk, bk in zip(y, b)) == res.value
