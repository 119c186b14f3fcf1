"""Fairness verifiers: proportionality and envy checks with exact ratios."""

import random
from fractions import Fraction

import pytest

from choresolver import (
    Allocation,
    FirstItemNotInBundle,
    IncompatibleDimensions,
    Instance,
    check_envy,
    check_propx,
    check_weighted_rr_inequality,
    gen_random,
    prop_share,
)


class TestPropShare:
    def test_uniform_normalized(self, r1):
        assert prop_share(r1, 0) == Fraction(1, 2)

    def test_weighted(self, w1):
        assert prop_share(w1, 1) == Fraction(3, 4)

    def test_unnormalized_row(self):
        inst = Instance.make([[4, 3, 2, 1], [4, 3, 2, 1]])
        assert prop_share(inst, 0) == 5  # (1/2) * 10


class TestCheckPropx:
    def test_balanced_split(self, r1):
        report = check_propx(r1, Allocation.make([[0, 3], [1, 2]]))
        assert report.notion == "PROPX"
        assert report.overall_alpha == Fraction(4, 5)
        assert report.per_agent_alpha == (Fraction(4, 5), Fraction(3, 5))
        assert report.holds

    def test_all_items_to_one_agent(self):
        inst = Instance.make([["1/4"] * 4] * 4)
        report = check_propx(inst, Allocation.make([[0, 1, 2, 3], [], [], []]))
        assert report.per_agent_alpha[0] == 3
        assert not report.holds

    def test_singletons_have_zero_alpha(self, r1):
        inst = Instance.make([["1/2", "1/2"]] * 2)
        report = check_propx(inst, Allocation.make([[0], [1]]))
        assert report.overall_alpha == 0
        assert report.holds

    def test_up_to_one_removes_max_item(self, r1):
        # bundle {0,1}: residual drops 2/5 under "one", only 3/10 under "any"
        alloc = Allocation.make([[0, 1], [2, 3]])
        one = check_propx(r1, alloc, up_to="one")
        any_ = check_propx(r1, alloc, up_to="any")
        assert one.per_agent_alpha[0] == Fraction(3, 10) / Fraction(1, 2)
        assert any_.per_agent_alpha[0] == Fraction(2, 5) / Fraction(1, 2)

    def test_plain_prop_mode(self, r1):
        report = check_propx(r1, Allocation.make([[0, 3], [1, 2]]), up_to="none")
        assert report.notion == "PROP"
        assert report.overall_alpha == 1
        assert report.holds

    def test_weighted_notion_label(self, w1):
        report = check_propx(w1, Allocation.make([[0], [1, 2, 3]]))
        assert report.notion == "WPROPX"

    def test_zero_share_agent(self):
        inst = Instance.make([["1/2", "1/2"]] * 2, weights=["0", "1"])
        bad = check_propx(inst, Allocation.make([[0, 1], []]))
        assert bad.per_agent_alpha[0] is None
        assert bad.overall_alpha is None
        assert not bad.holds
        fine = check_propx(inst, Allocation.make([[0], [1]]))
        assert fine.per_agent_alpha[0] == 0
        assert fine.holds

    def test_incomplete_allocation_rejected(self, r1):
        with pytest.raises(IncompatibleDimensions):
            check_propx(r1, Allocation.make([[0], [1]], partial=True))

    def test_uniform_alpha_identity(self):
        # under uniform weights, alpha_i == n * (c_i(X_i) - min item) / c_i(M)
        rng = random.Random(11)
        for _ in range(100):
            n = rng.randint(1, 5)
            m = rng.randint(1, 9)
            inst = gen_random(n, m, rng.getrandbits(30))
            bundles = [[] for _ in range(n)]
            for j in range(m):
                bundles[rng.randrange(n)].append(j)
            report = check_propx(inst, Allocation.make(bundles))
            for i in range(n):
                bundle = bundles[i]
                if not bundle:
                    expected = Fraction(0)
                else:
                    residual = inst.cost(i, bundle) - min(
                        inst.costs[i][j] for j in bundle
                    )
                    expected = n * residual / inst.row_total(i)
                assert report.per_agent_alpha[i] == expected

    def test_alpha_is_tight(self):
        # residuals never exceed alpha * share, with equality for some agent
        rng = random.Random(13)
        for _ in range(100):
            n = rng.randint(2, 5)
            m = rng.randint(1, 9)
            inst = gen_random(n, m, rng.getrandbits(30),
                              weight_mode="dirichlet-like-rational")
            bundles = [[] for _ in range(n)]
            for j in range(m):
                bundles[rng.randrange(n)].append(j)
            report = check_propx(inst, Allocation.make(bundles))
            alpha = report.overall_alpha
            if alpha is None or alpha == 0:
                continue
            gaps = []
            for i in range(n):
                bundle = bundles[i]
                residual = (
                    inst.cost(i, bundle)
                    - min((inst.costs[i][j] for j in bundle), default=Fraction(0))
                    if bundle else Fraction(0)
                )
                gaps.append(alpha * prop_share(inst, i) - residual)
            assert all(g >= 0 for g in gaps)
            assert min(gaps) == 0  # shrinking alpha at all makes the check fail


class TestCheckEnvy:
    def test_efx_holds_on_balanced_split(self, r1):
        report = check_envy(r1, Allocation.make([[0, 3], [1, 2]]), up_to="any")
        assert report.notion == "EFX"
        assert report.holds
        assert report.note  # diagnostic alpha is labeled

    def test_efx_fails_ef1_holds(self, r1):
        alloc = Allocation.make([[0, 1], [2, 3]])
        efx = check_envy(r1, alloc, up_to="any")
        assert not efx.holds
        assert efx.per_agent_alpha[0] == Fraction(2, 5) / Fraction(3, 10)
        ef1 = check_envy(r1, alloc, up_to="one")
        assert ef1.holds

    def test_single_agent_vacuous(self):
        inst = Instance.make([["1/2", "1/2"]], weights=["1"])
        for mode in ("none", "one", "any"):
            report = check_envy(inst, Allocation.make([[0, 1]]), up_to=mode)
            assert report.holds
            assert report.overall_alpha == 0

    def test_infinite_marker_against_empty_bundle(self, r1):
        report = check_envy(r1, Allocation.make([[0, 1, 2, 3], []]), up_to="none")
        assert report.per_agent_alpha[0] is None
        assert not report.holds

    def test_plain_ef(self, r1):
        report = check_envy(r1, Allocation.make([[0, 3], [1, 2]]), up_to="none")
        assert report.notion == "EF"
        assert report.holds  # both bundles cost exactly 1/2 to everyone


class TestWeightedRoundRobinInequality:
    def test_singletons_trivially_pass(self):
        inst = Instance.make([["1/2", "1/2"]] * 2)
        alloc = Allocation.make([[0], [1]])
        assert check_weighted_rr_inequality(inst, alloc, {0: 0, 1: 1}, [0, 1])

    def test_traced_weighted_deal(self):
        inst = Instance.make(
            [["1/4", "1/5", "3/20", "3/20", "3/20", "1/10"]] * 4,
            weights=["1/10", "1/5", "3/10", "2/5"],
        )
        alloc = Allocation.make([[0], [1], [2, 5], [3, 4]])
        assert check_weighted_rr_inequality(inst, alloc, {2: 2, 3: 3}, [2, 3])

    def test_violating_allocation_fails(self):
        inst = Instance.make([["1/2", "1/4", "1/4"]] * 2)
        alloc = Allocation.make([[0, 1], [2]])
        # agent 0 keeps 1/4 after dropping her first item, agent 1's bundle
        # is worth 1/4 to her as well, but shares are equal so equality holds;
        # make it fail by declaring the cheap item as her "first"
        assert not check_weighted_rr_inequality(
            inst, alloc, {0: 1, 1: 2}, [0, 1]
        )

    def test_first_item_must_be_in_bundle(self, r1):
        alloc = Allocation.make([[0, 1], [2, 3]])
        with pytest.raises(FirstItemNotInBundle):
            check_weighted_rr_inequality(r1, alloc, {0: 2, 1: 3}, [0, 1])
