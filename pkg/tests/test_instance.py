"""Instance model: parsing, validation, normalization, the IDO transform,
and social-cost bookkeeping."""

import itertools
import json
import random
from fractions import Fraction

import pytest

from choresolver import (
    Allocation,
    IncompatibleDimensions,
    Instance,
    MalformedRational,
    NonNegativityViolation,
    WeightSumMismatch,
    ZeroTotalCost,
    gen_random,
    is_ido,
    load_instance,
    optimal_allocation,
    optimal_social_cost,
    parse_rational,
    social_cost,
    to_ido,
)


class TestParseRational:
    def test_accepts_ints_and_strings(self):
        assert parse_rational(3) == 3
        assert parse_rational("2/5") == Fraction(2, 5)
        assert parse_rational("7") == 7
        assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)

    @pytest.mark.parametrize("bad", [1.5, True, None, "one half", "1/0", [1]])
    def test_rejects_non_rationals(self, bad):
        with pytest.raises(MalformedRational):
            parse_rational(bad)

    def test_format_round_trip(self):
        from choresolver import format_rational

        for value in (Fraction(2, 5), Fraction(3), Fraction(0), Fraction(-1, 7)):
            assert parse_rational(format_rational(value)) == value


class TestLoadInstance:
    def test_default_uniform_weights(self):
        doc = {"n": 2, "m": 4, "costs": [["2/5", "3/10", "1/5", "1/10"]] * 2}
        inst = load_instance(json.dumps(doc))
        assert inst.weights == (Fraction(1, 2), Fraction(1, 2))

    def test_auto_normalize_divides_by_row_sum(self):
        doc = {"costs": [[4, 3, 2, 1]], "weights": ["1"], "normalize": True}
        inst = load_instance(doc)
        assert inst.costs[0] == (
            Fraction(2, 5), Fraction(3, 10), Fraction(1, 5), Fraction(1, 10),
        )

    def test_weight_sum_mismatch(self):
        doc = {"costs": [[1, 1], [1, 1]], "weights": ["1/4", "1/2"]}
        with pytest.raises(WeightSumMismatch):
            load_instance(doc)

    def test_negative_cost_rejected(self):
        with pytest.raises(NonNegativityViolation):
            load_instance({"costs": [[1, -1]]})

    def test_negative_weight_rejected(self):
        with pytest.raises(NonNegativityViolation):
            load_instance({"costs": [[1], [1]], "weights": ["3/2", "-1/2"]})

    def test_zero_row_normalization_fails(self):
        with pytest.raises(ZeroTotalCost):
            load_instance({"costs": [[0, 0], [1, 1]], "normalize": True})

    def test_declared_shape_must_match(self):
        with pytest.raises(MalformedRational):
            load_instance({"n": 3, "costs": [[1, 1], [1, 1]]})
        with pytest.raises(MalformedRational):
            load_instance({"m": 5, "costs": [[1, 1], [1, 1]]})

    def test_float_costs_rejected(self):
        with pytest.raises(MalformedRational):
            load_instance({"costs": [[0.5, 0.5]]})

    def test_round_trip(self, r1):
        again = load_instance(r1.to_json())
        assert again == r1

    def test_explicit_normalize_override(self):
        doc = {"costs": [[4, 3, 2, 1]], "weights": ["1"], "normalize": True}
        raw = load_instance(doc, normalize=False)
        assert raw.costs[0] == (4, 3, 2, 1)

    def test_empty_items_allowed(self):
        inst = load_instance({"costs": [[], []]})
        assert inst.m == 0 and inst.n == 2


class TestAllocation:
    def test_overlapping_bundles_rejected(self):
        with pytest.raises(ValueError):
            Allocation.make([[0, 1], [1, 2]])

    def test_validate_against_instance(self, r1):
        alloc = Allocation.make([[0, 1], [2]])
        with pytest.raises(IncompatibleDimensions):
            alloc.validate_for(r1)  # item 3 missing
        with pytest.raises(IncompatibleDimensions):
            Allocation.make([[0], [1], [2, 3]]).validate_for(r1)  # 3 bundles
        with pytest.raises(IncompatibleDimensions):
            Allocation.make([[0, 5], [1, 2]]).validate_for(r1)  # unknown item

    def test_partial_flag(self, r1):
        alloc = Allocation.make([[0], [1]], partial=True)
        alloc.validate_for(r1, require_complete=False)
        with pytest.raises(IncompatibleDimensions):
            alloc.validate_for(r1, require_complete=True)


class TestIsIdo:
    def test_sorted_rows(self, r1):
        assert is_ido(r1)

    def test_increasing_row(self, g1):
        assert not is_ido(g1)

    @pytest.mark.parametrize("m", [0, 1])
    def test_tiny_instances_vacuous(self, m):
        inst = Instance.make([["1"] * m or [], ["1"] * m or []]) if m else \
            Instance(2, 0, ((), ()), (Fraction(1, 2), Fraction(1, 2)))
        assert is_ido(inst)


class TestToIdo:
    def test_opposite_orders(self, g1):
        witness = to_ido(g1)
        assert witness.permutations == ((0, 1, 2), (2, 1, 0))
        expected = (Fraction(1, 2), Fraction(3, 10), Fraction(1, 5))
        assert witness.transformed.costs[0] == expected
        assert witness.transformed.costs[1] == expected

    def test_already_ido_gives_identity(self, r1):
        witness = to_ido(r1)
        assert witness.permutations == ((0, 1, 2, 3), (0, 1, 2, 3))
        assert witness.transformed == r1

    def test_ties_keep_original_order(self):
        inst = Instance.make([["1/3", "1/3", "1/3"]], weights=["1"])
        assert to_ido(inst).permutations == ((0, 1, 2),)

    def test_row_multiset_preserved_and_recoverable(self):
        rng = random.Random(7)
        for _ in range(50):
            inst = gen_random(rng.randint(1, 5), rng.randint(0, 10), rng.getrandbits(30))
            witness = to_ido(inst)
            assert is_ido(witness.transformed)
            for i in range(inst.n):
                perm = witness.permutations[i]
                assert sorted(perm) == list(range(inst.m))
                assert sorted(witness.transformed.costs[i]) == sorted(inst.costs[i])
                # applying the permutation to the sorted row recovers the original
                recovered = [None] * inst.m
                for j, orig in enumerate(perm):
                    recovered[orig] = witness.transformed.costs[i][j]
                assert tuple(recovered) == inst.costs[i]


class TestSocialCost:
    def test_identical_agents_any_split(self, r1):
        assert social_cost(r1, Allocation.make([[0, 3], [1, 2]])) == 1
        assert social_cost(r1, Allocation.make([[], [0, 1, 2, 3]])) == 1

    def test_partial_allocation_rejected(self, g1):
        alloc = Allocation.make([[2], [0]], partial=True)
        with pytest.raises(IncompatibleDimensions):
            social_cost(g1, alloc)


class TestOptimalSocialCost:
    def test_column_minima(self, g1):
        assert optimal_social_cost(g1) == Fraction(7, 10)

    def test_ties_go_to_lowest_agent(self, g1):
        _, alloc = optimal_allocation(g1)
        # item 1 is a tie (3/10 both agents) and goes to agent 0
        assert 1 in alloc.bundles[0]

    def test_identical_agents(self, r1):
        assert optimal_social_cost(r1) == 1

    def test_lower_bounds_every_complete_allocation(self):
        rng = random.Random(3)
        for _ in range(25):
            n = rng.randint(1, 3)
            m = rng.randint(0, 6)
            inst = gen_random(n, m, rng.getrandbits(30))
            opt = optimal_social_cost(inst)
            for assignment in itertools.product(range(n), repeat=m):
                bundles = [set() for _ in range(n)]
                for item, agent in enumerate(assignment):
                    bundles[agent].add(item)
                assert opt <= social_cost(inst, Allocation.make(bundles))


class TestNormalized:
    def test_rows_sum_to_one(self):
        inst = Instance.make([[4, 3, 2, 1], [1, 1, 1, 1]])
        norm = inst.normalized()
        assert norm.is_row_normalized
        assert norm.costs[0] == (
            Fraction(2, 5), Fraction(3, 10), Fraction(1, 5), Fraction(1, 10),
        )

    def test_zero_rows_kept(self):
        inst = Instance.make([[0, 0], [1, 1]])
        norm = inst.normalized()
        assert norm.costs[0] == (0, 0)
        assert norm.costs[1] == (Fraction(1, 2), Fraction(1, 2))
