"""Exact share oracles: maximin share (MMS) and AnyPrice share (APS).

Both oracles are brute-force searches over exact rationals, meant for
desk-scale certification rather than large instances.  Budget violations
are hard errors, never silent approximations, because oracle output is
used as ground truth by the test and certification suites.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import BudgetExceeded
from .exactlp import Tableau
from .fairness import FairnessReport, _finish_report
from .instance import ZERO, Allocation, Instance, format_rational

DEFAULT_MMS_BUDGET = 10_000_000  # cap on n**m partition evaluations
DEFAULT_APS_MAX_ITEMS = 14      # subset enumeration is 2**m


@dataclass(frozen=True)
class OracleValue:
    """An exact share value together with a certifying witness.

    For MMS the witness is the minimizing n-partition (tuple of sorted item
    tuples); for APS it is a reward vector on the items.  Re-evaluating the
    witness reproduces the value.
    """

    agent: int
    notion: str  # "MMS" | "APS" | "MMS_LB" | "APS_LB"
    value: Fraction
    witness: tuple | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "agent": self.agent,
            "notion": self.notion,
            "value": format_rational(self.value),
        }
        if self.notion == "MMS" and self.witness is not None:
            doc["witness"] = {"partition": [list(b) for b in self.witness]}
        elif self.notion == "APS" and self.witness is not None:
            doc["witness"] = {
                "reward_vector": [format_rational(r) for r in self.witness]
            }
        return doc


def mms_lower_bound(inst: Instance, agent: int) -> Fraction:
    """Closed-form bound: MMS is at least the largest single item cost and
    at least the unweighted proportional share."""
    row = inst.costs[agent]
    prop = inst.row_total(agent) / inst.n
    if inst.m == 0:
        return ZERO
    return max(max(row), prop)


def exact_mms(
    inst: Instance, agent: int, budget: int = DEFAULT_MMS_BUDGET
) -> OracleValue:
    """Exact maximin share of one agent: the minimum over all n-partitions
    of the most costly bundle, found by branch-and-bound.

    Items are placed largest-first; bundles with equal current cost are
    interchangeable and only the first is branched on.  Raises
    BudgetExceeded when n**m exceeds ``budget``.
    """
    n, m = inst.n, inst.m
    if n ** m > budget:
        raise BudgetExceeded(
            f"{n}^{m} partitions exceed the budget of {budget}"
        )
    row = inst.costs[agent]
    if m == 0:
        return OracleValue(agent, "MMS", ZERO, tuple(() for _ in range(n)))

    order = sorted(range(m), key=lambda j: (-row[j], j))
    static_lb = mms_lower_bound(inst, agent)

    # greedy seed: each item to the currently cheapest bundle
    seed_cost = [ZERO] * n
    seed_items: list[list[int]] = [[] for _ in range(n)]
    for j in order:
        b = min(range(n), key=lambda k: (seed_cost[k], k))
        seed_cost[b] += row[j]
        seed_items[b].append(j)
    best_value = max(seed_cost)
    best_partition = [list(b) for b in seed_items]

    costs = [ZERO] * n
    bundles: list[list[int]] = [[] for _ in range(n)]

    def search(idx: int) -> None:
        nonlocal best_value, best_partition
        if best_value == static_lb:
            return
        if idx == m:
            value = max(costs)
            if value < best_value:
                best_value = value
                best_partition = [list(b) for b in bundles]
            return
        j = order[idx]
        c = row[j]
        tried: set[Fraction] = set()
        for b in range(n):
            if costs[b] in tried:
                continue
            tried.add(costs[b])
            if costs[b] + c >= best_value:
                continue
            costs[b] += c
            bundles[b].append(j)
            search(idx + 1)
            bundles[b].pop()
            costs[b] -= c

    search(0)
    witness = tuple(tuple(sorted(b)) for b in best_partition)
    return OracleValue(agent, "MMS", best_value, witness)


def aps_lower_bound(inst: Instance, agent: int) -> Fraction:
    """Closed-form bound for row-normalized costs: APS is at least the
    agent's share and at least her largest single item cost.

    With no items both this bound and the exact APS degenerate to zero.
    """
    if inst.m == 0:
        return ZERO
    return max(inst.weights[agent], max(inst.costs[agent]))


class _ApsSearch:
    """Threshold search for one agent's AnyPrice share.

    A candidate threshold t (a subset cost) is *achievable* when some
    reward vector r on the unit simplex gives every subset cheaper than t
    a reward strictly below the agent's share; then no such subset can
    repay the share and the cheapest repaying set costs at least t.  The
    strict system is solved exactly by maximizing a slack variable d over

        sum(r) = 1,  r >= 0,  r(S) + d <= share  for every cheap S,

    with lazy constraint generation: achievable iff the optimum d is > 0.
    Costs are scaled to integers once so subset selection stays cheap, and
    cuts found at one threshold are reused at the others.
    """

    def __init__(self, inst: Instance, agent: int):
        self.m = inst.m
        self.share = inst.weights[agent]
        row = inst.costs[agent]
        denom = reduce(lambda a, b: a * b // gcd(a, b),
                       (c.denominator for c in row), 1)
        self.scale = denom
        self.int_costs = [int(c * denom) for c in row]
        # subset costs for all 2^m masks via lowest-bit recurrence
        sub = [0] * (1 << self.m)
        for mask in range(1, 1 << self.m):
            low = mask & -mask
            sub[mask] = sub[mask ^ low] + self.int_costs[low.bit_length() - 1]
        self.subset_cost = sub
        self.pool: list[tuple[int, ...]] = []  # non-singleton cuts, reused

    def _mask_items(self, mask: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.m) if mask >> j & 1)

    def _items_mask(self, items: tuple[int, ...]) -> int:
        mask = 0
        for j in items:
            mask |= 1 << j
        return mask

    def _trivial_reward(self) -> tuple[Fraction, ...]:
        if self.m == 0:
            return ()
        return (Fraction(1),) + (ZERO,) * (self.m - 1)

    def _separate(self, t_int: int, r, d: Fraction, limit: int = 3):
        """Up to ``limit`` violated cheap sets at (r, d), most violated
        first.  Only subsets of the support of r matter: zero-reward items
        raise the cost without raising the reward."""
        support = [j for j in range(self.m) if r[j] > 0]
        k = len(support)
        slack = self.share - d
        rewards = [ZERO] * (1 << k)
        masks = [0] * (1 << k)
        found: list[tuple[Fraction, int]] = []
        for pm in range(1, 1 << k):
            low = pm & -pm
            pos = low.bit_length() - 1
            reward = rewards[pm ^ low] + r[support[pos]]
            rewards[pm] = reward
            mask = masks[pm ^ low] | (1 << support[pos])
            masks[pm] = mask
            if reward > slack and self.subset_cost[mask] < t_int:
                found.append((reward, mask))
        if not found:
            return []
        found.sort(key=lambda item: (-item[0], item[1]))
        picked = []
        for _, mask in found[:limit]:
            picked.append(self._mask_items(mask))
        return picked

    def achievable(self, t_int: int):
        """Decide achievability of threshold ``t_int`` (integer-scaled).

        Returns ``(True, reward_vector, None)`` or
        ``(False, None, blocking_cert)`` where the certificate is a list of
        ``(item_tuple, weight)`` pairs: a distribution over cheap sets
        covering every item with total weight >= share, which rules out any
        strictly-excluding reward vector.
        """
        if t_int <= 0:
            return True, self._trivial_reward(), None
        working: list[tuple[int, ...]] = [()]
        for j in range(self.m):
            if self.int_costs[j] < t_int:
                working.append((j,))
        for s in self.pool:
            if self.subset_cost[self._items_mask(s)] < t_int:
                working.append(s)
        mvars = self.m + 2  # r_0..r_{m-1}, d_plus, d_minus
        obj = [ZERO] * self.m + [Fraction(1), Fraction(-1)]
        a_eq = [[Fraction(1)] * self.m + [ZERO, ZERO]]

        def cut_row(items: tuple[int, ...]) -> list[Fraction]:
            coeffs = [ZERO] * mvars
            for j in items:
                coeffs[j] = Fraction(1)
            coeffs[self.m] = Fraction(1)
            coeffs[self.m + 1] = Fraction(-1)
            return coeffs

        tableau = Tableau(
            obj,
            [cut_row(s) for s in working],
            [self.share] * len(working),
            a_eq,
            [Fraction(1)],
        )
        while True:
            res = tableau.solution()
            if res.status != "optimal":
                raise AssertionError(f"slack LP ended {res.status}")
            r = res.x[: self.m]
            d = res.x[self.m] - res.x[self.m + 1]
            cuts = self._separate(t_int, r, d)
            if not cuts:
                if d > 0:
                    return True, tuple(r), None
                cert = [
                    (s, y) for s, y in zip(working, res.duals_ub) if y > 0
                ]
                return False, None, cert
            for cut in cuts:
                working.append(cut)
                tableau.add_ub_row(cut_row(cut), self.share)
                if cut not in self.pool:
                    self.pool.append(cut)


def exact_aps(
    inst: Instance, agent: int, max_items: int = DEFAULT_APS_MAX_ITEMS
) -> OracleValue:
    """Exact AnyPrice share of one agent, with a witnessing reward vector.

    Candidate values are the distinct subset costs; achievability is
    monotone decreasing in the threshold, so a binary search over the
    sorted candidates finds the largest achievable one (see _ApsSearch).
    The window starts at the provable bracket [max(share, max item cost),
    share + max item cost], verified by the same oracle before use, so no
    unchecked assumption enters the result.  Raises BudgetExceeded when
    the instance has more than ``max_items`` items.
    """
    if inst.m > max_items:
        raise BudgetExceeded(
            f"{inst.m} items exceed the APS enumeration bound of {max_items}"
        )
    if inst.m == 0:
        return OracleValue(agent, "APS", ZERO, ())
    search = _ApsSearch(inst, agent)
    candidates = sorted(set(search.subset_cost))
    best_reward = search._trivial_reward()
    lo, hi = 0, len(candidates) - 1  # candidates[0] == 0 is always achievable

    share_scaled = inst.weights[agent] * search.scale
    max_item = max(search.int_costs)
    lb = max(share_scaled, Fraction(max_item))
    ub = share_scaled + max_item
    lb_idx = bisect_right(candidates, lb) - 1  # largest candidate <= lb
    if 0 < lb_idx <= hi:
        ok, reward, _ = search.achievable(candidates[lb_idx])
        if ok:
            lo = lb_idx
            best_reward = reward
        else:  # cannot happen for a sound bound; fall back to a full search
            hi = lb_idx - 1
    ub_idx = bisect_right(candidates, ub)  # smallest candidate > ub
    if lo < ub_idx <= hi:
        ok, reward, _ = search.achievable(candidates[ub_idx])
        if not ok:
            hi = ub_idx - 1
        else:
            lo = ub_idx
            best_reward = reward

    while lo < hi:
        mid = (lo + hi + 1) // 2
        ok, reward, _ = search.achievable(candidates[mid])
        if ok:
            lo = mid
            best_reward = reward
        else:
            hi = mid - 1
    value = Fraction(candidates[lo], search.scale)
    return OracleValue(agent, "APS", value, best_reward)


def certify_alpha(
    inst: Instance,
    alloc: Allocation,
    notion: str,
    mode: str = "exact",
    *,
    mms_budget: int = DEFAULT_MMS_BUDGET,
    aps_max_items: int = DEFAULT_APS_MAX_ITEMS,
) -> FairnessReport:
    """Per-agent ratio of bundle cost to an oracle share.

    ``mode="exact"`` divides by the exact oracle value; ``mode="lower_bound"``
    divides by the closed-form bound instead, which upper-bounds the true
    ratio (safe for "at most 2" claims) without running the search.  A zero
    oracle value with positive bundle cost yields the infinite marker.
    """
    if notion not in ("MMS", "APS"):
        raise ValueError(f"unknown oracle notion {notion!r}")
    if mode not in ("exact", "lower_bound"):
        raise ValueError(f"unknown mode {mode!r}")
    alloc.validate_for(inst, require_complete=True)
    alphas: list[Fraction | None] = []
    for i in range(inst.n):
        if mode == "exact":
            if notion == "MMS":
                denom = exact_mms(inst, i, budget=mms_budget).value
            else:
                denom = exact_aps(inst, i, max_items=aps_max_items).value
        else:
            denom = (
                mms_lower_bound(inst, i) if notion == "MMS"
                else aps_lower_bound(inst, i)
            )
        cost = inst.cost(i, alloc.bundles[i])
        if cost == 0:
            alphas.append(ZERO)
        elif denom == 0:
            alphas.append(None)
        else:
            alphas.append(cost / denom)
    note = None
    if mode == "lower_bound":
        note = "denominators are closed-form lower bounds; alpha is an upper bound"
    return _finish_report(notion, alphas, note=note)
