"""Allocation algorithms for indivisible chores.

Four algorithms plus a reduction wrapper:

* ``envy_cycle_eliminate`` -- top-trading envy-cycle elimination on
  identical-ordering (IDO) instances; output is EFX and 4/3-approximate
  MMS for symmetric agents.
* ``bid_and_take`` -- items go largest-first to the cheapest still-active
  agent; output is weighted-PROPX for any shares.
* ``ordinal_unweighted`` / ``ordinal_weighted`` -- read only the item
  order (and shares); output is 2-approximate (weighted) PROPX.
* ``solve_general`` -- lifts any of the above from IDO to arbitrary
  instances while preserving the approximation guarantee.

All tie-breaks (sink choice, envy target, bid winner, round-robin ratio,
pick-back item) go to the lowest index, which makes every run
deterministic.  Mid-run invariant assertions are off by default and
enabled with ``assert_invariants=True``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotIdo, ZeroShareInN2
from .fairness import check_envy
from .instance import (
    ZERO,
    Allocation,
    IdoWitness,
    Instance,
    format_rational,
    is_ido,
    to_ido,
)

ALGORITHMS = ("envy_cycle", "bid_and_take", "ordinal", "ordinal_weighted")


@dataclass(frozen=True)
class AlgorithmTrace:
    """Ordered event log of one algorithm run; replaying it reproduces the
    final allocation (see :func:`replay_trace`)."""

    events: tuple[dict, ...]

    def to_json_dict(self) -> dict:
        return {"events": list(self.events)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def replay_trace(trace: AlgorithmTrace, n: int) -> Allocation:
    """Rebuild the allocation an event log describes.

    ``assign`` adds an item to a bundle, ``cycle`` rotates bundles so each
    listed agent receives her successor's bundle, and ``pick`` events (from
    the general-instance wrapper) replace the inner allocation entirely.
    """
    bundles: list[set[int]] = [set() for _ in range(n)]
    picked: list[set[int]] | None = None
    for ev in trace.events:
        kind = ev["event"]
        if kind == "assign":
            bundles[ev["agent"]].add(ev["item"])
        elif kind == "cycle":
            agents = ev["agents"]
            old = [bundles[a] for a in agents]
            for pos, agent in enumerate(agents):
                bundles[agent] = old[(pos + 1) % len(agents)]
        elif kind == "pick":
            if picked is None:
                picked = [set() for _ in range(n)]
            picked[ev["agent"]].add(ev["item"])
    return Allocation.make(picked if picked is not None else bundles)


@dataclass(frozen=True)
class AgentPartition:
    """Agent split used by the weighted ordinal algorithm.

    ``n1`` (in ascending-share order) receive one large item each;
    ``n2`` share the small items by weighted round-robin.  ``i_star`` is
    the size of ``n1``: the longest ascending-share prefix whose shares
    sum to at most 1/2.
    """

    n1: tuple[int, ...]
    n2: tuple[int, ...]
    i_star: int
    m_large: tuple[int, ...]
    m_small: tuple[int, ...]


def _require_ido(inst: Instance) -> None:
    if not is_ido(inst):
        raise NotIdo("instance rows are not non-increasing; use solve_general")


def _assert_efx(inst: Instance, bundles: Sequence[set[int]], context: str) -> None:
    alloc = Allocation.make(bundles, partial=True)
    report = check_envy(inst, alloc, up_to="any", allow_partial=True)
    if not report.holds:
        raise AssertionError(f"partial allocation lost EFX {context}")


def envy_cycle_eliminate(
    inst: Instance, assert_invariants: bool = False
) -> tuple[Allocation, AlgorithmTrace]:
    """Top-trading envy-cycle elimination on an IDO instance.

    Items are assigned in index order (largest cost first) to a non-envious
    "sink" agent; when no sink exists, one top-trading envy cycle is
    resolved by handing every cycle member the bundle she points to, after
    which a sink exists again.
    """
    _require_ido(inst)
    n, m = inst.n, inst.m
    bundles: list[set[int]] = [set() for _ in range(n)]
    # cost[i][k] = agent i's cost for bundle k, maintained incrementally
    cost = [[ZERO] * n for _ in range(n)]
    events: list[dict] = []

    def most_envied(i: int) -> int | None:
        target = min(range(n), key=lambda k: (cost[i][k], k))
        if cost[i][i] > cost[i][target]:
            return target
        return None

    def sinks() -> list[int]:
        return [i for i in range(n) if most_envied(i) is None]

    for j in range(m):
        if not sinks():
            # every agent points somewhere, so chasing pointers finds a cycle
            succ = [most_envied(i) for i in range(n)]
            seen: dict[int, int] = {}
            node = 0
            path: list[int] = []
            while node not in seen:
                seen[node] = len(path)
                path.append(node)
                node = succ[node]
            cycle = path[seen[node]:]
            old_bundles = [bundles[a] for a in cycle]
            old_cols = [[cost[i][a] for i in range(n)] for a in cycle]
            for pos, agent in enumerate(cycle):
                nxt = (pos + 1) % len(cycle)
                bundles[agent] = old_bundles[nxt]
                for i in range(n):
                    cost[i][agent] = old_cols[nxt][i]
            events.append({"event": "cycle", "agents": list(cycle)})
            if assert_invariants:
                if any(most_envied(a) is not None for a in cycle):
                    raise AssertionError("cycle member still envious after swap")
                _assert_efx(inst, bundles, "after cycle resolution")
        k = sinks()[0]
        bundles[k].add(j)
        for i in range(n):
            cost[i][k] += inst.costs[i][j]
        events.append({"event": "assign", "item": j, "agent": k})
        if assert_invariants:
            _assert_efx(inst, bundles, f"after assigning item {j}")

    return Allocation.make(bundles), AlgorithmTrace(tuple(events))


def bid_and_take(
    inst: Instance, assert_invariants: bool = False
) -> tuple[Allocation, AlgorithmTrace]:
    """Bid-and-take on an IDO instance with arbitrary shares.

    Each item goes to the active agent with minimum cost on it; an agent is
    deactivated as soon as her cumulative cost strictly exceeds her share.
    Rows are normalized internally so shares and costs live on the same
    scale (the guarantee is per-row scale-invariant); all-zero rows are
    kept as is.
    """
    _require_ido(inst)
    work = inst.normalized()
    n, m = work.n, work.m
    bundles: list[set[int]] = [set() for _ in range(n)]
    cumulative = [ZERO] * n
    active = set(range(n))
    events: list[dict] = []

    for j in range(m):
        if not active:
            raise AssertionError("active set emptied before all items placed")
        winner = min(active, key=lambda i: (work.costs[i][j], i))
        bundles[winner].add(j)
        cumulative[winner] += work.costs[winner][j]
        events.append({"event": "assign", "item": j, "agent": winner})
        if assert_invariants:
            for a in active:
                for b in active:
                    if a != b and work.cost(a, bundles[b]) < cumulative[b]:
                        raise AssertionError(
                            "active agent values another active bundle "
                            "below its owner's cost"
                        )
        if cumulative[winner] > work.weights[winner]:
            active.remove(winner)
            events.append({
                "event": "deactivate",
                "agent": winner,
                "cost": format_rational(cumulative[winner]),
            })

    if assert_invariants:
        for i in range(n):
            for e in bundles[i]:
                if cumulative[i] - work.costs[i][e] > work.weights[i]:
                    raise AssertionError(
                        "removing one item does not restore the share bound"
                    )

    return Allocation.make(bundles), AlgorithmTrace(tuple(events))


def _deal_unweighted(n: int, m: int) -> list[set[int]]:
    """Order-only allocation rule: the first floor(n/2) agents get one large
    item each, the rest of the items are dealt cyclically to the remaining
    agents in increasing index order."""
    bundles: list[set[int]] = [set() for _ in range(n)]
    n1 = n // 2
    for j in range(min(n1, m)):
        bundles[j].add(j)
    group = n - n1
    for j in range(n1, m):
        bundles[n1 + (j - n1) % group].add(j)
    return bundles


def ordinal_unweighted(inst: Instance) -> Allocation:
    """Order-only 2-approximate PROPX allocation for symmetric agents.

    Reads nothing but the agent and item counts, so the output is
    identical for every cardinal completion of the same item order.
    """
    _require_ido(inst)
    return Allocation.make(_deal_unweighted(inst.n, inst.m))


def _deal_weighted(m: int, shares: Sequence[Fraction]) -> tuple[list[set[int]], int]:
    """Order-only weighted rule over agents sorted by ascending share.

    Returns bundles (indexed by sorted position) and the prefix length
    i_star: the largest k whose first k shares sum to at most 1/2.
    Positions 0..i_star-1 get singletons; the remaining items repeatedly go
    to the group member with minimum |bundle| / share (ties to the lowest
    position).
    """
    n = len(shares)
    prefix = ZERO
    i_star = 0
    for k in range(n):
        prefix += shares[k]
        if prefix <= Fraction(1, 2):
            i_star = k + 1
        else:
            break
    bundles: list[set[int]] = [set() for _ in range(n)]
    for pos in range(min(i_star, m)):
        bundles[pos].add(pos)
    group = list(range(i_star, n))
    if any(shares[pos] == 0 for pos in group):
        raise ZeroShareInN2("zero-share agent outside the singleton prefix")
    counts = [0] * n
    for j in range(i_star, m):
        target = min(group, key=lambda pos: (Fraction(counts[pos], 1) / shares[pos], pos))
        bundles[target].add(j)
        counts[target] += 1
    return bundles, i_star


def ordinal_weighted(inst: Instance) -> tuple[Allocation, AgentPartition]:
    """Order-only 2-approximate weighted PROPX allocation.

    Agents are processed in ascending-share order (stable in the original
    index); the returned partition records that order, the singleton
    prefix, and the large/small item split.
    """
    _require_ido(inst)
    order = sorted(range(inst.n), key=lambda i: (inst.weights[i], i))
    shares = [inst.weights[i] for i in order]
    by_position, i_star = _deal_weighted(inst.m, shares)
    bundles: list[set[int]] = [set() for _ in range(inst.n)]
    for pos, agent in enumerate(order):
        bundles[agent] = by_position[pos]
    partition = AgentPartition(
        n1=tuple(order[:i_star]),
        n2=tuple(order[i_star:]),
        i_star=i_star,
        m_large=tuple(range(min(i_star, inst.m))),
        m_small=tuple(range(min(i_star, inst.m), inst.m)),
    )
    return Allocation.make(bundles), partition


def _run_on_ido(
    inst: Instance, algo: str, assert_invariants: bool
) -> tuple[Allocation, AlgorithmTrace]:
    if algo == "envy_cycle":
        return envy_cycle_eliminate(inst, assert_invariants)
    if algo == "bid_and_take":
        return bid_and_take(inst, assert_invariants)
    if algo == "ordinal":
        return ordinal_unweighted(inst), AlgorithmTrace(())
    if algo == "ordinal_weighted":
        alloc, _ = ordinal_weighted(inst)
        return alloc, AlgorithmTrace(())
    raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")


def pick_back_bijection(
    inst: Instance,
    witness: IdoWitness,
    alloc: Allocation,
    inner_alloc: Allocation,
) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Match each agent's final items to her IDO-run items, cheapest to
    cheapest, and certify the mapped item never got more expensive.

    Returns per-agent tuples of (original_item, ido_item) pairs; raises
    AssertionError if any pair violates the domination guarantee.
    """
    out = []
    for i in range(inst.n):
        mine = sorted(alloc.bundles[i], key=lambda e: (inst.costs[i][e], e))
        inner = sorted(
            inner_alloc.bundles[i],
            key=lambda e: (witness.transformed.costs[i][e], e),
        )
        if len(mine) != len(inner):
            raise AssertionError("pick-back changed a bundle size")
        pairs = tuple(zip(mine, inner))
        for orig, ido in pairs:
            if inst.costs[i][orig] > witness.transformed.costs[i][ido]:
                raise AssertionError(
                    f"agent {i}: item {orig} costs more than its IDO match"
                )
        out.append(pairs)
    return tuple(out)


def _solve_general_traced(
    inst: Instance, algo: str, assert_invariants: bool = False
) -> tuple[Allocation, AlgorithmTrace]:
    witness = to_ido(inst)
    inner_alloc, inner_trace = _run_on_ido(
        witness.transformed, algo, assert_invariants
    )
    holder = [0] * inst.m
    for i in range(inst.n):
        for j in inner_alloc.bundles[i]:
            holder[j] = i

    bundles: list[set[int]] = [set() for _ in range(inst.n)]
    unallocated = set(range(inst.m))
    events = list(inner_trace.events)
    # cheapest IDO items first: their holders pick their cheapest remaining
    # original item, so nobody ends up with a costlier substitute
    for j in range(inst.m - 1, -1, -1):
        agent = holder[j]
        choice = min(unallocated, key=lambda e: (inst.costs[agent][e], e))
        unallocated.remove(choice)
        bundles[agent].add(choice)
        events.append({
            "event": "pick", "agent": agent, "ido_item": j, "item": choice,
        })

    alloc = Allocation.make(bundles)
    if assert_invariants:
        pick_back_bijection(inst, witness, alloc, inner_alloc)
    return alloc, AlgorithmTrace(tuple(events))


def solve_general(
    inst: Instance, algo: str, assert_invariants: bool = False
) -> Allocation:
    """Run an IDO algorithm on any instance via the sort-and-pick-back
    reduction; the inner algorithm's proportionality guarantee carries
    over to the returned allocation."""
    return _solve_general_traced(inst, algo, assert_invariants)[0]
