"""Exact-rational chore-division instances and allocations.

All cost and weight arithmetic uses ``fractions.Fraction``; no floating
point enters any fairness-relevant computation.  Agents and items are
0-indexed everywhere, including the JSON wire format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    IncompatibleDimensions,
    MalformedRational,
    NonNegativityViolation,
    WeightSumMismatch,
    ZeroTotalCost,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(value) -> Fraction:
    """Parse an int or a "p/q" (or plain "p") string into a Fraction.

    Floats are rejected: JSON numbers with a fractional part carry binary
    rounding and would silently break exactness guarantees.
    """
    if isinstance(value, bool):
        raise MalformedRational(f"booleans are not rationals: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedRational(f"cannot parse rational {value!r}") from exc
    raise MalformedRational(
        f"rationals must be integers or 'p/q' strings, got {type(value).__name__}"
    )


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q" (or "p" when the denominator is 1)."""
    return str(value)


@dataclass(frozen=True)
class Instance:
    """An instance with ``n`` agents, ``m`` chores, a cost matrix and an
    obligation-share vector summing to one.

    Immutable after construction; all operations on it are pure functions.
    """

    n: int
    m: int
    costs: tuple[tuple[Fraction, ...], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one agent")
        if self.m < 0:
            raise ValueError("item count cannot be negative")
        if len(self.costs) != self.n or any(len(row) != self.m for row in self.costs):
            raise ValueError("cost matrix shape does not match (n, m)")
        if len(self.weights) != self.n:
            raise ValueError("weight vector length does not match n")
        for row in self.costs:
            for c in row:
                if c < 0:
                    raise NonNegativityViolation(f"negative cost {c}")
        for s in self.weights:
            if s < 0:
                raise NonNegativityViolation(f"negative weight {s}")
        if sum(self.weights, ZERO) != ONE:
            raise WeightSumMismatch(
                f"weights sum to {sum(self.weights, ZERO)}, expected 1"
            )

    @classmethod
    def make(cls, costs: Iterable[Iterable], weights: Iterable | None = None) -> "Instance":
        """Build an instance from any rational-like entries (ints, "p/q"
        strings, Fractions).  ``weights=None`` means uniform shares."""
        rows = tuple(tuple(parse_rational(c) for c in row) for row in costs)
        n = len(rows)
        if n == 0:
            raise ValueError("need at least one agent")
        m = len(rows[0])
        if weights is None:
            ws = tuple(Fraction(1, n) for _ in range(n))
        else:
            ws = tuple(parse_rational(w) for w in weights)
        return cls(n=n, m=m, costs=rows, weights=ws)

    # -- basic queries -------------------------------------------------

    def cost(self, agent: int, items: Iterable[int]) -> Fraction:
        """Additive cost of an item set under one agent's cost function."""
        row = self.costs[agent]
        return sum((row[j] for j in items), ZERO)

    def row_total(self, agent: int) -> Fraction:
        return sum(self.costs[agent], ZERO)

    @property
    def has_uniform_weights(self) -> bool:
        return all(w == Fraction(1, self.n) for w in self.weights)

    @property
    def is_row_normalized(self) -> bool:
        """True when every agent's total cost is exactly 1 (vacuous for m=0)."""
        if self.m == 0:
            return True
        return all(self.row_total(i) == ONE for i in range(self.n))

    def normalized(self) -> "Instance":
        """Return a copy with each row divided by its total.

        Rows that sum to zero are left unchanged (an all-zero cost function
        carries no scale to normalize away).
        """
        rows = []
        for i in range(self.n):
            total = self.row_total(i)
            if total == 0:
                rows.append(self.costs[i])
            else:
                rows.append(tuple(c / total for c in self.costs[i]))
        return Instance(self.n, self.m, tuple(rows), self.weights)

    # -- serialization -------------------------------------------------

    def to_json_dict(self, normalize_flag: bool = False) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "costs": [[format_rational(c) for c in row] for row in self.costs],
            "weights": [format_rational(w) for w in self.weights],
            "normalize": normalize_flag,
        }

    def to_json(self, normalize_flag: bool = False) -> str:
        return json.dumps(self.to_json_dict(normalize_flag), indent=2)


@dataclass(frozen=True)
class Allocation:
    """A partition of item indices into one bundle per agent.

    ``partial=True`` marks allocations whose union is allowed to be a
    proper subset of the item set.
    """

    bundles: tuple[frozenset[int], ...]
    partial: bool = False

    def __post_init__(self):
        seen: set[int] = set()
        for bundle in self.bundles:
            for j in bundle:
                if not isinstance(j, int) or j < 0:
                    raise ValueError(f"bad item index {j!r}")
                if j in seen:
                    raise ValueError(f"item {j} appears in two bundles")
                seen.add(j)

    @classmethod
    def make(cls, bundles: Iterable[Iterable[int]], partial: bool = False) -> "Allocation":
        return cls(tuple(frozenset(b) for b in bundles), partial)

    @property
    def n(self) -> int:
        return len(self.bundles)

    def allocated_items(self) -> frozenset[int]:
        out: set[int] = set()
        for b in self.bundles:
            out |= b
        return frozenset(out)

    def validate_for(self, inst: Instance, require_complete: bool = True) -> None:
        """Raise IncompatibleDimensions unless this allocation fits ``inst``."""
        if self.n != inst.n:
            raise IncompatibleDimensions(
                f"allocation has {self.n} bundles, instance has {inst.n} agents"
            )
        items = self.allocated_items()
        if any(j >= inst.m for j in items):
            raise IncompatibleDimensions("allocation references unknown items")
        if require_complete and (self.partial or len(items) != inst.m):
            raise IncompatibleDimensions(
                "complete allocation over all items required"
            )

    def to_json_dict(self) -> dict:
        return {
            "bundles": [sorted(b) for b in self.bundles],
            "partial": self.partial,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


@dataclass(frozen=True)
class IdoWitness:
    """Per-agent item permutations that sort each cost row non-increasingly,
    together with the transformed (identical-ordering) instance.

    ``permutations[i][j]`` is the original index of agent ``i``'s j-th most
    costly item, so ``transformed.costs[i][j] == costs[i][permutations[i][j]]``.
    """

    permutations: tuple[tuple[int, ...], ...]
    transformed: Instance


def load_instance(data, *, normalize: bool | None = None) -> Instance:
    """Load an instance from JSON bytes/str or an already-parsed dict.

    Wire format::

        {"n": 2, "m": 4,
         "costs": [["2/5", "3/10", "1/5", "1/10"], ...],
         "weights": ["1/2", "1/2"],      # optional, default uniform
         "normalize": false}             # optional, default false

    ``normalize`` given here overrides the flag embedded in the document.
    When normalization is active, every nonempty row is divided by its sum
    so that each agent's total cost is exactly 1.
    """
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        doc = json.loads(data)
    else:
        doc = data
    if not isinstance(doc, dict) or "costs" not in doc:
        raise MalformedRational("instance document must be an object with 'costs'")

    costs_raw = doc["costs"]
    if not isinstance(costs_raw, list) or not all(isinstance(r, list) for r in costs_raw):
        raise MalformedRational("'costs' must be a list of rows")
    rows = [[parse_rational(c) for c in row] for row in costs_raw]
    n = len(rows)
    if n == 0:
        raise MalformedRational("'costs' must contain at least one row")
    m = len(rows[0])
    if any(len(r) != m for r in rows):
        raise MalformedRational("cost rows have unequal lengths")
    if "n" in doc and doc["n"] != n:
        raise MalformedRational(f"declared n={doc['n']} but {n} rows given")
    if "m" in doc and doc["m"] != m:
        raise MalformedRational(f"declared m={doc['m']} but rows have {m} items")

    for row in rows:
        for c in row:
            if c < 0:
                raise NonNegativityViolation(f"negative cost {c}")

    if doc.get("weights") is None:
        weights = [Fraction(1, n)] * n
    else:
        weights = [parse_rational(w) for w in doc["weights"]]
        if len(weights) != n:
            raise MalformedRational("weights length does not match agent count")
        for w in weights:
            if w < 0:
                raise NonNegativityViolation(f"negative weight {w}")
        if sum(weights, ZERO) != ONE:
            raise WeightSumMismatch(
                f"weights sum to {sum(weights, ZERO)}, expected 1"
            )

    do_normalize = doc.get("normalize", False) if normalize is None else normalize
    if do_normalize:
        for i, row in enumerate(rows):
            total = sum(row, ZERO)
            if m > 0 and total == 0:
                raise ZeroTotalCost(f"row {i} sums to zero, cannot normalize")
            if total not in (ZERO, ONE):
                rows[i] = [c / total for c in row]

    return Instance(
        n=n,
        m=m,
        costs=tuple(tuple(row) for row in rows),
        weights=tuple(weights),
    )


def load_allocation(data) -> Allocation:
    """Load an allocation from JSON bytes/str or a parsed dict."""
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        doc = json.loads(data)
    else:
        doc = data
    bundles = doc["bundles"]
    return Allocation.make(bundles, partial=bool(doc.get("partial", False)))


def is_ido(inst: Instance) -> bool:
    """True iff every cost row is non-increasing in item-index order."""
    for row in inst.costs:
        for j in range(1, inst.m):
            if row[j - 1] < row[j]:
                return False
    return True


def to_ido(inst: Instance) -> IdoWitness:
    """Sort each row non-increasingly; ties keep the smaller original index
    first.  The transformed instance shares the weight vector and each row's
    cost multiset with the original."""
    perms = []
    rows = []
    for i in range(inst.n):
        row = inst.costs[i]
        # stable sort, so equal costs stay in ascending original-index order
        perm = tuple(sorted(range(inst.m), key=lambda j: row[j], reverse=True))
        perms.append(perm)
        rows.append(tuple(row[j] for j in perm))
    transformed = Instance(inst.n, inst.m, tuple(rows), inst.weights)
    return IdoWitness(permutations=tuple(perms), transformed=transformed)


def social_cost(inst: Instance, alloc: Allocation) -> Fraction:
    """Sum over agents of their own cost for their own bundle.

    Requires a complete allocation; raises IncompatibleDimensions otherwise.
    """
    alloc.validate_for(inst, require_complete=True)
    return sum((inst.cost(i, alloc.bundles[i]) for i in range(inst.n)), ZERO)


def optimal_allocation(inst: Instance) -> tuple[Fraction, Allocation]:
    """Unconstrained optimum: each item goes to the agent with minimum cost
    on it (ties to the lowest agent index).  Returns (value, allocation)."""
    bundles: list[set[int]] = [set() for _ in range(inst.n)]
    total = ZERO
    for j in range(inst.m):
        best = min(range(inst.n), key=lambda i: (inst.costs[i][j], i))
        bundles[best].add(j)
        total += inst.costs[best][j]
    return total, Allocation.make(bundles)


def optimal_social_cost(inst: Instance) -> Fraction:
    return optimal_allocation(inst)[0]
