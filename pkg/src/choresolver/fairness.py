"""Exact verifiers for proportionality- and envy-based fairness notions.

Every check returns a :class:`FairnessReport` carrying both the boolean
verdict and the tight per-agent ratio ``alpha`` the allocation achieves.
An unbounded ratio (positive residual against a zero denominator) is
encoded as ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import FirstItemNotInBundle, IncompatibleDimensions
from .instance import ZERO, Allocation, Instance, format_rational

# Fairness notions a report can carry.
NOTIONS = (
    "EF", "EF1", "EFX",
    "PROP", "PROP1", "PROPX",
    "WPROP", "WPROP1", "WPROPX",
    "MMS", "APS",
    "WEF1-roundrobin",
)

ENVY_ALPHA_NOTE = (
    "alpha for envy notions is a diagnostic ratio specific to this tool, "
    "not part of the standard EF/EF1/EFX definitions"
)


@dataclass(frozen=True)
class FairnessReport:
    """Outcome of one fairness check.

    ``per_agent_alpha[i]`` is the smallest ratio at which agent ``i``'s
    condition holds (``None`` when no finite ratio works).  ``holds`` is
    equivalent to ``overall_alpha is not None and overall_alpha <= 1``.
    """

    notion: str
    per_agent_alpha: tuple[Fraction | None, ...]
    overall_alpha: Fraction | None
    holds: bool
    note: str | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "notion": self.notion,
            "per_agent_alpha": [
                None if a is None else format_rational(a)
                for a in self.per_agent_alpha
            ],
            "overall_alpha": (
                None if self.overall_alpha is None
                else format_rational(self.overall_alpha)
            ),
            "holds": self.holds,
        }
        if self.note is not None:
            doc["note"] = self.note
        return doc


def _finish_report(notion: str, alphas: list[Fraction | None], note=None) -> FairnessReport:
    if any(a is None for a in alphas):
        overall = None
    else:
        overall = max(alphas, default=ZERO)
    holds = overall is not None and overall <= 1
    return FairnessReport(
        notion=notion,
        per_agent_alpha=tuple(alphas),
        overall_alpha=overall,
        holds=holds,
        note=note,
    )


def prop_share(inst: Instance, agent: int) -> Fraction:
    """Weighted proportional share: the agent's weight times her total cost.

    Equals 1/n under uniform weights and row-normalized costs.
    """
    return inst.weights[agent] * inst.row_total(agent)


def _residual(inst: Instance, agent: int, bundle: frozenset[int], up_to: str) -> Fraction:
    """Bundle cost after the designated removal: nothing for "none", the
    max-cost item for "one", the min-cost item for "any"."""
    total = inst.cost(agent, bundle)
    if up_to == "none" or not bundle:
        return total
    row = inst.costs[agent]
    if up_to == "one":
        removed = max(row[j] for j in bundle)
    elif up_to == "any":
        removed = min(row[j] for j in bundle)
    else:
        raise ValueError(f"unknown up_to mode {up_to!r}")
    return total - removed


def check_propx(inst: Instance, alloc: Allocation, up_to: str = "any") -> FairnessReport:
    """Check (weighted) proportionality, optionally up to one/any item.

    ``up_to="any"`` removes each agent's min-cost item (PROPX / WPROPX),
    ``up_to="one"`` the max-cost item (PROP1 / WPROP1), ``up_to="none"``
    nothing (plain PROP / WPROP).  Weighted shares are used throughout;
    the unweighted notions are the uniform-weight special case.
    """
    alloc.validate_for(inst, require_complete=True)
    alphas: list[Fraction | None] = []
    for i in range(inst.n):
        residual = _residual(inst, i, alloc.bundles[i], up_to)
        share = prop_share(inst, i)
        if residual == 0:
            alphas.append(ZERO)
        elif share == 0:
            alphas.append(None)
        else:
            alphas.append(residual / share)
    suffix = {"any": "X", "one": "1", "none": ""}[up_to]
    prefix = "" if inst.has_uniform_weights else "W"
    return _finish_report(f"{prefix}PROP{suffix}", alphas)


def check_envy(
    inst: Instance,
    alloc: Allocation,
    up_to: str = "any",
    *,
    allow_partial: bool = False,
) -> FairnessReport:
    """Check envy-freeness, optionally up to one/any item of the envious
    agent's own bundle.

    For each ordered pair (i, j) the residual ``c_i(X_i)`` minus the
    designated removal must not exceed ``c_i(X_j)``.  ``allow_partial``
    admits partial allocations (used for mid-run algorithm assertions).
    """
    alloc.validate_for(inst, require_complete=not allow_partial)
    alphas: list[Fraction | None] = []
    for i in range(inst.n):
        residual = _residual(inst, i, alloc.bundles[i], up_to)
        worst: Fraction | None = ZERO
        for j in range(inst.n):
            if j == i:
                continue
            opposing = inst.cost(i, alloc.bundles[j])
            if residual == 0:
                continue
            if opposing == 0:
                worst = None
                break
            ratio = residual / opposing
            if worst is not None and ratio > worst:
                worst = ratio
        alphas.append(worst)
    notion = {"none": "EF", "one": "EF1", "any": "EFX"}[up_to]
    return _finish_report(notion, alphas, note=ENVY_ALPHA_NOTE)


def check_weighted_rr_inequality(
    inst: Instance,
    alloc: Allocation,
    first_items: Mapping[int, int],
    group: Iterable[int],
) -> bool:
    """Check the weighted round-robin guarantee on a group of agents:
    for all i != j in the group,

        c_i(X_i \\ {first_items[i]}) * s_j  <=  c_i(X_j) * s_i

    evaluated in cross-multiplied exact form (no division by shares).
    """
    members = sorted(group)
    residuals: dict[int, Fraction] = {}
    for i in members:
        first = first_items[i]
        if first not in alloc.bundles[i]:
            raise FirstItemNotInBundle(
                f"item {first} is not in agent {i}'s bundle"
            )
        residuals[i] = inst.cost(i, alloc.bundles[i] - {first})
    for i in members:
        for j in members:
            if i == j:
                continue
            lhs = residuals[i] * inst.weights[j]
            rhs = inst.cost(i, alloc.bundles[j]) * inst.weights[i]
            if lhs > rhs:
                return False
    return True
