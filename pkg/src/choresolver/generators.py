"""Deterministic instance families and seeded random instances.

Family instances are emitted with the raw table values (unnormalized);
pass ``normalized=True`` or load them with the ``normalize`` flag to put
every row on the unit scale.  Generation is a pure function of the
parameters: equal parameters give bit-identical instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidParams
from .instance import Instance

FAMILIES = (
    "random",
    "mms_bad_propx",
    "mms_tight_43",
    "pof_unweighted",
    "pof_weighted",
    "pof_weighted_ido",
    "ordinal_lb",
)

_NOTES = {
    "random": "seeded random costs in [0, 1000], row-normalized",
    "mms_bad_propx": (
        "identical agents, one chore costing n-1 against n-1 unit chores; "
        "maximin-fair bundles can still be badly disproportionate"
    ),
    "mms_tight_43": (
        "identical agents, 2n+1 chores in three descending bands; "
        "envy-cycle elimination lands at 4/3 of the maximin share"
    ),
    "pof_unweighted": (
        "one agent with n-1 cheap chores and an expensive leftover; "
        "proportionality forces social cost about n/6 times the optimum"
    ),
    "pof_weighted": (
        "two agents with near-total and near-zero shares; the cheap agent "
        "may take only one chore, so fairness costs a factor 1/(4 eps)"
    ),
    "pof_weighted_ido": (
        "identical-ordering variant of the weighted hard case; fairness "
        "costs a factor about m/4"
    ),
    "ordinal_lb": (
        "two agents, one item order, two cardinal completions (one spike "
        "vs. all equal); no order-only rule beats 2-approximation"
    ),
}


@dataclass(frozen=True)
class FamilySpec:
    """Parameters selecting one instance from a named family."""

    family: str
    n: int | None = None
    m: int | None = None
    eps: Fraction | None = None
    seed: int | None = None
    weight_mode: str = "uniform"
    completion: str | None = None
    note: str = field(init=False, default="")

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParams(
                f"unknown family {self.family!r}; expected one of {FAMILIES}"
            )
        object.__setattr__(self, "note", _NOTES[self.family])


def gen_random(n: int, m: int, seed: int, weight_mode: str = "uniform") -> Instance:
    """Seeded random instance: integer costs in [0, 1000] row-normalized to
    exact rationals; weights uniform or random positive rationals summing
    to one ("dirichlet-like-rational").  Fully reproducible from the seed.
    """
    if n < 1 or m < 0:
        raise InvalidParams("need n >= 1 and m >= 0")
    if weight_mode not in ("uniform", "dirichlet-like-rational"):
        raise InvalidParams(f"unknown weight mode {weight_mode!r}")
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        raw = [rng.randint(0, 1000) for _ in range(m)]
        while m > 0 and not any(raw):
            raw = [rng.randint(0, 1000) for _ in range(m)]
        total = sum(raw)
        rows.append(tuple(
            Fraction(c, total) if m > 0 else Fraction(0) for c in raw
        ))
    if weight_mode == "uniform":
        weights = tuple(Fraction(1, n) for _ in range(n))
    else:
        raw_w = [rng.randint(1, 1000) for _ in range(n)]
        total_w = sum(raw_w)
        weights = tuple(Fraction(w, total_w) for w in raw_w)
    return Instance(n=n, m=m, costs=tuple(rows), weights=weights)


def _uniform_weights(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, n) for _ in range(n))


def _mms_bad_propx(n: int) -> Instance:
    if n < 2:
        raise InvalidParams("mms_bad_propx needs n >= 2")
    row = (Fraction(n - 1),) + (Fraction(1),) * (n - 1)
    return Instance(n, n, tuple(row for _ in range(n)), _uniform_weights(n))


def _mms_tight_43(n: int) -> Instance:
    if n < 2:
        raise InvalidParams("mms_tight_43 needs n >= 2")
    eps = Fraction(1, 6 * (n - 1))
    row = (
        tuple(Fraction(2, 3) - (j - 1) * eps for j in range(1, n + 1))
        + tuple(Fraction(1, 2) - (j - 1) * eps for j in range(1, n + 1))
        + (Fraction(1, 3),)
    )
    return Instance(n, 2 * n + 1, tuple(row for _ in range(n)), _uniform_weights(n))


def _pof_unweighted(n: int) -> Instance:
    if n < 2:
        raise InvalidParams("pof_unweighted needs n >= 2")
    small = Fraction(2, n * n)
    first = (small,) * (n - 1) + (1 - (n - 1) * small,)
    flat = (Fraction(1, n),) * n
    rows = (first,) + tuple(flat for _ in range(n - 1))
    return Instance(n, n, rows, _uniform_weights(n))


def _pof_weighted(eps: Fraction) -> Instance:
    if not 0 < eps < Fraction(1, 2):
        raise InvalidParams("pof_weighted needs 0 < eps < 1/2")
    rows = (
        (Fraction(1, 2), Fraction(1, 2), Fraction(0)),
        (eps, eps, 1 - 2 * eps),
    )
    weights = (1 - eps * eps, eps * eps)
    return Instance(2, 3, rows, weights)


def _pof_weighted_ido(m: int) -> Instance:
    if m < 2:
        raise InvalidParams("pof_weighted_ido needs m >= 2")
    first = (Fraction(1, 2), Fraction(1, 2)) + (Fraction(0),) * (m - 2)
    second = (Fraction(1, m),) * m
    weights = (1 - Fraction(1, m * m), Fraction(1, m * m))
    return Instance(2, m, (first, second), weights)


def _ordinal_lb(m: int, completion: str | None) -> Instance:
    if m < 2:
        raise InvalidParams("ordinal_lb needs m >= 2")
    if completion == "spike":
        row = (Fraction(1),) + (Fraction(0),) * (m - 1)
    elif completion == "uniform":
        row = (Fraction(1, m),) * m
    else:
        raise InvalidParams(
            "ordinal_lb needs completion='spike' or 'uniform'"
        )
    return Instance(2, m, (row, row), _uniform_weights(2))


def gen(spec: FamilySpec, *, normalized: bool = False) -> Instance:
    """Materialize a family instance; see FAMILIES for the catalogue."""
    fam = spec.family
    if fam == "random":
        if spec.n is None or spec.m is None:
            raise InvalidParams("random family needs n and m")
        inst = gen_random(spec.n, spec.m, spec.seed or 0, spec.weight_mode)
    elif fam == "mms_bad_propx":
        if spec.n is None:
            raise InvalidParams("mms_bad_propx needs n")
        inst = _mms_bad_propx(spec.n)
    elif fam == "mms_tight_43":
        if spec.n is None:
            raise InvalidParams("mms_tight_43 needs n")
        inst = _mms_tight_43(spec.n)
    elif fam == "pof_unweighted":
        if spec.n is None:
            raise InvalidParams("pof_unweighted needs n")
        inst = _pof_unweighted(spec.n)
    elif fam == "pof_weighted":
        if spec.eps is None:
            raise InvalidParams("pof_weighted needs eps")
        inst = _pof_weighted(spec.eps)
    elif fam == "pof_weighted_ido":
        if spec.m is None:
            raise InvalidParams("pof_weighted_ido needs m")
        inst = _pof_weighted_ido(spec.m)
    else:
        if spec.m is None:
            raise InvalidParams("ordinal_lb needs m")
        inst = _ordinal_lb(spec.m, spec.completion)
    return inst.normalized() if normalized else inst
