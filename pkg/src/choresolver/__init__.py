"""Exact-arithmetic allocation and certification of indivisible chores.

The library computes allocations via four deterministic algorithms,
verifies proportionality/envy fairness notions with exact rationals, and
certifies maximin-share / AnyPrice-share approximation factors and
price-of-fairness bounds with brute-force oracles at desk scale.
"""

from .algorithms import (
    ALGORITHMS,
    AgentPartition,
    AlgorithmTrace,
    bid_and_take,
    envy_cycle_eliminate,
    ordinal_unweighted,
    ordinal_weighted,
    pick_back_bijection,
    replay_trace,
    solve_general,
)
from .errors import (
    BudgetExceeded,
    ChoresolverError,
    FirstItemNotInBundle,
    IncompatibleDimensions,
    InvalidParams,
    MalformedRational,
    NonNegativityViolation,
    NotIdo,
    WeightSumMismatch,
    ZeroOpt,
    ZeroShareInN2,
    ZeroTotalCost,
)
from .fairness import (
    FairnessReport,
    check_envy,
    check_propx,
    check_weighted_rr_inequality,
    prop_share,
)
from .generators import FAMILIES, FamilySpec, gen, gen_random
from .instance import (
    Allocation,
    IdoWitness,
    Instance,
    format_rational,
    is_ido,
    load_allocation,
    load_instance,
    optimal_allocation,
    optimal_social_cost,
    parse_rational,
    social_cost,
    to_ido,
)
from .oracles import (
    OracleValue,
    aps_lower_bound,
    certify_alpha,
    exact_aps,
    exact_mms,
    mms_lower_bound,
)
from .pof import (
    ExperimentRecord,
    min_fair_social_cost,
    pof_ratio,
    render_records_figure,
    write_records_csv,
)

__version__ = "0.1.0"
