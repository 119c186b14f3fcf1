"""Exception types shared across the package."""


class ChoresolverError(Exception):
    """Base class for all errors raised by this package."""


class MalformedRational(ChoresolverError):
    """A rational value was not an integer or a parseable "p/q" string."""


class NonNegativityViolation(ChoresolverError):
    """A cost or weight was negative."""


class ZeroTotalCost(ChoresolverError):
    """Row normalization was requested for a row that sums to zero."""


class WeightSumMismatch(ChoresolverError):
    """Explicit weights do not sum to exactly one."""


class IncompatibleDimensions(ChoresolverError):
    """An allocation does not match the instance (wrong agent count,
    out-of-range items, or incomplete when completeness is required)."""


class FirstItemNotInBundle(ChoresolverError):
    """A designated first item is not contained in the agent's bundle."""


class NotIdo(ChoresolverError):
    """An algorithm requiring identical-ordering input received a general
    instance; apply the reduction wrapper first."""


class BudgetExceeded(ChoresolverError):
    """An exact search would exceed its configured enumeration budget.
    Hard error by design: oracle output is used as ground truth."""


class ZeroShareInN2(ChoresolverError):
    """A zero-share agent ended up in the round-robin group (cannot happen
    for valid weights; defensive check)."""


class InvalidParams(ChoresolverError):
    """Instance-family parameters are outside the family's valid range."""


class ZeroOpt(ChoresolverError):
    """The unconstrained optimal social cost is zero, so cost ratios are
    undefined."""
