"""Exception types shared across the package."""


class QueryWithoutBudget(RuntimeError):
    """Overall-record query attempted with no comparison budget left."""


class IllegalAction(RuntimeError):
    """Policy emitted an action the simulation protocol forbids."""


class BudgetInsufficient(RuntimeError):
    """Pairwise comparison cost exceeds the remaining budget."""


class DimensionError(ValueError):
    """Threshold table or group count does not match the instance."""


class EmptyPrefix(ValueError):
    """Proportion estimate requested from an empty observation prefix."""


class DomainError(ValueError):
    """Numeric argument outside the domain of the requested quantity."""


class InstanceTooLarge(ValueError):
    """Exhaustive enumeration refused: outcome space exceeds the cap."""


class SpecMismatch(ValueError):
    """Decision tables were computed for a different problem instance."""


class DegenerateRegion(RuntimeError):
    """Acceptance region never intersects the requested line."""
