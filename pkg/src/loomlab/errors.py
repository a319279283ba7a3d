"""Exception hierarchy shared by all modules (the CLI maps these to exit codes)."""


class LoomError(Exception):
    pass


class PreconditionFailed(LoomError, ValueError):
    pass


class NotFound(LoomError, LookupError):
    """The search space was exhausted without a solution."""


class BudgetExceeded(LoomError, RuntimeError):
    """A node/column budget ran out before the search was exhausted."""


class ParamsTooSmall(PreconditionFailed):
    pass


class ImbalanceTooLarge(PreconditionFailed):
    pass


class CoverInvalid(PreconditionFailed):
    pass


class CapExceeded(BudgetExceeded):
    """The instance is larger than an exhaustive search is allowed to handle."""
