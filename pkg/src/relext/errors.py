"""Exception types. Each maps to one CLI exit code."""


class RelextError(Exception):
    exit_code = 1


class ParseError(RelextError):
    exit_code = 2


class MalformedTableError(ParseError):
    pass


class HypothesisError(RelextError):
    """A mathematical precondition does not hold (not ab-surjective, not surjective, ...)."""

    exit_code = 3


class NotAHomomorphismError(HypothesisError):
    pass


class GenerationError(HypothesisError):
    pass


class NormalityError(HypothesisError):
    pass


class BudgetError(RelextError):
    """A configured size cap or brute-force budget would be exceeded."""

    exit_code = 4


class InternalInvariantError(RelextError):
    """Should be unreachable; signals a sign-convention or bookkeeping fault."""

    exit_code = 5
