"""Exception hierarchy.

Every error carries a short machine-readable ``code``; the CLI maps
``BudgetError`` subclasses to exit status 3 and everything else to 2.
"""


class MisLabError(Exception):
    code = "error"


class DomainError(MisLabError):
    code = "domain_error"


class BudgetError(MisLabError):
    code = "budget_exceeded"


class ReducibleMatrix(DomainError):
    code = "reducible_matrix"


class NotIrreducible(DomainError):
    code = "not_irreducible"


class NotMixing(DomainError):
    code = "not_mixing"


class NonConvergence(DomainError):
    code = "non_convergence"


class OutOfBox(DomainError):
    code = "out_of_box"


class ZeroTau(DomainError):
    code = "zero_tau"


class DegenerateRegion(DomainError):
    code = "degenerate_region"


class TargetOutOfRange(DomainError):
    code = "target_out_of_range"


class EmptyStates(DomainError):
    code = "empty_states"


class BadWeights(DomainError):
    code = "bad_weights"


class DegenerateInterval(DomainError):
    code = "degenerate_interval"


class InvalidSpec(DomainError):
    code = "invalid_spec"


class ParseError(DomainError):
    code = "parse_error"


class BoxTooLarge(BudgetError):
    code = "box_too_large"


class ResultTooLarge(BudgetError):
    code = "result_too_large"


class TooLarge(BudgetError):
    code = "too_large"


class PrecisionBudgetExceeded(BudgetError):
    code = "precision_budget_exceeded"
