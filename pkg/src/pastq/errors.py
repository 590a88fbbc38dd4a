"""Exception hierarchy shared by all pastq modules."""


class PastqError(Exception):
    """Base class for all pastq errors."""


class NumericDomainError(PastqError):
    """A numeric input or result left its valid domain (NaN/Inf, broken invariant)."""


class ContractViolationError(PastqError):
    """A caller violated a documented precondition (e.g. incomplete POVM)."""


class DegenerateRetrodictionError(PastqError):
    """Retrodiction is undefined: rho and E have orthogonal supports."""


class StepSizeError(PastqError):
    """An integration step produced an invalid state; reduce dt."""


class IllConditionedError(PastqError):
    """A correction/inversion is singular or numerically unusable."""


class EmptyBinError(PastqError):
    """A post-selection bin contains no shots."""


class ConfigError(PastqError):
    """Invalid or unknown configuration content."""
