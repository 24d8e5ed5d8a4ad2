"""Exception types shared across the workbench."""


class RelaxforgeError(Exception):
    """Base class for all workbench errors."""


class UnsupportedDivisionError(RelaxforgeError):
    """Scalar division by zero or by a multi-term scalar."""


class SpaceMismatchError(RelaxforgeError):
    """Operands live in different inner-product spaces."""


class IrrationalGramError(RelaxforgeError):
    """A Gram entry that must be rational carries a surd residue."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InfeasibleFlowerError(RelaxforgeError):
    """Requested flower parameters violate an admissibility inequality."""


class NotARefutationError(RelaxforgeError):
    """Dual template evaluates to a non-negative objective (p <= h)."""


class CoefficientBoundError(RelaxforgeError):
    """Equality-protocol coefficients violate 0 <= q^2 <= 1/4 - p^2."""


class SizeCapError(RelaxforgeError):
    """Brute-force input exceeds the configured size cap."""


class CompositionError(RelaxforgeError):
    """A grafted protocol failed verification."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoGuaranteeError(RelaxforgeError):
    """Message count is not smaller than the input count; no overlap is forced."""


class InvalidSplitError(RelaxforgeError):
    """A submitted decomposition does not sum back to the original vector."""
