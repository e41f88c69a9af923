"""Exception types raised across the package."""


class ChargeRemovalError(Exception):
    """Base class for all package errors."""


class InvalidGraphError(ChargeRemovalError, ValueError):
    """A crystal graph violates one of its structural invariants."""


class UnknownIonError(ChargeRemovalError, KeyError):
    pass


class MissingForceFieldError(ChargeRemovalError, KeyError):
    pass


class DuplicatePairError(ChargeRemovalError, ValueError):
    pass


class MinimalityUndecidable(ChargeRemovalError):
    """Charges exceed the configured bound, so minimality is not checked."""


class NoBalancedSolution(ChargeRemovalError, ValueError):
    pass


class OverlapError(ChargeRemovalError, ValueError):
    def __init__(self, i, j, distance, minimum):
        super().__init__(
            f"discs {i} and {j} overlap: centre distance {distance!r} < {minimum!r}"
        )
        self.pair = (i, j)
        self.distance = distance


class ScalingError(ChargeRemovalError, ValueError):
    pass


class NotOrthogonalError(ChargeRemovalError, ValueError):
    """Two non-adjacent pennies sit closer than sqrt(2) times the tangency distance."""


class TriviallySatisfiable(ChargeRemovalError):
    """Every item fits in the knapsack; no reduction is needed."""


class OracleCapExceeded(ChargeRemovalError, ValueError):
    pass
